//! `kisspoly` — compute with polynomials orthogonal w.r.t. e^{i omega x} on
//! [-1,1]: moments, Hankel determinants and derivatives, the polynomials and
//! recurrence coefficients, root trajectories, determinant zeros on the real
//! line and in the complex plane, and the full verification suites.

mod output;

use clap::{Parser, Subcommand, ValueEnum};
use kisspoly::asymptotics::{self, Parity};
use kisspoly::hankel;
use kisspoly::moments;
use kisspoly::numerics::{Complex, PrecisionPolicy};
use kisspoly::oracle;
use kisspoly::orthopoly;
use kisspoly::roots;
use kisspoly::verify;
use output::{complex_json, dec, digits_for, sink, write_csv, write_json, Format, Provenance};
use rayon::prelude::*;
use rug::Float;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kisspoly", version, about, disable_help_subcommand = true)]
struct Cli {
    /// Working mantissa precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    bits: u32,

    /// Acceptance tolerance for adaptive verification.
    #[arg(long = "rel-tol", global = true, default_value_t = 1e-30)]
    rel_tol: f64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for independent omega points / suite cases
    /// (KP_THREADS is honored when the flag is absent).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RefineFrom {
    Peel,
    Grid,
}

#[derive(Subcommand)]
enum Command {
    /// Moments mu_0..mu_n of the weight at a fixed omega.
    Moments {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: String,
    },
    /// Hankel determinant h_n (or its omega-derivative).
    Hankel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: String,
        #[arg(long, default_value_t = 0)]
        deriv: usize,
    },
    /// Monic p_n or rescaled p~_n, optionally evaluated at a point.
    Poly {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: String,
        #[arg(long)]
        tilde: bool,
        /// Evaluation point "re,im".
        #[arg(long)]
        eval: Option<String>,
    },
    /// Recurrence coefficients alpha_0..alpha_{m-1}, beta_1..beta_{m-1}.
    Recurrence {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        omega: String,
    },
    /// Root trajectory of p_n over an omega range.
    Trajectory {
        #[arg(long)]
        n: usize,
        #[arg(long = "omega-range")]
        omega_range: String,
        #[arg(long)]
        steps: usize,
    },
    /// Real zeros of h_n located on a grid.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        range: String,
        #[arg(long)]
        grid: usize,
    },
    /// Complex zeros of h_n in the first quadrant.
    Zeros {
        #[arg(long)]
        n: usize,
        /// Restrict to the first quadrant (mirrors follow by conjugation).
        #[arg(long)]
        quadrant: bool,
        #[arg(long = "refine-from", value_enum, default_value_t = RefineFrom::Peel)]
        refine_from: RefineFrom,
        /// Scan range "a:b" for --refine-from grid.
        #[arg(long, default_value = "0.1:40")]
        range: String,
    },
    /// Onion-peel Lambert-W zero predictions.
    Peel {
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long = "N")]
        n_half: usize,
        #[arg(long)]
        k: usize,
    },
    /// Kissing events: real zeros of h_{2N} with the degeneracy data.
    Kissing {
        #[arg(long = "N")]
        n_half: usize,
        #[arg(long)]
        range: String,
    },
    /// Heine multivariate-integral oracle for h_{n-1}.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: String,
        #[arg(long)]
        order: usize,
    },
    /// Run a verification suite; exits 2 on failure.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn parse_float(s: &str, bits: u32) -> Result<Float, String> {
    Float::parse(s)
        .map(|p| Float::with_val(bits, p))
        .map_err(|e| format!("invalid number {:?}: {}", s, e))
}

fn parse_range(s: &str, bits: u32) -> Result<(Float, Float, f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("range must be a:b, got {:?}", s))?;
    let fa = parse_float(a, bits)?;
    let fb = parse_float(b, bits)?;
    let (da, db) = (fa.to_f64(), fb.to_f64());
    Ok((fa, fb, da, db))
}

fn parse_complex(s: &str, bits: u32) -> Result<Complex, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("complex point must be re,im, got {:?}", s))?;
    Ok(Complex::new(parse_float(re, bits)?, parse_float(im, bits)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2 on usage errors; the contract here is 1
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("KP_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
    {
        eprintln!("thread pool: {}", e);
        return ExitCode::from(1);
    }
    match run(cli, threads) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli, threads: usize) -> Result<ExitCode, String> {
    let policy = PrecisionPolicy::new(cli.bits, cli.rel_tol, cli.bits.max(4096));
    let digits = digits_for(cli.bits);
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let mut prov = Provenance {
        command: "",
        bits: cli.bits,
        rel_tol: cli.rel_tol,
        threads,
        format,
        args: Vec::new(),
    };
    let mut w = sink(&cli.out).map_err(|e| e.to_string())?;
    let fail = |e: kisspoly::Error| e.to_string();

    match &cli.command {
        Command::Moments { n, omega } => {
            prov.command = "moments";
            prov.args = vec![("n", n.to_string()), ("omega", omega.clone())];
            let om = parse_float(omega, cli.bits)?;
            let seq = moments::moments(*n, &om, &policy).map_err(fail)?;
            match format {
                Format::Json => {
                    let values: Vec<Value> =
                        seq.values.iter().map(|v| complex_json(v, digits)).collect();
                    write_json(
                        &mut w,
                        &prov,
                        json!({ "omega": dec(&om, digits), "values": values }),
                    )
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = seq
                        .values
                        .iter()
                        .enumerate()
                        .map(|(k, v)| vec![k.to_string(), dec(&v.re, digits), dec(&v.im, digits)])
                        .collect();
                    write_csv(&mut w, &prov, &["n", "re", "im"], &rows)
                }
            }
            .map_err(|e| e.to_string())?;
        }
        Command::Hankel { n, omega, deriv } => {
            prov.command = "hankel";
            prov.args = vec![
                ("n", n.to_string()),
                ("omega", omega.clone()),
                ("deriv", deriv.to_string()),
            ];
            let om = parse_float(omega, cli.bits)?;
            let (value, raw) = match deriv {
                0 => {
                    let view = hankel::hankel_det(*n, &om, &policy).map_err(fail)?;
                    (view.det.clone(), Some(view.det_raw))
                }
                1 | 2 => (
                    hankel::hankel_det_derivative(*n, &om, *deriv, &policy).map_err(fail)?,
                    None,
                ),
                _ => return Err("--deriv must be 0, 1 or 2".into()),
            };
            match format {
                Format::Json => {
                    let mut data = json!({ "omega": dec(&om, digits), "h": dec(&value, digits) });
                    if let Some(raw) = raw {
                        data["h_raw"] = complex_json(&raw, digits);
                    }
                    write_json(&mut w, &prov, data)
                }
                Format::Csv => write_csv(
                    &mut w,
                    &prov,
                    &["n", "omega", "deriv", "value"],
                    &[vec![
                        n.to_string(),
                        dec(&om, digits),
                        deriv.to_string(),
                        dec(&value, digits),
                    ]],
                ),
            }
            .map_err(|e| e.to_string())?;
        }
        Command::Poly {
            n,
            omega,
            tilde,
            eval,
        } => {
            prov.command = "poly";
            prov.args = vec![
                ("n", n.to_string()),
                ("omega", omega.clone()),
                ("tilde", tilde.to_string()),
            ];
            if let Some(e) = eval {
                prov.args.push(("eval", e.clone()));
            }
            let om = parse_float(omega, cli.bits)?;
            let coeffs = if *tilde {
                orthopoly::tilde_op(*n, &om, &policy).map_err(fail)?.coeffs
            } else {
                orthopoly::monic_op(*n, &om, &policy).map_err(fail)?.coeffs
            };
            let eval_pair = match eval {
                Some(s) => {
                    let z = parse_complex(s, cli.bits)?;
                    let v = orthopoly::evaluate(&coeffs, &z);
                    Some((z, v))
                }
                None => None,
            };
            match format {
                Format::Json => {
                    let cs: Vec<Value> = coeffs.iter().map(|c| complex_json(c, digits)).collect();
                    let mut data = json!({
                        "omega": dec(&om, digits),
                        "kind": if *tilde { "tilde" } else { "monic" },
                        "coeffs": cs,
                    });
                    if let Some((z, v)) = eval_pair {
                        data["eval"] = json!({
                            "z": complex_json(&z, digits),
                            "value": complex_json(&v, digits),
                        });
                    }
                    write_json(&mut w, &prov, data)
                }
                Format::Csv => {
                    let mut rows: Vec<Vec<String>> = coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, c)| {
                            vec![
                                "coeff".into(),
                                k.to_string(),
                                dec(&c.re, digits),
                                dec(&c.im, digits),
                            ]
                        })
                        .collect();
                    if let Some((z, v)) = eval_pair {
                        rows.push(vec![
                            "eval_z".into(),
                            String::new(),
                            dec(&z.re, digits),
                            dec(&z.im, digits),
                        ]);
                        rows.push(vec![
                            "eval_value".into(),
                            String::new(),
                            dec(&v.re, digits),
                            dec(&v.im, digits),
                        ]);
                    }
                    write_csv(&mut w, &prov, &["kind", "k", "re", "im"], &rows)
                }
            }
            .map_err(|e| e.to_string())?;
        }
        Command::Recurrence { m, omega } => {
            prov.command = "recurrence";
            prov.args = vec![("m", m.to_string()), ("omega", omega.clone())];
            let om = parse_float(omega, cli.bits)?;
            let rc = orthopoly::recurrence_coeffs(*m, &om, &policy).map_err(fail)?;
            match format {
                Format::Json => {
                    let alphas: Vec<Value> =
                        rc.alphas.iter().map(|a| complex_json(a, digits)).collect();
                    let betas: Vec<Value> =
                        rc.betas.iter().map(|b| complex_json(b, digits)).collect();
                    write_json(
                        &mut w,
                        &prov,
                        json!({ "omega": dec(&om, digits), "alphas": alphas, "betas": betas }),
                    )
                }
                Format::Csv => {
                    let mut rows = Vec::new();
                    for (k, a) in rc.alphas.iter().enumerate() {
                        rows.push(vec![
                            "alpha".into(),
                            k.to_string(),
                            dec(&a.re, digits),
                            dec(&a.im, digits),
                        ]);
                    }
                    for (k, b) in rc.betas.iter().enumerate() {
                        rows.push(vec![
                            "beta".into(),
                            (k + 1).to_string(),
                            dec(&b.re, digits),
                            dec(&b.im, digits),
                        ]);
                    }
                    write_csv(&mut w, &prov, &["kind", "n", "re", "im"], &rows)
                }
            }
            .map_err(|e| e.to_string())?;
        }
        Command::Trajectory {
            n,
            omega_range,
            steps,
        } => {
            prov.command = "trajectory";
            prov.args = vec![
                ("n", n.to_string()),
                ("omega-range", omega_range.clone()),
                ("steps", steps.to_string()),
            ];
            if *n == 0 {
                return Err("trajectory needs --n >= 1".into());
            }
            let (a, b, _, _) = parse_range(omega_range, cli.bits)?;
            let samples = roots::trajectory(*n, &a, &b, *steps, &policy).map_err(fail)?;
            match format {
                Format::Json => {
                    let arr: Vec<Value> = samples
                        .iter()
                        .map(|s| {
                            json!({
                                "omega": dec(&s.omega, digits),
                                "exists": s.exists,
                                "roots": s.roots.iter()
                                    .map(|r| complex_json(r, digits))
                                    .collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    write_json(&mut w, &prov, json!({ "samples": arr }))
                }
                Format::Csv => {
                    // one row per (sample, root); flagged samples keep a
                    // single row with empty root columns
                    let mut rows = Vec::new();
                    for s in &samples {
                        if !s.exists {
                            rows.push(vec![
                                dec(&s.omega, digits),
                                "-1".into(),
                                String::new(),
                                String::new(),
                                "0".into(),
                            ]);
                            continue;
                        }
                        for (idx, r) in s.roots.iter().enumerate() {
                            rows.push(vec![
                                dec(&s.omega, digits),
                                idx.to_string(),
                                dec(&r.re, digits),
                                dec(&r.im, digits),
                                "1".into(),
                            ]);
                        }
                    }
                    write_csv(
                        &mut w,
                        &prov,
                        &["omega", "root_index", "re", "im", "exists_flag"],
                        &rows,
                    )
                }
            }
            .map_err(|e| e.to_string())?;
        }
        Command::Scan { n, range, grid } => {
            prov.command = "scan";
            prov.args = vec![
                ("n", n.to_string()),
                ("range", range.clone()),
                ("grid", grid.to_string()),
            ];
            let (_, _, lo, hi) = parse_range(range, cli.bits)?;
            let zeros = scan_parallel(*n, lo, hi, *grid, &policy, threads).map_err(fail)?;
            emit_zeros(&mut w, &prov, format, digits, &zeros)?;
        }
        Command::Zeros {
            n,
            quadrant,
            refine_from,
            range,
        } => {
            prov.command = "zeros";
            prov.args = vec![
                ("n", n.to_string()),
                ("quadrant", quadrant.to_string()),
                (
                    "refine-from",
                    match refine_from {
                        RefineFrom::Peel => "peel".into(),
                        RefineFrom::Grid => "grid".into(),
                    },
                ),
                ("range", range.clone()),
            ];
            match refine_from {
                RefineFrom::Grid => {
                    let (_, _, lo, hi) = parse_range(range, cli.bits)?;
                    let grid = (((hi - lo) * 100.0).ceil() as usize).max(64);
                    let zeros = scan_parallel(*n, lo, hi, grid, &policy, threads).map_err(fail)?;
                    emit_zeros(&mut w, &prov, format, digits, &zeros)?;
                }
                RefineFrom::Peel => {
                    let (parity, n_half) = if n % 2 == 1 {
                        (Parity::Odd, n.div_ceil(2))
                    } else {
                        (Parity::Even, n / 2)
                    };
                    if n_half == 0 {
                        return Err("peel refinement needs n >= 1".into());
                    }
                    let mut preds = Vec::new();
                    for k in 0..n_half {
                        let max_ell = match parity {
                            Parity::Odd => 4 * k + 1,
                            Parity::Even => 4 * k + 3,
                        };
                        for ell in 0..=max_ell {
                            preds.extend(
                                asymptotics::peel_prediction(parity, n_half, k, ell, &policy)
                                    .map_err(fail)?,
                            );
                        }
                    }
                    // refinement is independent per prediction
                    let refined: Vec<_> = preds
                        .par_chunks(preds.len().div_ceil(threads).max(1))
                        .map(|chunk| roots::refine_peel_predictions(chunk, &policy))
                        .collect();
                    let mut rows = Vec::new();
                    let mut seen: Vec<Complex> = Vec::new();
                    for (p, z) in refined.into_iter().flatten() {
                        if *quadrant && (z.omega.re.to_f64() <= 0.0 || z.omega.im.to_f64() < -1e-12)
                        {
                            continue;
                        }
                        if seen.iter().any(|s| s.sub(&z.omega).abs() < 1e-9f64) {
                            continue;
                        }
                        seen.push(z.omega.clone());
                        rows.push((p, z));
                    }
                    rows.sort_by(|a, b| a.1.omega.abs().partial_cmp(&b.1.omega.abs()).unwrap());
                    match format {
                        Format::Json => {
                            let arr: Vec<Value> = rows
                                .iter()
                                .map(|(p, z)| {
                                    json!({
                                        "k": p.k,
                                        "ell": p.ell,
                                        "branch": p.branch,
                                        "prediction": complex_json(&p.omega_pred, digits),
                                        "omega": complex_json(&z.omega, digits),
                                        "residual": format!("{:e}", z.refine_residual.to_f64()),
                                    })
                                })
                                .collect();
                            write_json(&mut w, &prov, json!({ "zeros": arr }))
                        }
                        Format::Csv => {
                            let rows: Vec<Vec<String>> = rows
                                .iter()
                                .map(|(p, z)| {
                                    vec![
                                        n.to_string(),
                                        p.k.to_string(),
                                        p.ell.to_string(),
                                        p.branch.to_string(),
                                        dec(&p.omega_pred.re, digits),
                                        dec(&p.omega_pred.im, digits),
                                        dec(&z.omega.re, digits),
                                        dec(&z.omega.im, digits),
                                        format!("{:e}", z.refine_residual.to_f64()),
                                    ]
                                })
                                .collect();
                            write_csv(
                                &mut w,
                                &prov,
                                &[
                                    "n", "k", "ell", "branch", "pred_re", "pred_im", "re", "im",
                                    "residual",
                                ],
                                &rows,
                            )
                        }
                    }
                    .map_err(|e| e.to_string())?;
                }
            }
        }
        Command::Peel { parity, n_half, k } => {
            prov.command = "peel";
            prov.args = vec![
                (
                    "parity",
                    match parity {
                        ParityArg::Even => "even".into(),
                        ParityArg::Odd => "odd".into(),
                    },
                ),
                ("N", n_half.to_string()),
                ("k", k.to_string()),
            ];
            let parity = match parity {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            };
            let max_ell = match parity {
                Parity::Odd => 4 * k + 1,
                Parity::Even => 4 * k + 3,
            };
            let mut preds = Vec::new();
            for ell in 0..=max_ell {
                preds.extend(
                    asymptotics::peel_prediction(parity, *n_half, *k, ell, &policy)
                        .map_err(fail)?,
                );
            }
            match format {
                Format::Json => {
                    let arr: Vec<Value> = preds
                        .iter()
                        .map(|p| {
                            json!({
                                "ell": p.ell,
                                "branch": p.branch,
                                "omega": complex_json(&p.omega_pred, digits),
                            })
                        })
                        .collect();
                    write_json(&mut w, &prov, json!({ "predictions": arr }))
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = preds
                        .iter()
                        .map(|p| {
                            vec![
                                p.ell.to_string(),
                                p.branch.to_string(),
                                dec(&p.omega_pred.re, digits),
                                dec(&p.omega_pred.im, digits),
                            ]
                        })
                        .collect();
                    write_csv(&mut w, &prov, &["ell", "branch", "re", "im"], &rows)
                }
            }
            .map_err(|e| e.to_string())?;
        }
        Command::Kissing { n_half, range } => {
            prov.command = "kissing";
            prov.args = vec![("N", n_half.to_string()), ("range", range.clone())];
            let (_, _, lo, hi) = parse_range(range, cli.bits)?;
            let events = roots::kissing_detect(*n_half, lo, hi, &policy).map_err(fail)?;
            match format {
                Format::Json => {
                    let arr: Vec<Value> = events
                        .iter()
                        .map(|e| {
                            json!({
                                "omega": dec(&e.omega, digits),
                                "constant": complex_json(&e.constant, digits),
                                "coeff_residual": format!("{:e}", e.coeff_residual.to_f64()),
                                "root_distance": format!("{:e}", e.root_distance.to_f64()),
                            })
                        })
                        .collect();
                    write_json(&mut w, &prov, json!({ "events": arr }))
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = events
                        .iter()
                        .map(|e| {
                            vec![
                                dec(&e.omega, digits),
                                dec(&e.constant.re, digits),
                                dec(&e.constant.im, digits),
                                format!("{:e}", e.coeff_residual.to_f64()),
                                format!("{:e}", e.root_distance.to_f64()),
                            ]
                        })
                        .collect();
                    write_csv(
                        &mut w,
                        &prov,
                        &[
                            "omega",
                            "const_re",
                            "const_im",
                            "coeff_residual",
                            "root_distance",
                        ],
                        &rows,
                    )
                }
            }
            .map_err(|e| e.to_string())?;
        }
        Command::Oracle { n, omega, order } => {
            prov.command = "oracle";
            prov.args = vec![
                ("n", n.to_string()),
                ("omega", omega.clone()),
                ("order", order.to_string()),
            ];
            let om = parse_float(omega, cli.bits)?;
            let value = oracle::heine_hankel(*n, &om, *order, &policy).map_err(fail)?;
            let det = hankel::hankel_det(n - 1, &om, &policy).map_err(fail)?.det;
            let rel = {
                let d = (value.re.clone() - &det).abs();
                let s = det.clone().abs();
                if s.is_zero() {
                    f64::NAN
                } else {
                    (d / s).to_f64()
                }
            };
            match format {
                Format::Json => write_json(
                    &mut w,
                    &prov,
                    json!({
                        "omega": dec(&om, digits),
                        "value": complex_json(&value, digits),
                        "hankel_det": dec(&det, digits),
                        "rel_diff": format!("{:e}", rel),
                    }),
                ),
                Format::Csv => write_csv(
                    &mut w,
                    &prov,
                    &["n", "omega", "order", "re", "im", "hankel_det", "rel_diff"],
                    &[vec![
                        n.to_string(),
                        dec(&om, digits),
                        order.to_string(),
                        dec(&value.re, digits),
                        dec(&value.im, digits),
                        dec(&det, digits),
                        format!("{:e}", rel),
                    ]],
                ),
            }
            .map_err(|e| e.to_string())?;
        }
        Command::Verify { suite, tol } => {
            prov.command = "verify";
            prov.args = vec![("suite", suite.clone())];
            if let Some(t) = tol {
                prov.args.push(("tol", format!("{:e}", t)));
            }
            let results = match verify::run_suite(suite, &policy, *tol) {
                Some(r) => r,
                None => {
                    return Err(format!(
                        "unknown suite {:?}; valid: {}",
                        suite,
                        verify::SUITES.join("|")
                    ))
                }
            };
            let mut all_passed = true;
            for r in &results {
                println!("{}", r.summary_line());
                for d in &r.details {
                    println!("    {}", d);
                }
                all_passed &= r.passed;
            }
            if cli.out.is_some() || format == Format::Csv {
                match format {
                    Format::Json => {
                        let arr: Vec<Value> = results
                            .iter()
                            .map(|r| {
                                json!({
                                    "id": r.id,
                                    "name": r.name,
                                    "passed": r.passed,
                                    "details": r.details,
                                })
                            })
                            .collect();
                        write_json(&mut w, &prov, json!({ "results": arr }))
                    }
                    Format::Csv => {
                        let rows: Vec<Vec<String>> = results
                            .iter()
                            .map(|r| vec![r.id.to_string(), r.name.into(), r.passed.to_string()])
                            .collect();
                        write_csv(&mut w, &prov, &["id", "name", "passed"], &rows)
                    }
                }
                .map_err(|e| e.to_string())?;
            }
            if !all_passed {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Grid-evaluate h_n in parallel over omega points, then detect and refine
/// sign changes sequentially (deterministic order).
fn scan_parallel(
    n: usize,
    lo: f64,
    hi: f64,
    grid: usize,
    policy: &PrecisionPolicy,
    threads: usize,
) -> kisspoly::Result<Vec<roots::HankelZero>> {
    if threads <= 1 {
        return roots::real_zero_scan(n, lo, hi, grid, policy);
    }
    let omegas: Vec<Float> = (0..grid)
        .map(|i| Float::with_val(policy.bits, lo + (hi - lo) * i as f64 / (grid - 1) as f64))
        .collect();
    let values: Vec<Float> = omegas
        .par_iter()
        .map(|w| hankel::hankel_det(n, w, policy).map(|h| h.det))
        .collect::<kisspoly::Result<Vec<_>>>()?;
    let mut out = Vec::new();
    let spacing = (hi - lo) / (grid - 1) as f64;
    let dip_tol = (spacing * spacing).max(policy.rel_tol);
    for i in 0..grid - 1 {
        if values[i].clone() * &values[i + 1] < 0u32 {
            let root = roots::refine_bracketed_zero(n, &omegas[i], &omegas[i + 1], policy)?;
            let env = hankel::envelope(n as i64, &root);
            let resid = hankel::hankel_det(n, &root, policy)?.det.abs() / env;
            out.push(roots::HankelZero {
                n,
                omega: Complex::real(root),
                kind: roots::ZeroKind::RealLine,
                refine_residual: resid,
            });
        } else if i > 0 {
            let env = hankel::envelope(n as i64, &omegas[i]);
            let dip = values[i].clone().abs() < env.clone() * Float::with_val(policy.bits, dip_tol);
            let local_min = values[i].clone().abs() < values[i - 1].clone().abs()
                && values[i].clone().abs() < values[i + 1].clone().abs();
            if dip && local_min {
                out.push(roots::HankelZero {
                    n,
                    omega: Complex::real(omegas[i].clone()),
                    kind: roots::ZeroKind::SuspectedDouble,
                    refine_residual: values[i].clone().abs() / env,
                });
            }
        }
    }
    Ok(out)
}

fn emit_zeros(
    w: &mut dyn std::io::Write,
    prov: &Provenance,
    format: Format,
    digits: usize,
    zeros: &[roots::HankelZero],
) -> Result<(), String> {
    let kind_str = |k: &roots::ZeroKind| match k {
        roots::ZeroKind::RealLine => "real",
        roots::ZeroKind::ComplexPlane => "complex",
        roots::ZeroKind::SuspectedDouble => "suspected_double",
    };
    match format {
        Format::Json => {
            let arr: Vec<Value> = zeros
                .iter()
                .map(|z| {
                    json!({
                        "omega": complex_json(&z.omega, digits),
                        "kind": kind_str(&z.kind),
                        "residual": format!("{:e}", z.refine_residual.to_f64()),
                    })
                })
                .collect();
            write_json(w, prov, json!({ "zeros": arr }))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = zeros
                .iter()
                .map(|z| {
                    vec![
                        z.n.to_string(),
                        dec(&z.omega.re, digits),
                        dec(&z.omega.im, digits),
                        kind_str(&z.kind).into(),
                        format!("{:e}", z.refine_residual.to_f64()),
                    ]
                })
                .collect();
            write_csv(w, prov, &["n", "re", "im", "kind", "residual"], &rows)
        }
    }
    .map_err(|e| e.to_string())
}
