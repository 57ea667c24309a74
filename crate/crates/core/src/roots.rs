//! Polynomial root finding and the root structure of the orthogonal-polynomial
//! family: omega-trajectories, real and complex zeros of the Hankel
//! determinants, kissing events and interlacing checks.

use crate::error::{Error, Result};
use crate::hankel;
use crate::moments;
use crate::numerics::{Complex, PrecisionPolicy};
use crate::orthopoly::{self, TildePolynomial};
use rug::ops::{CompleteRound, Pow};
use rug::Float;

/// All complex roots of a polynomial plus the residual certificate
/// max |p(root)| / ||p||_inf.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Complex>,
    pub residual: Float,
}

/// One point of an omega-trajectory: the matched root set of p_n at `omega`,
/// or a flagged gap where p_n does not exist.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub omega: Float,
    pub exists: bool,
    pub roots: Vec<Complex>,
}

/// Where a Hankel-determinant zero was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroKind {
    RealLine,
    ComplexPlane,
    /// |h_n| dipped below the detection threshold without a sign change.
    SuspectedDouble,
}

/// A located zero of h_n. `refine_residual` is |h_n| at the reported point
/// normalized by the leading-order envelope.
#[derive(Debug, Clone)]
pub struct HankelZero {
    pub n: usize,
    pub omega: Complex,
    pub kind: ZeroKind,
    pub refine_residual: Float,
}

/// A degeneracy event: at a real zero of h_{2N} the polynomial p~_{2N+1}
/// collapses onto a scalar multiple of p~_{2N}.
#[derive(Debug, Clone)]
pub struct KissingEvent {
    pub omega: Float,
    /// i h'_{2N} / h_{2N-1}, the proportionality constant.
    pub constant: Complex,
    /// ||p~_{2N+1} - c p~_{2N}||_inf / ||p~_{2N}||_inf.
    pub coeff_residual: Float,
    /// Max matched distance between the roots of p_{2N} and of the degree-2N
    /// part of p~_{2N+1}.
    pub root_distance: Float,
}

/// Findings of the real-line structure scan: Propositions 8.2/8.3 plus the
/// two conjectures, reported rather than asserted.
#[derive(Debug, Clone)]
pub struct InterlacingReport {
    pub omega_lo: f64,
    pub omega_hi: f64,
    /// Real zeros of the even-index determinants h_{2m}, m = 1..=N_max.
    pub even_zeros: Vec<(usize, Vec<Float>)>,
    /// Real zeros found for odd-index determinants (conjecture 1 says none).
    pub odd_zeros: Vec<(usize, Vec<Float>)>,
    /// Interlacing violations between h_{2m} and h_{2m+2} (conjecture 2).
    pub interlace_violations: Vec<String>,
    /// Per n: min over the grid of max(|h_n|/env_n, |h_{n+1}|/env_{n+1}).
    pub consecutive_min: Vec<(usize, Float)>,
    /// Per n: min over the grid of max(|h_n|/env_n, |h_{n+2}|/env_{n+2}).
    pub skip_min: Vec<(usize, Float)>,
}

fn cplx(prec: u32, f: f64) -> Float {
    Float::with_val(prec, f)
}

/// Aberth-Ehrlich simultaneous iteration at a fixed precision. Returns the
/// converged roots or `None` when the iteration cap is hit.
fn aberth_at(coeffs: &[Complex], prec: u32, guesses: Option<&[Complex]>) -> Option<Vec<Complex>> {
    let degree = coeffs.len() - 1;
    let work = prec + 32;
    let c: Vec<Complex> = coeffs.iter().map(|x| x.with_prec(work)).collect();
    let dc = orthopoly::poly_derivative(&c);

    let mut z: Vec<Complex> = match guesses {
        Some(g) if g.len() == degree => g.iter().map(|x| x.with_prec(work)).collect(),
        _ => {
            // circle scaled by the geometric-mean root bound |c_0/c_n|^(1/deg),
            // perturbed off any symmetry axis of the coefficients
            let lead = c[degree].abs();
            let tail = c[0].abs();
            let mut r = if tail.is_zero() {
                Float::with_val(work, 1)
            } else {
                let ratio = tail / lead;
                ratio.pow(Float::with_val(work, degree as f64).recip())
            };
            if !r.is_finite() || r < 1e-3 {
                r = Float::with_val(work, 1);
            }
            let two_pi = crate::numerics::pi(work) * 2u32;
            (0..degree)
                .map(|j| {
                    let angle = two_pi.clone() * Float::with_val(work, j as f64)
                        / Float::with_val(work, degree as f64)
                        + Float::with_val(work, 0.4);
                    let ang = Complex::new(Float::new(work), angle);
                    ang.exp().scale(&r)
                })
                .collect()
        }
    };

    let eps = Float::with_val(64, -(prec as i64) + 24).exp2();
    let max_iter = 600usize;
    for _ in 0..max_iter {
        let mut max_step = Float::new(work);
        for j in 0..degree {
            let pv = orthopoly::evaluate(&c, &z[j]);
            let dv = orthopoly::evaluate(&dc, &z[j]);
            if dv.is_zero() {
                // sitting on a critical point: nudge and retry next sweep
                z[j] = z[j].add(&Complex::from_f64(work, 1e-3, 2e-3));
                max_step = Float::with_val(work, 1);
                continue;
            }
            let w = pv.div(&dv);
            let mut s = Complex::zero(work);
            for (k, zk) in z.iter().enumerate() {
                if k == j {
                    continue;
                }
                let diff = z[j].sub(zk);
                if diff.is_zero() {
                    continue;
                }
                s = s.add(&diff.recip());
            }
            let denom = Complex::one(work).sub(&w.mul(&s));
            let step = if denom.is_zero() {
                w.clone()
            } else {
                w.div(&denom)
            };
            z[j] = z[j].sub(&step);
            let rel = step.abs() / (z[j].abs() + Float::with_val(work, 1));
            if rel > max_step {
                max_step = rel;
            }
        }
        if max_step < eps {
            return Some(z.iter().map(|x| x.with_prec(prec)).collect());
        }
    }
    None
}

fn coeff_norm(coeffs: &[Complex]) -> Float {
    let mut m = Float::new(coeffs[0].prec());
    for c in coeffs {
        let a = c.abs();
        if a > m {
            m = a;
        }
    }
    m
}

/// All complex roots via Aberth-Ehrlich iteration, with precision escalation
/// on non-convergence. Roots are sorted by (Re, Im) for determinism.
pub fn poly_roots(coeffs: &[Complex], policy: &PrecisionPolicy) -> Result<RootSet> {
    poly_roots_seeded(coeffs, None, policy)
}

/// Aberth-Ehrlich seeded with explicit initial guesses (used by trajectory
/// continuation); falls back to the perturbed circle when the count differs.
pub fn poly_roots_seeded(
    coeffs: &[Complex],
    guesses: Option<&[Complex]>,
    policy: &PrecisionPolicy,
) -> Result<RootSet> {
    assert!(coeffs.len() >= 2, "need degree >= 1");
    assert!(
        !coeffs.last().unwrap().is_zero(),
        "leading coefficient must be nonzero"
    );
    let mut prec = policy.bits;
    loop {
        if let Some(mut roots) = aberth_at(coeffs, prec, guesses) {
            if guesses.is_none() {
                roots.sort_by(|a, b| {
                    (a.re.clone(), a.im.clone())
                        .partial_cmp(&(b.re.clone(), b.im.clone()))
                        .unwrap()
                });
            }
            let norm = coeff_norm(coeffs);
            let mut residual = Float::new(prec);
            for r in &roots {
                let v = orthopoly::evaluate(coeffs, r).abs();
                if v > residual {
                    residual = v;
                }
            }
            residual /= norm;
            return Ok(RootSet { roots, residual });
        }
        if prec >= policy.max_bits {
            return Err(Error::NoConvergence {
                what: "Aberth-Ehrlich iteration",
                iterations: 600,
            });
        }
        prec = (2 * prec).min(policy.max_bits);
    }
}

/// Max distance between two root multisets under greedy matching.
pub fn matched_max_distance(a: &[Complex], b: &[Complex]) -> Float {
    let matched = match_roots(a, b);
    max_displacement(a, &matched)
}

/// Greedy stable matching of `next` onto `prev` by sorted pairwise distance.
/// Returns `next` reordered so that index i continues prev[i].
pub(crate) fn match_roots(prev: &[Complex], next: &[Complex]) -> Vec<Complex> {
    let n = prev.len().min(next.len());
    let mut pairs = Vec::with_capacity(prev.len() * next.len());
    for (i, p) in prev.iter().enumerate() {
        for (j, q) in next.iter().enumerate() {
            pairs.push((p.sub(q).abs(), i, j));
        }
    }
    pairs.sort_by(|a, b| (&a.0, a.1, a.2).partial_cmp(&(&b.0, b.1, b.2)).unwrap());
    let mut used_prev = vec![false; prev.len()];
    let mut used_next = vec![false; next.len()];
    let mut slot: Vec<Option<usize>> = vec![None; prev.len()];
    let mut assigned = 0;
    for (_, i, j) in pairs {
        if assigned == n {
            break;
        }
        if used_prev[i] || used_next[j] {
            continue;
        }
        used_prev[i] = true;
        used_next[j] = true;
        slot[i] = Some(j);
        assigned += 1;
    }
    let mut out = Vec::with_capacity(next.len());
    for s in slot.iter().flatten() {
        out.push(next[*s].clone());
    }
    for (j, q) in next.iter().enumerate() {
        if !used_next[j] {
            out.push(q.clone());
        }
    }
    out
}

fn max_displacement(prev: &[Complex], next: &[Complex]) -> Float {
    let mut m = Float::new(prev.first().map_or(64, |c| c.prec()));
    for (p, q) in prev.iter().zip(next.iter()) {
        let d = p.sub(q).abs();
        if d > m {
            m = d;
        }
    }
    m
}

/// Track the roots of p_n from omega_start to omega_end with greedy
/// continuation matching; extra samples are inserted (step halving, depth 12)
/// whenever the maximum root displacement exceeds 0.1. Samples where p_n does
/// not exist are flagged rather than skipped.
pub fn trajectory(
    n: usize,
    omega_start: &Float,
    omega_end: &Float,
    steps: usize,
    policy: &PrecisionPolicy,
) -> Result<Vec<TrajectorySample>> {
    assert!(n >= 1, "trajectories need a polynomial of degree >= 1");
    let prec = policy.bits;
    let mut samples: Vec<TrajectorySample> = Vec::new();
    let mut last_roots: Option<Vec<Complex>> = None;

    let sample_at = |omega: &Float, last: &Option<Vec<Complex>>| -> Result<TrajectorySample> {
        match orthopoly::monic_op(n, omega, policy) {
            Ok(poly) => {
                let set = poly_roots_seeded(&poly.coeffs, last.as_deref(), policy)?;
                let roots = match last {
                    Some(prev) => match_roots(prev, &set.roots),
                    None => set.roots,
                };
                Ok(TrajectorySample {
                    omega: omega.clone(),
                    exists: true,
                    roots,
                })
            }
            Err(Error::NearSingular { .. }) => Ok(TrajectorySample {
                omega: omega.clone(),
                exists: false,
                roots: Vec::new(),
            }),
            Err(e) => Err(e),
        }
    };

    let count = if omega_start == omega_end {
        0
    } else {
        steps.max(1)
    };
    let first = sample_at(omega_start, &last_roots)?;
    if first.exists {
        last_roots = Some(first.roots.clone());
    }
    samples.push(first);

    let diff = Float::with_val(prec, omega_end - omega_start.clone());
    let step_cap = cplx(prec, 0.1);
    for i in 1..=count {
        let target = omega_start.clone()
            + diff.clone() * Float::with_val(prec, i as f64) / Float::with_val(prec, count as f64);
        // step halving between the previous accepted omega and the target
        let mut pending = vec![target.clone()];
        let mut depth = 0usize;
        while let Some(w) = pending.pop() {
            let s = sample_at(&w, &last_roots)?;
            let too_far = match (&last_roots, s.exists) {
                (Some(prev), true) => max_displacement(prev, &s.roots) > step_cap,
                _ => false,
            };
            if too_far && depth < 12 {
                let prev_omega = samples.last().unwrap().omega.clone();
                let mid = (prev_omega + &w) / 2u32;
                pending.push(w);
                pending.push(mid);
                depth += 1;
                continue;
            }
            if s.exists {
                last_roots = Some(s.roots.clone());
            }
            samples.push(s);
        }
    }
    Ok(samples)
}

/// h_n on a uniform grid, sharing one moment table per (omega, precision).
fn grid_dets(ns: &[usize], omega: &Float, policy: &PrecisionPolicy) -> Result<Vec<Float>> {
    let max_n = *ns.iter().max().unwrap();
    let om = Complex::real(omega.clone());
    let envs: Vec<Float> = ns
        .iter()
        .map(|&n| hankel::envelope(n as i64, omega))
        .collect();
    let tol = Float::with_val(64, policy.rel_tol);

    let eval = |prec: u32| -> Result<Vec<Complex>> {
        let seq = moments::moments_at(2 * max_n, &om, prec, policy)?;
        let mut out = Vec::with_capacity(ns.len());
        for &n in ns {
            let mut m = Vec::with_capacity(n + 1);
            for r in 0..=n {
                let mut row = Vec::with_capacity(n + 1);
                for c in 0..=n {
                    row.push(seq.values[r + c].clone());
                }
                m.push(row);
            }
            out.push(hankel::det_lu(m));
        }
        Ok(out)
    };

    let mut lo = eval(policy.bits)?;
    let mut hi_bits = (2 * policy.bits).min(policy.max_bits);
    loop {
        let hi = eval(hi_bits)?;
        let all_ok = lo
            .iter()
            .zip(hi.iter())
            .zip(envs.iter())
            .all(|((a, b), env)| {
                let p = b.prec();
                let d = a.with_prec(p).sub(b).abs();
                let sa = a.abs();
                let sb = b.abs();
                let scale = if sa > sb { sa } else { sb };
                d <= (&scale * &tol).complete(p) || d <= (env * &tol).complete(p)
            });
        if all_ok {
            return Ok(hi.into_iter().map(|c| c.re).collect());
        }
        if hi_bits >= policy.max_bits {
            return Err(Error::PrecisionExhausted {
                max_bits: policy.max_bits,
                disagreement: f64::NAN,
            });
        }
        lo = hi;
        hi_bits = (2 * hi_bits).min(policy.max_bits);
    }
}

/// Refine a bracketed sign change of h_n by Newton steps guarded by bisection,
/// to 1e-25 absolute in omega.
fn refine_real_zero(
    n: usize,
    mut a: Float,
    mut fa: Float,
    mut b: Float,
    policy: &PrecisionPolicy,
) -> Result<Float> {
    let prec = policy.bits.max(256);
    let target = Float::with_val(64, 1e-25);
    let mut x = (a.clone() + &b) / 2u32;
    for _ in 0..120 {
        let h = hankel::hankel_det(n, &x, policy)?.det;
        let dh = hankel::hankel_det_derivative(n, &x, 1, policy)?;
        // maintain the bracket
        if (h.clone() * &fa) < 0u32 {
            b = x.clone();
        } else {
            a = x.clone();
            fa = h.clone();
        }
        let mut next = if dh.is_zero() {
            (a.clone() + &b) / 2u32
        } else {
            Float::with_val(prec, &x - h / dh)
        };
        if next < a || next > b {
            next = (a.clone() + &b) / 2u32;
        }
        let dx = (next.clone() - &x).abs();
        x = next;
        if dx < target {
            return Ok(x);
        }
    }
    Ok(x)
}

/// Refine a sign change of h_n bracketed by [a, b] to 1e-25 absolute in
/// omega.
pub fn refine_bracketed_zero(
    n: usize,
    a: &Float,
    b: &Float,
    policy: &PrecisionPolicy,
) -> Result<Float> {
    let fa = hankel::hankel_det(n, a, policy)?.det;
    refine_real_zero(n, a.clone(), fa, b.clone(), policy)
}

/// Locate real zeros of h_n on [omega_lo, omega_hi] from a uniform grid of
/// `grid_points` samples; sign changes are refined and near-touch dips are
/// reported as suspected double roots.
pub fn real_zero_scan(
    n: usize,
    omega_lo: f64,
    omega_hi: f64,
    grid_points: usize,
    policy: &PrecisionPolicy,
) -> Result<Vec<HankelZero>> {
    assert!(omega_lo > 0.0 && omega_hi > omega_lo && grid_points >= 2);
    let prec = policy.bits;
    let mut grid = Vec::with_capacity(grid_points);
    let mut values = Vec::with_capacity(grid_points);
    for i in 0..grid_points {
        let w = cplx(
            prec,
            omega_lo + (omega_hi - omega_lo) * i as f64 / (grid_points - 1) as f64,
        );
        let v = grid_dets(&[n], &w, policy)?.pop().unwrap();
        grid.push(w);
        values.push(v);
    }

    let mut out = Vec::new();
    // the dip threshold a double root could hide under at this resolution
    let spacing = (omega_hi - omega_lo) / (grid_points - 1) as f64;
    let dip_tol = (spacing * spacing).max(policy.rel_tol);
    for i in 0..grid_points - 1 {
        let sign_change = values[i].clone() * &values[i + 1] < 0u32;
        if sign_change {
            let root = refine_real_zero(
                n,
                grid[i].clone(),
                values[i].clone(),
                grid[i + 1].clone(),
                policy,
            )?;
            let env = hankel::envelope(n as i64, &root);
            let resid = hankel::hankel_det(n, &root, policy)?.det.abs() / env;
            out.push(HankelZero {
                n,
                omega: Complex::real(root),
                kind: ZeroKind::RealLine,
                refine_residual: resid,
            });
        } else if i > 0 {
            let env = hankel::envelope(n as i64, &grid[i]);
            let dip = values[i].clone().abs() < env * Float::with_val(prec, dip_tol);
            let local_min = values[i].clone().abs() < values[i - 1].clone().abs()
                && values[i].clone().abs() < values[i + 1].clone().abs();
            if dip && local_min {
                let env = hankel::envelope(n as i64, &grid[i]);
                out.push(HankelZero {
                    n,
                    omega: Complex::real(grid[i].clone()),
                    kind: ZeroKind::SuspectedDouble,
                    refine_residual: values[i].clone().abs() / env,
                });
            }
        }
    }
    Ok(out)
}

/// Newton iteration on omega -> h_n(omega) over the complex plane, from a
/// given guess; converged when |d omega| <= 1e-20.
pub fn complex_zero_refine(
    n: usize,
    guess: &Complex,
    policy: &PrecisionPolicy,
) -> Result<HankelZero> {
    let prec = policy.bits;
    let mut omega = guess.with_prec(prec);
    let escape = guess.abs().to_f64() * 10.0 + 100.0;
    let target = Float::with_val(64, 1e-20);
    let mut converged = false;
    for _ in 0..100 {
        let h = hankel::raw_hankel_det(n, &omega, prec, policy)?;
        let dh = hankel::raw_hankel_det_derivative(n, &omega, 1, prec, policy)?;
        if dh.is_zero() {
            break;
        }
        let step = h.div(&dh);
        omega = omega.sub(&step);
        if omega.abs().to_f64() > escape {
            return Err(Error::NoConvergence {
                what: "complex Newton on h_n",
                iterations: 100,
            });
        }
        if step.abs() < target {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "complex Newton on h_n",
            iterations: 100,
        });
    }
    let env = hankel::envelope(n as i64, &omega.abs());
    let resid = hankel::raw_hankel_det(n, &omega, prec, policy)?.abs() / env;
    let kind = if omega.im.clone().abs() < 1e-15 {
        ZeroKind::RealLine
    } else {
        ZeroKind::ComplexPlane
    };
    Ok(HankelZero {
        n,
        omega,
        kind,
        refine_residual: resid,
    })
}

/// Refine a batch of onion-peel predictions and keep the valid ones: a
/// prediction counts only when Newton converges to a genuine zero within
/// distance 1 of it (branch artifacts inside the asymptotic regime's edge
/// refine far away or not at all).
pub fn refine_peel_predictions(
    predictions: &[crate::asymptotics::PeelPrediction],
    policy: &PrecisionPolicy,
) -> Vec<(crate::asymptotics::PeelPrediction, HankelZero)> {
    let mut out = Vec::new();
    for p in predictions {
        let n_det = p.parity.determinant_index(p.n_half);
        if let Ok(zero) = complex_zero_refine(n_det, &p.omega_pred, policy) {
            if p.omega_pred.sub(&zero.omega).abs() <= 1u32 {
                out.push((p.clone(), zero));
            }
        }
    }
    out
}

/// Detect kissing events of the pair (p_{2N}, p_{2N+1}): real zeros of h_{2N}
/// in range, the proportionality constant i h'_{2N}/h_{2N-1}, the coefficient
/// residual of p~_{2N+1} - c p~_{2N}, and the root-set distance.
pub fn kissing_detect(
    n_half: usize,
    omega_lo: f64,
    omega_hi: f64,
    policy: &PrecisionPolicy,
) -> Result<Vec<KissingEvent>> {
    assert!(n_half >= 1);
    let two_n = 2 * n_half;
    let grid = (((omega_hi - omega_lo) * 100.0).ceil() as usize).max(16);
    let zeros = real_zero_scan(two_n, omega_lo, omega_hi, grid, policy)?;

    let mut events = Vec::new();
    for z in zeros {
        if z.kind != ZeroKind::RealLine {
            continue;
        }
        let omega = z.omega.re.clone();
        let dh = hankel::hankel_det_derivative(two_n, &omega, 1, policy)?;
        let h_prev = hankel::hankel_det(two_n - 1, &omega, policy)?.det;
        let constant = Complex::real(dh / &h_prev).mul_i();

        let tilde_hi = orthopoly::tilde_op(two_n + 1, &omega, policy)?;
        let tilde_lo = orthopoly::tilde_op(two_n, &omega, policy)?;
        let scale = coeff_norm(&tilde_lo.coeffs);
        let mut resid = Float::new(policy.bits);
        for k in 0..=(two_n + 1) {
            let lo_k = if k <= two_n {
                tilde_lo.coeffs[k].clone()
            } else {
                Complex::zero(policy.bits)
            };
            let d = tilde_hi.coeffs[k].sub(&constant.mul(&lo_k)).abs();
            if d > resid {
                resid = d;
            }
        }
        resid /= &scale;

        let root_distance = kissing_root_distance(&tilde_hi, &omega, two_n, policy)?;
        events.push(KissingEvent {
            omega,
            constant,
            coeff_residual: resid,
            root_distance,
        });
    }
    Ok(events)
}

fn kissing_root_distance(
    tilde_hi: &TildePolynomial,
    omega: &Float,
    two_n: usize,
    policy: &PrecisionPolicy,
) -> Result<Float> {
    let monic = orthopoly::monic_op(two_n, omega, policy)?;
    let lower_part: Vec<Complex> = tilde_hi.coeffs[..=two_n].to_vec();
    let r1 = poly_roots(&monic.coeffs, policy)?;
    let r2 = poly_roots(&lower_part, policy)?;
    let matched = match_roots(&r1.roots, &r2.roots);
    Ok(max_displacement(&r1.roots, &matched))
}

/// Scan the real line for the structure results: zero lists for the even and
/// odd families, interlacing of consecutive even-family zero sets, and the
/// envelope-normalized minima showing h_n, h_{n+1} (and h_n, h_{n+2}) never
/// vanish together. The grid defaults to 100 points per unit omega.
pub fn interlacing_check(
    n_max: usize,
    omega_lo: f64,
    omega_hi: f64,
    policy: &PrecisionPolicy,
) -> Result<InterlacingReport> {
    let grid_points = (((omega_hi - omega_lo) * 100.0).ceil() as usize).max(64);
    interlacing_check_with_grid(n_max, omega_lo, omega_hi, grid_points, policy)
}

/// `interlacing_check` at an explicit grid resolution.
pub fn interlacing_check_with_grid(
    n_max: usize,
    omega_lo: f64,
    omega_hi: f64,
    grid_points: usize,
    policy: &PrecisionPolicy,
) -> Result<InterlacingReport> {
    let top = 2 * n_max + 1;
    let ns: Vec<usize> = (0..=top).collect();
    let prec = policy.bits;

    // one pass over the grid for all determinant indices
    let mut grid = Vec::with_capacity(grid_points);
    let mut values: Vec<Vec<Float>> = vec![Vec::with_capacity(grid_points); top + 1];
    for i in 0..grid_points {
        let w = cplx(
            prec,
            omega_lo + (omega_hi - omega_lo) * i as f64 / (grid_points - 1) as f64,
        );
        let dets = grid_dets(&ns, &w, policy)?;
        for (n, v) in dets.into_iter().enumerate() {
            values[n].push(v);
        }
        grid.push(w);
    }

    let zeros_of = |n: usize, vals: &[Float]| -> Result<Vec<Float>> {
        let mut out = Vec::new();
        for i in 0..grid_points - 1 {
            if vals[i].clone() * &vals[i + 1] < 0u32 {
                out.push(refine_real_zero(
                    n,
                    grid[i].clone(),
                    vals[i].clone(),
                    grid[i + 1].clone(),
                    policy,
                )?);
            }
        }
        Ok(out)
    };

    let mut even_zeros = Vec::new();
    for m in 1..=n_max {
        even_zeros.push((2 * m, zeros_of(2 * m, &values[2 * m])?));
    }
    let mut odd_zeros = Vec::new();
    for m in 0..=n_max {
        let n = 2 * m + 1;
        if n <= top {
            let zs = zeros_of(n, &values[n])?;
            if !zs.is_empty() {
                odd_zeros.push((n, zs));
            }
        }
    }

    // interlacing of consecutive even-family zero lists on their overlap
    let mut interlace_violations = Vec::new();
    for w in even_zeros.windows(2) {
        let (n_a, za) = (&w[0].0, &w[0].1);
        let (n_b, zb) = (&w[1].0, &w[1].1);
        for pair in zb.windows(2) {
            let inside = za.iter().filter(|z| **z > pair[0] && **z < pair[1]).count();
            if inside != 1 {
                interlace_violations.push(format!(
                    "h_{} has {} zeros between consecutive zeros {:.6} and {:.6} of h_{}",
                    n_a,
                    inside,
                    pair[0].to_f64(),
                    pair[1].to_f64(),
                    n_b
                ));
            }
        }
    }

    // normalized non-simultaneous-vanishing minima
    let env_at = |n: usize, w: &Float| hankel::envelope(n as i64, w);
    let mut consecutive_min = Vec::new();
    let mut skip_min = Vec::new();
    for n in 0..top {
        let mut mins = Float::with_val(prec, f64::INFINITY);
        for i in 0..grid_points {
            let a = values[n][i].clone().abs() / env_at(n, &grid[i]);
            let b = values[n + 1][i].clone().abs() / env_at(n + 1, &grid[i]);
            let mx = if a > b { a } else { b };
            if mx < mins {
                mins = mx;
            }
        }
        consecutive_min.push((n, mins));
        if n + 2 <= top {
            let mut mins = Float::with_val(prec, f64::INFINITY);
            for i in 0..grid_points {
                let a = values[n][i].clone().abs() / env_at(n, &grid[i]);
                let b = values[n + 2][i].clone().abs() / env_at(n + 2, &grid[i]);
                let mx = if a > b { a } else { b };
                if mx < mins {
                    mins = mx;
                }
            }
            skip_min.push((n, mins));
        }
    }

    Ok(InterlacingReport {
        omega_lo,
        omega_hi,
        even_zeros,
        odd_zeros,
        interlace_violations,
        consecutive_min,
        skip_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::pi;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn quadratic_roots() {
        let p = policy();
        let third = Float::with_val(p.bits, 3).recip();
        let coeffs = vec![
            Complex::real(-third),
            Complex::zero(p.bits),
            Complex::one(p.bits),
        ];
        let set = poly_roots(&coeffs, &p).unwrap();
        let r = Float::with_val(p.bits, 3).sqrt().recip();
        assert_eq!(set.roots.len(), 2);
        assert!((set.roots[0].re.clone() + &r).abs().to_f64() < 1e-70);
        assert!((set.roots[1].re.clone() - &r).abs().to_f64() < 1e-70);
        assert!(set.residual.to_f64() < 1e-70);
    }

    #[test]
    fn legendre_p6_roots_real() {
        let p = policy();
        let poly = orthopoly::monic_op(6, &Float::with_val(p.bits, 0), &p).unwrap();
        let set = poly_roots(&poly.coeffs, &p).unwrap();
        assert_eq!(set.roots.len(), 6);
        for r in &set.roots {
            assert!(r.im.clone().abs().to_f64() < 1e-60);
            assert!(r.re.clone().abs().to_f64() < 1.0);
        }
        // classical P6 root
        assert!((set.roots[5].re.to_f64() - 0.932_469_514_203_152).abs() < 1e-15);
    }

    #[test]
    fn trajectory_at_legendre_point() {
        let p = policy();
        let w0 = Float::with_val(p.bits, 0);
        let t = trajectory(6, &w0, &w0, 1, &p).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].exists);
        for r in &t[0].roots {
            assert!(r.im.clone().abs().to_f64() < 1e-60);
        }
    }

    #[test]
    fn trajectory_symmetry_and_upper_half_plane() {
        let p = policy();
        let t = trajectory(
            2,
            &Float::with_val(p.bits, 0),
            &Float::with_val(p.bits, 50),
            100,
            &p,
        )
        .unwrap();
        for s in &t {
            assert!(s.exists);
            for r in &s.roots {
                assert!(r.im.to_f64() > -1e-30);
            }
            // multiset symmetric under z -> -conj(z)
            let reflected: Vec<Complex> = s.roots.iter().map(|r| r.conj().neg()).collect();
            let matched = match_roots(&s.roots, &reflected);
            assert!(max_displacement(&s.roots, &matched).to_f64() < 1e-18);
        }
    }

    #[test]
    fn h0_zeros_are_multiples_of_pi() {
        let p = policy();
        let zeros = real_zero_scan(0, 1.0, 10.0, 1000, &p).unwrap();
        let pi_f = pi(p.bits);
        assert_eq!(zeros.len(), 3);
        for (k, z) in zeros.iter().enumerate() {
            let expected = pi_f.clone() * Float::with_val(p.bits, (k + 1) as f64);
            assert!(
                (z.omega.re.clone() - &expected).abs().to_f64() < 1e-20,
                "k={}",
                k
            );
            assert_eq!(z.kind, ZeroKind::RealLine);
        }
    }

    #[test]
    fn h1_has_no_real_zeros() {
        let p = policy();
        let zeros = real_zero_scan(1, 0.1, 40.0, 4000, &p).unwrap();
        let real: Vec<_> = zeros
            .iter()
            .filter(|z| z.kind == ZeroKind::RealLine)
            .collect();
        assert!(real.is_empty());
    }

    #[test]
    fn h2_zero_near_three_pi() {
        let p = policy();
        let zeros = real_zero_scan(2, 8.0, 11.0, 1000, &p).unwrap();
        let real: Vec<_> = zeros
            .iter()
            .filter(|z| z.kind == ZeroKind::RealLine)
            .collect();
        assert_eq!(real.len(), 1);
        // asymptotically 3 pi - 2/(3 pi)
        let approx = 3.0 * std::f64::consts::PI - 2.0 / (3.0 * std::f64::consts::PI);
        assert!((real[0].omega.re.to_f64() - approx).abs() < 0.05);
        assert!(real[0].refine_residual.to_f64() < 1e-20);
    }

    #[test]
    fn complex_refine_h0_to_pi() {
        let p = policy();
        let guess = Complex::from_f64(p.bits, 3.0, 0.1);
        let z = complex_zero_refine(0, &guess, &p).unwrap();
        let d = (z.omega.re.clone() - pi(p.bits)).abs();
        assert!(d.to_f64() < 1e-19);
        assert!(z.omega.im.clone().abs().to_f64() < 1e-19);
        assert_eq!(z.kind, ZeroKind::RealLine);
    }

    #[test]
    fn complex_refine_h1_balances_omega_and_sin() {
        // h_1 = (4/w^4)(w^2 - sin^2 w); refine from a rough first-quadrant
        // guess and check the transcendental equation directly.
        let p = policy();
        let guess = Complex::from_f64(p.bits, 4.5, 2.5);
        let z = complex_zero_refine(1, &guess, &p).unwrap();
        assert!(z.refine_residual.to_f64() < 1e-20);
        let s = z.omega.sin();
        let plus = z.omega.sub(&s).abs().to_f64();
        let minus = z.omega.add(&s).abs().to_f64();
        assert!(plus.min(minus) < 1e-18);
    }

    #[test]
    fn kissing_events_of_h2() {
        let p = policy();
        let events = kissing_detect(1, 5.0, 20.0, &p).unwrap();
        assert!(events.len() >= 3, "found {}", events.len());
        for e in &events {
            assert!(
                e.coeff_residual.to_f64() < 1e-15,
                "resid {}",
                e.coeff_residual.to_f64()
            );
            assert!(e.root_distance.to_f64() < 1e-12);
        }
    }

    #[test]
    fn no_false_kissing_away_from_zeros() {
        // the same residual evaluated away from zeros of h_2 is O(1)
        let p = policy();
        let omega = Float::with_val(p.bits, 8.0);
        let dh = hankel::hankel_det_derivative(2, &omega, 1, &p).unwrap();
        let h1v = hankel::hankel_det(1, &omega, &p).unwrap().det;
        let constant = Complex::real(dh / &h1v).mul_i();
        let t3 = orthopoly::tilde_op(3, &omega, &p).unwrap();
        let t2 = orthopoly::tilde_op(2, &omega, &p).unwrap();
        let scale = coeff_norm(&t2.coeffs);
        let mut resid = Float::new(p.bits);
        for k in 0..=3usize {
            let lo_k = if k <= 2 {
                t2.coeffs[k].clone()
            } else {
                Complex::zero(p.bits)
            };
            let d = t3.coeffs[k].sub(&constant.mul(&lo_k)).abs();
            if d > resid {
                resid = d;
            }
        }
        resid /= &scale;
        assert!(resid.to_f64() > 1e-6);
    }
}
