//! Moments mu_n(omega) = int_{-1}^1 x^n e^{i omega x} dx and their
//! omega-derivatives.
//!
//! The moments are evaluated through the everywhere-convergent series
//!
//!   mu_n(omega) = sum_{j>=0} (i omega)^j (1 + (-1)^{n+j}) / (j! (n+j+1)),
//!
//! which is unconditionally stable in multiprecision once the working
//! precision is padded by the ~1.443|omega| bits the alternating sum cancels.
//! The integration-by-parts recurrence
//!
//!   mu_n = (e^{i omega} - (-1)^n e^{-i omega})/(i omega) - (n/(i omega)) mu_{n-1}
//!
//! is forward-stable only for |omega| > n; where that holds it is evaluated as
//! an independent cross-check and disagreement raises an error.

use crate::error::{Error, Result};
use crate::numerics::{Complex, PrecisionPolicy};
use rug::ops::CompleteRound;
use rug::Float;

/// The moments mu_0..mu_m of the weight e^{i omega x} at a fixed omega.
#[derive(Debug, Clone)]
pub struct MomentSequence {
    pub omega: Complex,
    pub values: Vec<Complex>,
    pub policy: PrecisionPolicy,
}

impl MomentSequence {
    /// Highest computed moment index.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, n: usize) -> Result<&Complex> {
        self.values.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            max: self.max_index(),
        })
    }

    /// Exact k-th omega-derivative of mu_n, namely i^k mu_{n+k}.
    pub fn derivative(&self, n: usize, k: usize) -> Result<Complex> {
        let v = self.value(n + k)?;
        let mut out = v.clone();
        for _ in 0..(k % 4) {
            out = out.mul_i();
        }
        Ok(out)
    }
}

/// Extra mantissa bits so that the series cancellation down from e^{|omega|}
/// does not eat into the requested precision.
fn guard_bits(omega_abs: f64) -> u32 {
    (omega_abs * std::f64::consts::LOG2_E).ceil() as u32 + 32
}

/// 2^e at 64-bit precision without f64 underflow.
fn exp2(e: i64) -> Float {
    Float::with_val(64, e).exp2()
}

/// Series evaluation of mu_0..mu_m, delivered at `prec` bits.
fn series(m: usize, omega: &Complex, prec: u32) -> Vec<Complex> {
    let omega_abs = omega.abs().to_f64();
    let work = prec + guard_bits(omega_abs);
    let om = omega.with_prec(work);
    let iom = om.mul_i();

    // t_j = (i omega)^j / j!, computed incrementally. A single cutoff index
    // works for every n because the n-dependent factor is at most 2, and the
    // tail is geometric with ratio < 1/2 once j > 2|omega|.
    let threshold = exp2(-(work as i64) - 8);
    let mut terms: Vec<Complex> = Vec::new();
    let mut t = Complex::one(work);
    let mut max_t = Float::with_val(work, 1);
    let mut j = 0usize;
    loop {
        terms.push(t.clone());
        j += 1;
        let recip_j = Float::with_val(work, j as u64).recip();
        t = t.mul(&iom).scale(&recip_j);
        let ta = t.abs();
        if ta > max_t {
            max_t = ta.clone();
        }
        if (j as f64) > 2.0 * omega_abs + 4.0 {
            let bound = (&ta / &max_t).complete(work);
            if bound < threshold {
                break;
            }
        }
        assert!(j < 4_000_000, "moment series failed to terminate");
    }

    let mut out = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let mut sum = Complex::zero(work);
        let mut jj = n % 2; // need n + j even
        while jj < terms.len() {
            let coeff = Float::with_val(work, 2u32) / Float::with_val(work, (n + jj + 1) as u64);
            sum = sum.add(&terms[jj].scale(&coeff));
            jj += 2;
        }
        out.push(sum.with_prec(prec));
    }
    out
}

/// Integration-by-parts recurrence, trusted for |omega| > m.
fn recurrence(m: usize, omega: &Complex, prec: u32) -> Vec<Complex> {
    let om = omega.with_prec(prec);
    let iom = om.mul_i();
    let e_plus = iom.exp();
    let e_minus = iom.neg().exp();
    let mut out: Vec<Complex> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let boundary = if n % 2 == 0 {
            e_plus.sub(&e_minus)
        } else {
            e_plus.add(&e_minus)
        };
        let mut v = boundary.div(&iom);
        if n > 0 {
            v = v.sub(&out[n - 1].scale_i64(n as i64).div(&iom));
        }
        out.push(v);
    }
    out
}

/// Moments mu_0..mu_m at a real omega.
pub fn moments(m: usize, omega: &Float, policy: &PrecisionPolicy) -> Result<MomentSequence> {
    moments_complex(m, &Complex::real(omega.clone()), policy)
}

/// Moments at a complex omega (used when refining Hankel zeros off the real
/// axis; the parity structure only applies on the axis).
pub fn moments_complex(
    m: usize,
    omega: &Complex,
    policy: &PrecisionPolicy,
) -> Result<MomentSequence> {
    moments_at(m, omega, policy.bits, policy)
}

/// Moments at an explicit working precision; the entry point used by
/// adaptive evaluation loops.
pub fn moments_at(
    m: usize,
    omega: &Complex,
    prec: u32,
    policy: &PrecisionPolicy,
) -> Result<MomentSequence> {
    let values = series(m, omega, prec);

    let omega_abs = omega.abs().to_f64();
    if omega_abs > m as f64 {
        let check = recurrence(m, omega, prec);
        // natural magnitude of the sequence; the floor keeps the comparison
        // meaningful when the only computed moments sit at a zero (mu_0 at pi)
        let mut scale = Float::with_val(prec, 2.0 / (1.0 + omega_abs));
        for v in &values {
            let a = v.abs();
            if a > scale {
                scale = a;
            }
        }
        // Both routes are good to ~2^-prec relative to the sequence scale;
        // rel_tol applies once the precision supports it.
        let mut tol = Float::with_val(prec, policy.rel_tol);
        let floor = exp2(-(prec as i64) + 16);
        if tol < floor {
            tol = Float::with_val(prec, floor);
        }
        let limit = (&scale * &tol).complete(prec);
        for (a, b) in values.iter().zip(check.iter()) {
            let d = a.sub(b).abs();
            if d > limit {
                return Err(Error::CrossCheckFailed {
                    what: "moment series vs integration-by-parts recurrence",
                    disagreement: (d / Float::with_val(prec, &scale)).to_f64(),
                });
            }
        }
    }

    Ok(MomentSequence {
        omega: omega.with_prec(prec),
        values,
        policy: policy.clone(),
    })
}

/// The exact k-th omega-derivative of mu_n, i.e. i^k mu_{n+k}.
pub fn moment_derivative(seq: &MomentSequence, n: usize, k: usize) -> Result<Complex> {
    seq.derivative(n, k)
}
