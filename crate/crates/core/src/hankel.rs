//! Hankel matrices H_n of the moment sequence, their determinants h_n,
//! omega-derivatives, and the Toda identity h_n'' h_n - (h_n')^2 = -h_{n-1} h_{n+1}.
//!
//! Determinants are evaluated by LU factorization with partial pivoting on
//! multiprecision complexes, wrapped in adaptive precision escalation. Near
//! the zeros of h_n a relative agreement criterion is meaningless, so the
//! comparator falls back to an absolute tolerance scaled by the determinant's
//! leading-order envelope.

use crate::asymptotics::superfactorial;
use crate::error::{Error, Result};
use crate::moments::{self, MomentSequence};
use crate::numerics::{Complex, PrecisionPolicy};
use rug::ops::{CompleteRound, Pow};
use rug::Complete;
use rug::{Float, Integer};

/// The (n+1)x(n+1) Hankel matrix at a fixed omega together with its
/// determinant. `entries[j][k] = mu_{j+k}`; for real omega the determinant is
/// real and `det` holds its real part, with the raw complex value kept for
/// diagnostics.
#[derive(Debug, Clone)]
pub struct HankelView {
    pub n: usize,
    pub omega: Complex,
    pub entries: Vec<Vec<Complex>>,
    pub det_raw: Complex,
    pub det: Float,
    pub policy: PrecisionPolicy,
}

/// Determinant by LU with partial pivoting; the sign is tracked from the
/// permutation parity.
#[allow(clippy::needless_range_loop)]
pub(crate) fn det_lu(mut m: Vec<Vec<Complex>>) -> Complex {
    let n = m.len();
    if n == 0 {
        return Complex::one(64);
    }
    let prec = m[0][0].prec();
    let mut det = Complex::one(prec);
    let mut sign_flip = false;
    for col in 0..n {
        let mut pivot = col;
        let mut best = m[col][col].norm_sqr();
        for row in (col + 1)..n {
            let cand = m[row][col].norm_sqr();
            if cand > best {
                best = cand;
                pivot = row;
            }
        }
        if best.is_zero() {
            return Complex::zero(prec);
        }
        if pivot != col {
            m.swap(pivot, col);
            sign_flip = !sign_flip;
        }
        det = det.mul(&m[col][col]);
        let inv = m[col][col].recip();
        for row in (col + 1)..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].mul(&inv);
            for k in (col + 1)..n {
                let delta = factor.mul(&m[col][k]);
                m[row][k] = m[row][k].sub(&delta);
            }
        }
    }
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Solve a dense complex system by LU with partial pivoting. Returns `None`
/// when an exactly-zero pivot is met.
#[allow(clippy::needless_range_loop)]
pub(crate) fn lu_solve(mut m: Vec<Vec<Complex>>, mut rhs: Vec<Complex>) -> Option<Vec<Complex>> {
    let n = m.len();
    for col in 0..n {
        let mut pivot = col;
        let mut best = m[col][col].norm_sqr();
        for row in (col + 1)..n {
            let cand = m[row][col].norm_sqr();
            if cand > best {
                best = cand;
                pivot = row;
            }
        }
        if best.is_zero() {
            return None;
        }
        if pivot != col {
            m.swap(pivot, col);
            rhs.swap(pivot, col);
        }
        let inv = m[col][col].recip();
        for row in (col + 1)..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].mul(&inv);
            for k in (col + 1)..n {
                let delta = factor.mul(&m[col][k]);
                m[row][k] = m[row][k].sub(&delta);
            }
            let delta = factor.mul(&rhs[col]);
            rhs[row] = rhs[row].sub(&delta);
        }
    }
    // back substitution
    let prec = if n > 0 { m[0][0].prec() } else { 64 };
    let mut x = vec![Complex::zero(prec); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for k in (row + 1)..n {
            acc = acc.sub(&m[row][k].mul(&x[k]));
        }
        x[row] = acc.div(&m[row][row]);
    }
    Some(x)
}

/// Build the (size x size) Hankel matrix where row r carries the
/// `row_derivs[r]`-th omega-derivative of its entries:
/// d^d mu_k / d omega^d = i^d mu_{k+d}.
#[allow(clippy::needless_range_loop)]
fn matrix_with_row_derivs(
    seq: &MomentSequence,
    size: usize,
    row_derivs: &[usize],
) -> Result<Vec<Vec<Complex>>> {
    let mut m = Vec::with_capacity(size);
    for r in 0..size {
        let mut row = Vec::with_capacity(size);
        for c in 0..size {
            row.push(seq.derivative(r + c, row_derivs[r])?);
        }
        m.push(row);
    }
    Ok(m)
}

/// h_n at a fixed precision: moments + LU.
pub(crate) fn raw_hankel_det(
    n: usize,
    omega: &Complex,
    prec: u32,
    policy: &PrecisionPolicy,
) -> Result<Complex> {
    let seq = moments::moments_at(2 * n, omega, prec, policy)?;
    let m = matrix_with_row_derivs(&seq, n + 1, &vec![0; n + 1])?;
    Ok(det_lu(m))
}

/// d^order h_n / d omega^order at a fixed precision, via the sum-over-rows
/// differentiation rule for determinants.
pub(crate) fn raw_hankel_det_derivative(
    n: usize,
    omega: &Complex,
    order: usize,
    prec: u32,
    policy: &PrecisionPolicy,
) -> Result<Complex> {
    assert!(order == 1 || order == 2, "derivative order must be 1 or 2");
    let size = n + 1;
    let seq = moments::moments_at(2 * n + order, omega, prec, policy)?;
    let mut acc = Complex::zero(prec);
    if order == 1 {
        for r in 0..size {
            let mut derivs = vec![0usize; size];
            derivs[r] = 1;
            acc = acc.add(&det_lu(matrix_with_row_derivs(&seq, size, &derivs)?));
        }
    } else {
        // diagonal: one row twice-differentiated; off-diagonal: two distinct
        // rows once-differentiated each.
        for r in 0..size {
            let mut derivs = vec![0usize; size];
            derivs[r] = 2;
            acc = acc.add(&det_lu(matrix_with_row_derivs(&seq, size, &derivs)?));
        }
        for r in 0..size {
            for s in 0..size {
                if s == r {
                    continue;
                }
                let mut derivs = vec![0usize; size];
                derivs[r] = 1;
                derivs[s] = 1;
                acc = acc.add(&det_lu(matrix_with_row_derivs(&seq, size, &derivs)?));
            }
        }
    }
    Ok(acc)
}

/// The Hankel determinant of the Legendre weight (omega = 0), as the exact
/// product of monic-Legendre squared norms.
pub fn legendre_hankel_at_zero(n: i64, prec: u32) -> Float {
    if n < 0 {
        return Float::with_val(prec, 1);
    }
    let mut num = Integer::from(1);
    let mut den = Integer::from(1);
    for j in 0..=(n as u32) {
        // ||P^_j||^2 = 2^(2j+1) (j!)^4 / ((2j+1)! (2j)!)
        let jf = Integer::factorial(j).complete();
        num *= Integer::from(1) << (2 * j + 1);
        num *= jf.clone().pow(4);
        den *= Integer::factorial(2 * j + 1).complete();
        den *= Integer::factorial(2 * j).complete();
    }
    Float::with_val(prec, num) / Float::with_val(prec, den)
}

/// Leading-order magnitude of |h_n| for large omega (the sin factor of the
/// odd-dimension case replaced by its amplitude), capped by the omega = 0
/// Legendre value. Used to scale absolute tolerances near zeros of h_n and
/// as the degeneracy threshold unit.
pub fn envelope(n: i64, omega: &Float) -> Float {
    let prec = omega.prec();
    if n < 0 {
        return Float::with_val(prec, 1);
    }
    let legendre = legendre_hankel_at_zero(n, prec);
    let w = omega.clone().abs();
    if w <= 1e-3 {
        return legendre;
    }
    let dim = (n + 1) as u32;
    let asym = if dim.is_multiple_of(2) {
        let big_n = dim / 2;
        let sf = superfactorial(big_n as i64 - 1);
        let coeff = Float::with_val(prec, Integer::from(4).pow(big_n * big_n))
            * Float::with_val(prec, sf.clone().pow(4));
        coeff / w.pow(2 * big_n * big_n)
    } else {
        let big_n = (dim - 1) / 2;
        let sf1 = superfactorial(big_n as i64 - 1);
        let sf2 = superfactorial(big_n as i64);
        let coeff = Float::with_val(prec, Integer::from(4).pow(big_n * (big_n + 1)))
            * Float::with_val(prec, sf1.clone().pow(2))
            * Float::with_val(prec, sf2.clone().pow(2))
            * 2u32;
        coeff / w.pow(2 * big_n * (big_n + 1) + 1)
    };
    if asym < legendre {
        asym
    } else {
        legendre
    }
}

/// Agreement test for adaptive determinant evaluation: plain relative
/// closeness, or absolute closeness on the envelope scale near zeros.
fn det_agree(a: &Complex, b: &Complex, tol: &Float, env: &Float) -> bool {
    let p = b.prec();
    let d = a.with_prec(p).sub(b).abs();
    let sa = a.abs();
    let sb = b.abs();
    let scale = if sa > sb { sa } else { sb };
    if d <= (&scale * tol).complete(p) {
        return true;
    }
    d <= (env * tol).complete(p)
}

fn adaptive_det<F>(f: F, policy: &PrecisionPolicy, env: &Float) -> Result<Complex>
where
    F: Fn(u32) -> Result<Complex>,
{
    let tol = Float::with_val(64, policy.rel_tol);
    crate::numerics::adaptive_eval_with(f, policy, |a, b| det_agree(a, b, &tol, env))
}

/// The imaginary-part diagnostic: a stable nonzero Im signals insufficient
/// precision, so reality failure keeps the escalation loop going instead of
/// being discarded.
fn reality_ok(v: &Complex, env: &Float, policy: &PrecisionPolicy) -> (bool, f64) {
    let p = v.prec();
    let scale_v = v.abs();
    let scale = if scale_v > *env {
        scale_v
    } else {
        Float::with_val(p, env)
    };
    let im = v.im.clone().abs();
    let ratio = (im / scale).to_f64();
    (ratio <= policy.rel_tol, ratio)
}

/// Adaptive evaluation of a real-valued determinant quantity: accepted once
/// two precisions agree and the imaginary diagnostic passes; each failure
/// doubles the working precision.
fn adaptive_det_real<F>(f: F, policy: &PrecisionPolicy, env: &Float) -> Result<Complex>
where
    F: Fn(u32) -> Result<Complex>,
{
    let tol = Float::with_val(64, policy.rel_tol);
    let mut lo = f(policy.bits)?;
    let mut hi_bits = (2 * policy.bits).min(policy.max_bits);
    loop {
        let hi = f(hi_bits)?;
        let agree = det_agree(&lo, &hi, &tol, env);
        let (real, im_ratio) = reality_ok(&hi, env, policy);
        if agree && real {
            return Ok(hi);
        }
        if hi_bits >= policy.max_bits {
            if !real {
                return Err(Error::RealityCheckFailed { ratio: im_ratio });
            }
            return Err(Error::PrecisionExhausted {
                max_bits: policy.max_bits,
                disagreement: crate::numerics::rel_diff(&lo, &hi).to_f64(),
            });
        }
        lo = hi;
        hi_bits = (2 * hi_bits).min(policy.max_bits);
    }
}

/// h_n(omega) for real omega, with the reality check enforced.
pub fn hankel_det(n: usize, omega: &Float, policy: &PrecisionPolicy) -> Result<HankelView> {
    let env = envelope(n as i64, omega);
    let om = Complex::real(omega.clone());
    let det_raw = adaptive_det_real(|prec| raw_hankel_det(n, &om, prec, policy), policy, &env)?;
    let prec = det_raw.prec();
    let seq = moments::moments_at(2 * n, &om.with_prec(prec), prec, policy)?;
    let entries = matrix_with_row_derivs(&seq, n + 1, &vec![0; n + 1])?;
    Ok(HankelView {
        n,
        omega: om,
        entries,
        det: det_raw.re.clone(),
        det_raw,
        policy: policy.clone(),
    })
}

/// h_n at complex omega (no reality structure there).
pub fn hankel_det_complex(n: usize, omega: &Complex, policy: &PrecisionPolicy) -> Result<Complex> {
    let env = envelope(n as i64, &omega.abs());
    adaptive_det(|prec| raw_hankel_det(n, omega, prec, policy), policy, &env)
}

/// Exact omega-derivative of h_n (order 1 or 2) for real omega.
pub fn hankel_det_derivative(
    n: usize,
    omega: &Float,
    order: usize,
    policy: &PrecisionPolicy,
) -> Result<Float> {
    let env = envelope(n as i64, omega);
    let om = Complex::real(omega.clone());
    let v = adaptive_det_real(
        |prec| raw_hankel_det_derivative(n, &om, order, prec, policy),
        policy,
        &env,
    )?;
    Ok(v.re)
}

/// Exact omega-derivative of h_n at complex omega.
pub fn hankel_det_derivative_complex(
    n: usize,
    omega: &Complex,
    order: usize,
    policy: &PrecisionPolicy,
) -> Result<Complex> {
    let env = envelope(n as i64, &omega.abs());
    adaptive_det(
        |prec| raw_hankel_det_derivative(n, omega, order, prec, policy),
        policy,
        &env,
    )
}

/// Relative residual of the Toda identity h_n'' h_n - (h_n')^2 + h_{n-1} h_{n+1} = 0.
///
/// Evaluated single-shot at the policy's working precision: the identity holds
/// exactly, so the residual measures nothing but roundoff and an adaptive
/// comparison of two precisions could never agree.
pub fn toda_residual(n: usize, omega: &Float, policy: &PrecisionPolicy) -> Result<Float> {
    assert!(n >= 1, "the Toda identity needs n >= 1");
    let prec = policy.bits;
    let om = Complex::real(omega.clone());
    let h_prev = raw_hankel_det(n - 1, &om, prec, policy)?;
    let h = raw_hankel_det(n, &om, prec, policy)?;
    let h_next = raw_hankel_det(n + 1, &om, prec, policy)?;
    let d1 = raw_hankel_det_derivative(n, &om, 1, prec, policy)?;
    let d2 = raw_hankel_det_derivative(n, &om, 2, prec, policy)?;

    let t1 = d2.mul(&h);
    let t2 = d1.mul(&d1);
    let t3 = h_prev.mul(&h_next);
    let resid = t1.sub(&t2).add(&t3).abs();
    let mut scale = t1.abs();
    for t in [&t2, &t3] {
        let a = t.abs();
        if a > scale {
            scale = a;
        }
    }
    if scale.is_zero() {
        return Ok(Float::new(prec));
    }
    Ok(resid / scale)
}

/// h_{n-1} as the product of the normalization integrals kappa_j = int p_j^2 e^{i omega x} dx,
/// j = 0..n-1, with each kappa_j computed independently of the determinant
/// route (monic coefficients paired with raw moments) and cross-checked
/// against the Hankel ratio h_j/h_{j-1}.
pub fn product_formula_det(n: usize, omega: &Float, policy: &PrecisionPolicy) -> Result<Float> {
    assert!(n >= 1);
    let prec = policy.bits;
    let om = Complex::real(omega.clone());
    let m_max = 2 * n - 2 + 2; // p_{n-1}^2 needs mu up to 2n-2; keep a margin
    let seq = moments::moments_at(m_max, &om, prec, policy)?;

    let mut dets = Vec::with_capacity(n);
    for j in 0..n {
        let m = matrix_with_row_derivs(&seq, j + 1, &vec![0; j + 1])?;
        dets.push(det_lu(m));
    }

    let tol = {
        let t = Float::with_val(prec, policy.rel_tol);
        let floor = Float::with_val(prec, 20 - (prec as i32)).exp2();
        if t < floor {
            floor
        } else {
            t
        }
    };

    let mut product = Complex::one(prec);
    for j in 0..n {
        // existence of p_j requires h_{j-1} away from zero
        if j > 0 {
            let env = envelope(j as i64 - 1, omega);
            let threshold = Float::with_val(prec, 1e-15) * &env;
            if dets[j - 1].abs() < threshold {
                return Err(Error::SingularChain {
                    index: j as i64 - 1,
                });
            }
        }
        // monic p_j by the Hankel linear solve
        let coeffs =
            crate::orthopoly::monic_coeffs_from_moments(&seq, j).ok_or(Error::SingularChain {
                index: j as i64 - 1,
            })?;
        // kappa_j = sum_k (p_j^2)_k mu_k
        let sq = crate::orthopoly::poly_mul(&coeffs, &coeffs);
        let mut kappa = Complex::zero(prec);
        for (k, c) in sq.iter().enumerate() {
            kappa = kappa.add(&c.mul(seq.value(k)?));
        }
        // cross-check against the Hankel ratio h_j / h_{j-1}
        let ratio = if j == 0 {
            dets[0].clone()
        } else {
            dets[j].div(&dets[j - 1])
        };
        let d = kappa.sub(&ratio).abs();
        let scale = {
            let a = kappa.abs();
            let b = ratio.abs();
            if a > b {
                a
            } else {
                b
            }
        };
        if !scale.is_zero() && d > (&scale * &tol).complete(prec) {
            return Err(Error::CrossCheckFailed {
                what: "kappa via moments vs Hankel ratio",
                disagreement: (d / scale).to_f64(),
            });
        }
        product = product.mul(&kappa);
    }

    let env = envelope(n as i64 - 1, omega);
    let (real, im_ratio) = reality_ok(&product, &env, policy);
    if !real {
        return Err(Error::RealityCheckFailed { ratio: im_ratio });
    }
    Ok(product.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedforms;
    use crate::numerics::pi;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    fn feq(a: &Float, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn h0_at_half_pi() {
        let p = policy();
        let w = pi(p.bits) / 2u32;
        let h = hankel_det(0, &w, &p).unwrap();
        assert!(feq(&h.det, 4.0 / std::f64::consts::PI, 1e-15));
    }

    #[test]
    fn h1_at_zero() {
        let p = policy();
        let h = hankel_det(1, &Float::with_val(p.bits, 0), &p).unwrap();
        assert!(feq(&h.det, 4.0 / 3.0, 1e-30));
    }

    #[test]
    fn h3_at_zero() {
        let p = policy();
        let h = hankel_det(3, &Float::with_val(p.bits, 0), &p).unwrap();
        assert!(feq(&h.det, 256.0 / 23625.0, 1e-16));
    }

    #[test]
    fn h1_at_one_matches_closed_form() {
        let p = policy();
        let w = Float::with_val(p.bits, 1);
        let h = hankel_det(1, &w, &p).unwrap();
        let exact = closedforms::h1(&w);
        let rel = ((h.det.clone() - &exact) / exact).abs();
        assert!(rel.to_f64() < 1e-40);
    }

    #[test]
    fn closed_forms_match_determinants_on_a_grid() {
        let p = policy();
        for i in 0..6 {
            let w = Float::with_val(p.bits, 0.5 + 3.7 * i as f64);
            for n in 0..=3usize {
                let det = hankel_det(n, &w, &p).unwrap().det;
                let exact = closedforms::hn(n, &w).unwrap();
                let rel = ((det - &exact) / exact).abs();
                assert!(rel.to_f64() < 1e-25, "n={} i={}", n, i);
            }
        }
    }

    #[test]
    fn hankel_structure() {
        let p = policy();
        let h = hankel_det(3, &Float::with_val(p.bits, 2.0), &p).unwrap();
        for j in 0..=3usize {
            for k in 0..=3usize {
                for (j2, k2) in [(k, j), (j.min(k), j.max(k))] {
                    assert_eq!(h.entries[j][k], h.entries[j2][k2]);
                }
            }
        }
    }

    #[test]
    fn derivative_of_h0() {
        // d/domega [2 sin w / w] = 2(w cos w - sin w)/w^2 = -8/pi^2 at pi/2.
        let p = policy();
        let w = pi(p.bits) / 2u32;
        let d = hankel_det_derivative(0, &w, 1, &p).unwrap();
        let expected = -8.0 / (std::f64::consts::PI * std::f64::consts::PI);
        assert!(feq(&d, expected, 1e-15));
    }

    #[test]
    fn derivative_of_even_h1_vanishes_at_zero() {
        let p = policy();
        let d = hankel_det_derivative(1, &Float::with_val(p.bits, 1e-9), 1, &p).unwrap();
        assert!(d.to_f64().abs() < 1e-9);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = PrecisionPolicy::new(512, 1e-30, 4096);
        let w = Float::with_val(p.bits, 3);
        let delta = Float::with_val(p.bits, 1e-10);
        for order in [1usize, 2] {
            let analytic = hankel_det_derivative(2, &w, order, &p).unwrap();
            let up = Float::with_val(p.bits, &w + &delta);
            let dn = Float::with_val(p.bits, &w - &delta);
            let fd = if order == 1 {
                (hankel_det(2, &up, &p).unwrap().det - hankel_det(2, &dn, &p).unwrap().det)
                    / (delta.clone() * 2u32)
            } else {
                (hankel_det(2, &up, &p).unwrap().det + hankel_det(2, &dn, &p).unwrap().det
                    - hankel_det(2, &w, &p).unwrap().det * 2u32)
                    / delta.clone().square()
            };
            let rel = ((analytic.clone() - &fd) / analytic).abs();
            assert!(rel.to_f64() < 1e-10, "order={}", order);
        }
    }

    #[test]
    fn toda_identity_residuals() {
        let p = policy();
        let r1 = toda_residual(1, &Float::with_val(p.bits, 1), &p).unwrap();
        assert!(r1.to_f64() < 1e-25);
        let r3 = toda_residual(3, &Float::with_val(p.bits, 10), &p).unwrap();
        assert!(r3.to_f64() < 1e-20);
    }

    #[test]
    fn product_formula_small_cases() {
        let p = policy();
        let v1 = product_formula_det(1, &Float::with_val(p.bits, 0), &p).unwrap();
        assert!(feq(&v1, 2.0, 1e-30));
        let v2 = product_formula_det(2, &Float::with_val(p.bits, 0), &p).unwrap();
        assert!(feq(&v2, 4.0 / 3.0, 1e-30));
    }

    #[test]
    fn product_formula_matches_determinant() {
        let p = policy();
        let w = Float::with_val(p.bits, 5);
        let via_product = product_formula_det(3, &w, &p).unwrap();
        let via_det = hankel_det(2, &w, &p).unwrap().det;
        let rel = ((via_product - &via_det) / via_det).abs();
        assert!(rel.to_f64() < 1e-25);
    }

    #[test]
    fn reality_holds_across_orders_and_omegas() {
        let p = policy();
        for n in 0..=8usize {
            for w in [0.1f64, 7.3, 26.0, 50.0] {
                let h = hankel_det(n, &Float::with_val(p.bits, w), &p).unwrap();
                assert!(h.det.is_finite());
            }
        }
    }

    #[test]
    fn envelope_tracks_leading_order() {
        // |h_{n}| / envelope stays within a couple of orders of magnitude of 1
        // away from zeros.
        let p = policy();
        for (n, w) in [(1usize, 40.0f64), (3, 40.0), (5, 40.0)] {
            let wf = Float::with_val(p.bits, w);
            let h = hankel_det(n, &wf, &p).unwrap().det.abs();
            let env = envelope(n as i64, &wf);
            let ratio = (h / env).to_f64();
            assert!(ratio > 1e-3 && ratio < 1e3, "n={} ratio={}", n, ratio);
        }
    }
}
