//! Closed-form asymptotic predictions: superfactorial leading orders of the
//! Hankel determinants, Laguerre behaviour of the polynomials near the
//! endpoints, onion-peel Lambert-W formulas for the complex determinant
//! zeros, and the exact binomial-matrix determinant oracles.

use crate::error::{Error, Result};
use crate::numerics::{Complex, PrecisionPolicy};
use rug::ops::Pow;
use rug::{Complete, Float, Integer};

/// Super-factorial SF(m) = prod_{i=1}^m i! = G(m+2) (Barnes G), with
/// SF(-1) = SF(0) = 1 by the G-function convention G(1) = G(2) = 1.
pub fn superfactorial(m: i64) -> Integer {
    if m <= 0 {
        return Integer::from(1);
    }
    let mut acc = Integer::from(1);
    for i in 1..=(m as u32) {
        acc *= Integer::factorial(i).complete();
    }
    acc
}

/// Laguerre polynomial L_n(c) by the explicit terminating sum
/// sum_{s=0}^n (1/s!) binom(n,s) (-c)^s.
pub fn laguerre(n: usize, c: &Complex) -> Complex {
    let prec = c.prec();
    let mut acc = Complex::zero(prec);
    let mut neg_c_pow = Complex::one(prec);
    for s in 0..=n {
        let coeff = Float::with_val(prec, Integer::from(n as u32).binomial(s as u32))
            / Float::with_val(prec, Integer::factorial(s as u32).complete());
        acc = acc.add(&neg_c_pow.scale(&coeff));
        neg_c_pow = neg_c_pow.mul(&c.neg());
    }
    acc
}

/// L_n(c) by the three-term recurrence, an independent evaluation route.
pub fn laguerre_recurrence(n: usize, c: &Complex) -> Complex {
    let prec = c.prec();
    let mut prev = Complex::one(prec); // L_0
    if n == 0 {
        return prev;
    }
    let mut curr = Complex::one(prec).sub(c); // L_1
    for k in 1..n {
        // (k+1) L_{k+1} = (2k+1-c) L_k - k L_{k-1}
        let a = Complex::real(Float::with_val(prec, (2 * k + 1) as u32)).sub(c);
        let next = a
            .mul(&curr)
            .sub(&prev.scale_i64(k as i64))
            .scale(&Float::with_val(prec, (k + 1) as u32).recip());
        prev = curr;
        curr = next;
    }
    curr
}

/// Coefficients of L_n in ascending powers, exact rationals at `prec` bits.
pub fn laguerre_coefficients(n: usize, prec: u32) -> Vec<Complex> {
    (0..=n)
        .map(|s| {
            let num = Integer::from(n as u32).binomial(s as u32);
            let den = Integer::factorial(s as u32).complete();
            let mut v = Float::with_val(prec, num) / Float::with_val(prec, den);
            if s % 2 == 1 {
                v = -v;
            }
            Complex::real(v)
        })
        .collect()
}

/// Leading term of `I_{2N}[1]`, the prediction for h_{2N-1}:
/// 4^{N^2} SF(N-1)^4 / omega^{2N^2}.
pub fn leading_even(n_half: u32, omega: &Float) -> Float {
    let prec = omega.prec();
    let sf = superfactorial(n_half as i64 - 1);
    let coeff = Float::with_val(prec, Integer::from(4).pow(n_half * n_half))
        * Float::with_val(prec, sf.pow(4));
    coeff / omega.clone().pow(2 * n_half * n_half)
}

/// Leading term of `I_{2N+1}[1]`, the prediction for h_{2N}:
/// 2 (-1)^N 4^{N(N+1)} SF(N-1)^2 SF(N)^2 sin(omega) / omega^{2N(N+1)+1}.
/// At N = 0 this is exactly h_0 = 2 sin(omega)/omega.
pub fn leading_odd(n_half: u32, omega: &Float) -> Float {
    let prec = omega.prec();
    let sf1 = superfactorial(n_half as i64 - 1);
    let sf2 = superfactorial(n_half as i64);
    let mut coeff = Float::with_val(prec, Integer::from(4).pow(n_half * (n_half + 1)))
        * Float::with_val(prec, sf1.pow(2))
        * Float::with_val(prec, sf2.pow(2))
        * 2u32;
    if n_half % 2 == 1 {
        coeff = -coeff;
    }
    coeff * omega.clone().sin() / omega.clone().pow(2 * n_half * (n_half + 1) + 1)
}

/// Leading-order value of the monic polynomial near the right endpoint:
/// p_{2N}(1 - c/(i omega)) = ((-2i)^N N! / omega^N) L_N(c) (1 + O(1/omega)).
pub fn endpoint_monic_limit(n_half: usize, c: &Complex, omega: &Float) -> Complex {
    let prec = c.prec().max(omega.prec());
    let lag = laguerre(n_half, &c.with_prec(prec));
    // (-2i)^N
    let minus_two_i = Complex::new(Float::new(prec), Float::with_val(prec, -2));
    let phase = minus_two_i.powi(n_half as u32);
    let scale = Float::with_val(prec, Integer::factorial(n_half as u32).complete())
        / omega.clone().pow(n_half as u32);
    phase.mul(&lag).scale(&scale)
}

/// The full product approximation of the even polynomial,
/// p_{2N}(x) ~ (i/omega)^{2N} L_N(-i omega (x+1)) L_N(-i omega (x-1)).
pub fn laguerre_product(n_half: usize, x: &Complex, omega: &Float) -> Complex {
    let prec = x.prec().max(omega.prec());
    let om = Complex::real(omega.clone()).with_prec(prec);
    let xx = x.with_prec(prec);
    let one = Complex::one(prec);
    let arg_plus = xx.add(&one).mul(&om).mul_i().neg();
    let arg_minus = xx.sub(&one).mul(&om).mul_i().neg();
    let i_over_w = Complex::i(prec).scale(&Float::with_val(prec, omega).recip());
    i_over_w
        .powi(2 * n_half as u32)
        .mul(&laguerre(n_half, &arg_plus))
        .mul(&laguerre(n_half, &arg_minus))
}

/// The 2N predicted zeros of p_{2N}: +/-1 + i c_k / omega for the roots c_k
/// of the Nth Laguerre polynomial.
pub fn laguerre_root_prediction(
    n_half: usize,
    omega: &Float,
    policy: &PrecisionPolicy,
) -> Result<Vec<Complex>> {
    assert!(n_half >= 1);
    let prec = policy.bits;
    let coeffs = laguerre_coefficients(n_half, prec);
    let set = crate::roots::poly_roots(&coeffs, policy)?;
    let mut out = Vec::with_capacity(2 * n_half);
    for c in &set.roots {
        let shift = c.scale(&Float::with_val(prec, omega).recip()).mul_i();
        out.push(Complex::one(prec).add(&shift));
        out.push(Complex::one(prec).neg().add(&shift));
    }
    Ok(out)
}

/// Which Hankel-determinant family a peel formula targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Zeros of the odd-index determinants h_{2N-1}.
    Odd,
    /// Zeros of the even-index determinants h_{2N}.
    Even,
}

impl Parity {
    /// The determinant index whose zeros the family describes.
    pub fn determinant_index(self, n_half: usize) -> usize {
        match self {
            Parity::Odd => 2 * n_half - 1,
            Parity::Even => 2 * n_half,
        }
    }
}

/// An onion-peel zero prediction for h_n in the complex omega plane.
#[derive(Debug, Clone)]
pub struct PeelPrediction {
    pub parity: Parity,
    pub n_half: usize,
    pub k: usize,
    pub ell: usize,
    /// Lambert-W branch that produced this prediction.
    pub branch: i32,
    pub omega_pred: Complex,
}

/// The layer coefficient c_{2N,k} (odd family) or c_{2N+1,k} (even family)
/// as an exact integer, with a flag marking a purely imaginary value:
/// c_{2N,k} = 4^{N^2-k^2} [SF(N-k-1) SF(N+k-1)]^2 (real) and
/// c_{2N+1,k} = i (-1)^{N+k} 4^{(N-k)(N+k+1)} [SF(N+k) SF(N-k-1)]^2 (imaginary).
pub fn peel_coefficient(parity: Parity, n_half: usize, k: usize) -> (Integer, bool) {
    let n = n_half as i64;
    let k = k as i64;
    assert!(k >= 0 && k <= n, "peel index out of range");
    match parity {
        Parity::Odd => {
            let exp = (n * n - k * k) as u32;
            let v = Integer::from(4).pow(exp)
                * (superfactorial(n - k - 1) * superfactorial(n + k - 1)).pow(2);
            (v, false)
        }
        Parity::Even => {
            let exp = ((n - k) * (n + k + 1)) as u32;
            let mut v = Integer::from(4).pow(exp)
                * (superfactorial(n + k) * superfactorial(n - k - 1)).pow(2);
            if (n + k) % 2 == 1 {
                v = -v;
            }
            (v, true)
        }
    }
}

/// The raw ratio (-c_{.,k+1}/c_{.,k})^(1/(4k+2)) (odd family) or
/// ^(1/(4k+4)) (even family), by principal-branch root of the exact rational.
pub fn peel_ratio_raw(parity: Parity, n_half: usize, k: usize, prec: u32) -> Complex {
    let (ck, _) = peel_coefficient(parity, n_half, k);
    let (ck1, _) = peel_coefficient(parity, n_half, k + 1);
    // both coefficients carry the same i-power inside one family, so the
    // ratio is the plain integer ratio
    let ratio = -(Float::with_val(prec, ck1) / Float::with_val(prec, ck));
    let root_order = match parity {
        Parity::Odd => 4 * k as u32 + 2,
        Parity::Even => 4 * k as u32 + 4,
    };
    if ratio >= 0u32 {
        Complex::real(ratio.root(root_order))
    } else {
        // principal branch of a negative real: |r|^(1/m) e^{i pi/m}
        let mag = ratio.abs().root(root_order);
        let angle = crate::numerics::pi(prec) / Float::with_val(prec, root_order);
        let (s, c) = angle.sin_cos(Float::new(prec));
        Complex::new(mag.clone() * c, mag * s)
    }
}

/// The simplified closed form of the same ratio: for the odd family
/// (e^{i pi/(4k+2)}/2) [(N+k)!/(N-k-1)!]^{1/(2k+1)}; for the even family the
/// ratio of coefficients is positive real and the simplification carries no
/// phase: (1/2) [(N+k+1)!/(N-k-1)!]^{1/(2k+2)}.
pub fn peel_ratio_simplified(parity: Parity, n_half: usize, k: usize, prec: u32) -> Complex {
    let n = n_half as i64;
    match parity {
        Parity::Odd => {
            let fac = Integer::factorial((n + k as i64) as u32).complete()
                / Integer::factorial((n - k as i64 - 1) as u32).complete();
            let mag = Float::with_val(prec, fac).root(2 * k as u32 + 1) / Float::with_val(prec, 2);
            let angle = crate::numerics::pi(prec) / Float::with_val(prec, 4 * k as u32 + 2);
            let (s, c) = angle.sin_cos(Float::new(prec));
            Complex::new(mag.clone() * c, mag * s)
        }
        Parity::Even => {
            let fac = Integer::factorial((n + k as i64 + 1) as u32).complete()
                / Integer::factorial((n - k as i64 - 1) as u32).complete();
            let mag = Float::with_val(prec, fac).root(2 * k as u32 + 2) / Float::with_val(prec, 2);
            Complex::real(mag)
        }
    }
}

/// Lambert W on the requested branch: the w with w e^w = z, found by a
/// branch-aware logarithmic initial guess refined with Halley iteration.
pub fn lambert_w(z: &Complex, branch: i32, policy: &PrecisionPolicy) -> Result<Complex> {
    let prec = policy.bits;
    let z = z.with_prec(prec);
    if z.is_zero() {
        assert!(branch == 0, "only the principal branch is defined at z = 0");
        return Ok(Complex::zero(prec));
    }

    let two_pi_b = crate::numerics::pi(prec) * 2u32 * Float::with_val(prec, branch);
    let mut w = if branch == 0 && z.abs() < 0.35f64 {
        // W_0(z) = z - z^2 + ... near the origin
        z.sub(&z.mul(&z))
    } else if branch == 0
        && !(z.im.is_zero() && z.re.clone() < Float::with_val(prec, -0.3678794411714423))
    {
        // ln(1+z) seeds the principal branch everywhere away from the cut;
        // the bare log guess hops to W_{-1} for moderate |z|. On the cut
        // (real z < -1/e) W_0 is complex and needs the off-axis log seed.
        z.add(&Complex::one(prec)).ln()
    } else if branch == -1
        && z.im.is_zero()
        && z.re.is_sign_negative()
        && z.re.clone() > Float::with_val(prec, -0.3678)
    {
        // real lower branch: W_{-1}(x) ~ ln(-x) - ln(-ln(-x))
        let lx = (-z.re.clone()).ln();
        Complex::real(lx.clone() - (-lx).ln())
    } else {
        let l1 = z.ln().add(&Complex::new(Float::new(prec), two_pi_b));
        l1.sub(&l1.ln())
    };

    let target = Float::with_val(64, -(prec as i64) + 8).exp2();
    let mut converged = false;
    for _ in 0..200 {
        let ew = w.exp();
        let f = w.mul(&ew).sub(&z);
        // Halley: w -= f / (e^w (w+1) - (w+2) f / (2w+2))
        let w1 = w.add(&Complex::one(prec));
        let denom = ew.mul(&w1).sub(
            &w.add(&Complex::from_f64(prec, 2.0, 0.0))
                .mul(&f)
                .div(&w1.scale_i64(2)),
        );
        if denom.is_zero() {
            break;
        }
        let step = f.div(&denom);
        w = w.sub(&step);
        if step.abs() <= (w.abs() + Float::with_val(prec, 1e-30)) * &target {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Lambert W Halley iteration",
            iterations: 200,
        });
    }
    // residual certificate
    let resid = w.mul(&w.exp()).sub(&z).abs();
    let tol = (z.abs() * Float::with_val(prec, policy.rel_tol)).max(&Float::with_val(
        prec,
        Float::with_val(64, -(prec as i64) + 16).exp2(),
    ));
    if resid > tol {
        return Err(Error::NoConvergence {
            what: "Lambert W residual check",
            iterations: 200,
        });
    }
    Ok(w)
}

/// Onion-peel predictions for the zeros of h_{2N-1} (odd family) or h_{2N}
/// (even family) on peel k with phase index ell, evaluated across Lambert-W
/// branches -3..=3 and filtered to Re omega > 0. The fourth-quadrant mirrors
/// follow by conjugation since h_n(conj omega) = conj(h_n(omega)). A
/// prediction is only asymptotically meaningful when Newton refinement from
/// it converges to a nearby genuine zero; the innermost branch outputs sit
/// outside the formula's validity and are discarded downstream.
pub fn peel_prediction(
    parity: Parity,
    n_half: usize,
    k: usize,
    ell: usize,
    policy: &PrecisionPolicy,
) -> Result<Vec<PeelPrediction>> {
    assert!(n_half >= 1 && k < n_half, "peel index out of range");
    let max_ell = match parity {
        Parity::Odd => 4 * k + 1,
        Parity::Even => 4 * k + 3,
    };
    assert!(ell <= max_ell, "phase index out of range");
    let prec = policy.bits;

    let rho = peel_ratio_simplified(parity, n_half, k, prec);
    let (scale_num, phase_den) = match parity {
        Parity::Odd => (2 * k as u32 + 1, 2 * k as u32 + 1),
        Parity::Even => (2 * (k as u32 + 1), 2 * (k as u32 + 1)),
    };
    let phase = {
        let angle = crate::numerics::pi(prec) * Float::with_val(prec, ell as u32)
            / Float::with_val(prec, phase_den);
        let (s, c) = angle.sin_cos(Float::new(prec));
        Complex::new(c, s)
    };
    let arg = rho
        .mul(&phase)
        .mul_i()
        .scale(&Float::with_val(prec, scale_num).recip());

    let mut out = Vec::new();
    for branch in -3i32..=3 {
        let w = match lambert_w(&arg, branch, policy) {
            Ok(w) => w,
            Err(Error::NoConvergence { .. }) => continue,
            Err(e) => return Err(e),
        };
        let omega = w.mul_i().neg().scale(&Float::with_val(prec, scale_num));
        if omega.re <= 0u32 {
            continue;
        }
        // distinct branches occasionally collapse to the same point
        if out
            .iter()
            .any(|p: &PeelPrediction| p.omega_pred.sub(&omega).abs() < 1e-9f64)
        {
            continue;
        }
        out.push(PeelPrediction {
            parity,
            n_half,
            k,
            ell,
            branch,
            omega_pred: omega,
        });
    }
    Ok(out)
}

/// Fraction-free (Bareiss) determinant of an exact integer matrix.
fn integer_det(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    if n == 0 {
        return Integer::from(1);
    }
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // pivot search to keep the elimination exact
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Integer::from(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = (&m[i][j] * &m[k][k]).complete() - (&m[i][k] * &m[k][j]).complete();
                m[i][j] = t / &prev;
            }
            m[i][k] = Integer::from(0);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// det of the s x s Pascal matrix A_{i,j} = binom(i+j, j); identically 1.
pub fn pascal_det_check(s: usize) -> Integer {
    let m: Vec<Vec<Integer>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| Integer::from((i + j) as u32).binomial(j as u32))
                .collect()
        })
        .collect();
    integer_det(m)
}

/// det of the N x N binomial matrix with rows >= N-s bumped to
/// binom(i+j+1, i+1); equals binom(N, s).
pub fn c_matrix_det_check(n: usize, s: usize) -> Integer {
    assert!(s <= n);
    let m: Vec<Vec<Integer>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i < n - s {
                        Integer::from((i + j) as u32).binomial(i as u32)
                    } else {
                        Integer::from((i + j + 1) as u32).binomial((i + 1) as u32)
                    }
                })
                .collect()
        })
        .collect();
    integer_det(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rel_diff;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn superfactorials() {
        assert_eq!(superfactorial(3), 12);
        assert_eq!(superfactorial(0), 1);
        assert_eq!(superfactorial(-1), 1);
        assert_eq!(superfactorial(4), 288);
    }

    #[test]
    fn laguerre_values() {
        let prec = 256;
        let one = Complex::one(prec);
        assert!(laguerre(1, &one).abs().to_f64() < 1e-70);
        let c = Complex::real(Float::with_val(prec, 2) - Float::with_val(prec, 2).sqrt());
        assert!(laguerre(2, &c).abs().to_f64() < 1e-70);
        let seven = Complex::from_f64(prec, 7.0, 0.0);
        assert_eq!(laguerre(0, &seven).re.to_f64(), 1.0);
    }

    #[test]
    fn laguerre_two_routes_agree() {
        let z = Complex::from_f64(256, 1.7, -0.4);
        for n in 0..=20usize {
            let a = laguerre(n, &z);
            let b = laguerre_recurrence(n, &z);
            assert!(rel_diff(&a, &b).to_f64() < 1e-60, "n={}", n);
        }
    }

    #[test]
    fn leading_terms_match_small_cases() {
        let w = Float::with_val(256, 2);
        // leading_even(1) = 4/w^2
        assert!((leading_even(1, &w).to_f64() - 1.0).abs() < 1e-70);
        // leading_even(2) = 256/w^8
        assert!((leading_even(2, &w).to_f64() - 1.0).abs() < 1e-70);
        // leading_even(3) = 4194304/w^18
        let v: Float = leading_even(3, &w) * Float::with_val(256, 2).pow(18i32);
        assert!((v.to_f64() - 4194304.0).abs() < 1e-60);
        // leading_odd(0) = 2 sin w / w exactly
        let h0 = crate::closedforms::h0(&w);
        assert!((leading_odd(0, &w) - h0).abs().to_f64() < 1e-70);
        // leading_odd(1) = -32 sin w / w^5
        let expected: Float =
            Float::with_val(256, 2).sin() * -32i32 / Float::with_val(256, 2).pow(5i32);
        assert!((leading_odd(1, &w) - expected).abs().to_f64() < 1e-70);
        // leading_odd(2) = 32768 sin w / w^13
        let expected: Float =
            Float::with_val(256, 2).sin() * 32768i32 / Float::with_val(256, 2).pow(13i32);
        assert!((leading_odd(2, &w) - expected).abs().to_f64() < 1e-60);
    }

    #[test]
    fn endpoint_limit_values() {
        let prec = 256;
        let w = Float::with_val(prec, 100);
        // L_1(1) = 0 kills the limit for every omega
        let v = endpoint_monic_limit(1, &Complex::one(prec), &w);
        assert!(v.abs().to_f64() < 1e-70);
        // at c = 0: (-2i) 1!/100 L_1(0) = -0.02i
        let v = endpoint_monic_limit(1, &Complex::zero(prec), &w);
        assert!(v.re.to_f64().abs() < 1e-70);
        assert!((v.im.to_f64() + 0.02).abs() < 1e-17);
    }

    #[test]
    fn peel_coefficients_match_expansions() {
        // c_{2,0} = 4 (the 4/w^2 coefficient of h_1)
        let (c, imag) = peel_coefficient(Parity::Odd, 1, 0);
        assert_eq!(c, 4);
        assert!(!imag);
        // c_{2,1} = 1 (the e^{-2iw}/w^4 coefficient of h_1)
        let (c, _) = peel_coefficient(Parity::Odd, 1, 1);
        assert_eq!(c, 1);
        // c_{3,0} = -16i
        let (c, imag) = peel_coefficient(Parity::Even, 1, 0);
        assert_eq!(c, -16);
        assert!(imag);
        // c_{3,1} = 4i
        let (c, imag) = peel_coefficient(Parity::Even, 1, 1);
        assert_eq!(c, 4);
        assert!(imag);
    }

    #[test]
    fn ratio_simplification_self_check() {
        let prec = 256;
        for n in 1..=4usize {
            for k in 0..n {
                for parity in [Parity::Odd, Parity::Even] {
                    let raw = peel_ratio_raw(parity, n, k, prec);
                    let simplified = peel_ratio_simplified(parity, n, k, prec);
                    assert!(
                        rel_diff(&raw, &simplified).to_f64() < 1e-30,
                        "{:?} N={} k={}",
                        parity,
                        n,
                        k
                    );
                }
            }
        }
    }

    #[test]
    fn lambert_w_basics() {
        let p = policy();
        let prec = p.bits;
        // W_0(0) = 0
        let w = lambert_w(&Complex::zero(prec), 0, &p).unwrap();
        assert!(w.is_zero());
        // W_0(e) = 1
        let e = Complex::real(Float::with_val(prec, 1).exp());
        let w = lambert_w(&e, 0, &p).unwrap();
        assert!(rel_diff(&w, &Complex::one(prec)).to_f64() < 1e-70);
        // W_0(-pi/2) = i pi/2
        let z = Complex::real(-crate::numerics::pi(prec) / 2u32);
        let w = lambert_w(&z, 0, &p).unwrap();
        let expected = Complex::new(Float::new(prec), crate::numerics::pi(prec) / 2u32);
        assert!(rel_diff(&w, &expected).to_f64() < 1e-70);
    }

    #[test]
    fn lambert_w_residuals_across_branches() {
        let p = policy();
        let prec = p.bits;
        let zs = [
            Complex::from_f64(prec, 0.5, 0.0),
            Complex::from_f64(prec, -0.5, 0.0),
            Complex::from_f64(prec, 0.0, 0.35),
            Complex::from_f64(prec, -1.7, 2.3),
        ];
        for z in &zs {
            for b in -2i32..=2 {
                let w = lambert_w(z, b, &p).unwrap();
                let resid = w.mul(&w.exp()).sub(z).abs() / z.abs();
                assert!(resid.to_f64() < 1e-30, "z={} b={}", z, b);
            }
        }
    }

    #[test]
    fn lambert_w_branches_are_distinct() {
        let p = policy();
        let z = Complex::from_f64(p.bits, 0.5, 0.25);
        let w0 = lambert_w(&z, 0, &p).unwrap();
        let w1 = lambert_w(&z, 1, &p).unwrap();
        let wm1 = lambert_w(&z, -1, &p).unwrap();
        assert!(w0.sub(&w1).abs().to_f64() > 1.0);
        assert!(w0.sub(&wm1).abs().to_f64() > 1.0);
    }

    #[test]
    fn odd_family_first_peel_is_w_of_half() {
        // (odd, N=1, k=0): the argument magnitude is 1/2 and predictions are
        // -i W(-/+ 1/2) across branches.
        let p = policy();
        let preds0 = peel_prediction(Parity::Odd, 1, 0, 0, &p).unwrap();
        let preds1 = peel_prediction(Parity::Odd, 1, 0, 1, &p).unwrap();
        assert!(!preds0.is_empty() && !preds1.is_empty());
        for pr in preds0.iter().chain(preds1.iter()) {
            assert!(pr.omega_pred.re > 0u32);
            let w = lambert_w(
                &Complex::real(Float::with_val(
                    p.bits,
                    if pr.ell == 0 { -0.5 } else { 0.5 },
                )),
                pr.branch,
                &p,
            )
            .unwrap();
            let expected = w.mul_i().neg();
            assert!(pr.omega_pred.sub(&expected).abs().to_f64() < 1e-30);
        }
    }

    #[test]
    fn pascal_and_c_matrix_determinants() {
        for s in 0..=8usize {
            assert_eq!(pascal_det_check(s), 1, "s={}", s);
        }
        assert_eq!(c_matrix_det_check(5, 2), 10);
        for n in 1..=8usize {
            for s in 0..=n {
                let expected = Integer::from(n as u32).binomial(s as u32);
                assert_eq!(c_matrix_det_check(n, s), expected, "N={} s={}", n, s);
            }
        }
    }
}
