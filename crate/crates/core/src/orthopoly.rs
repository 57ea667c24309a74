//! Construction of the monic orthogonal polynomials p_n, the rescaled
//! polynomials p~_n = h_{n-1} p_n that exist for every omega, and the
//! three-term recurrence coefficients with their Toda-flow consistency checks.
//!
//! The inner product throughout is the bilinear (non-Hermitian) form
//! <f,g> = int_{-1}^1 f g e^{i omega x} dx, expanded over moments.

use crate::error::{Error, Result};
use crate::hankel;
use crate::moments::{self, MomentSequence};
use crate::numerics::{Complex, PrecisionPolicy};
use rug::ops::CompleteRound;
use rug::Float;

/// Monic orthogonal polynomial p_n; `coeffs[k]` multiplies x^k and
/// `coeffs[n] = 1` exactly.
#[derive(Debug, Clone)]
pub struct MonicPolynomial {
    pub degree: usize,
    pub coeffs: Vec<Complex>,
    pub omega: Complex,
}

/// p~_n = h_{n-1} p_n, defined for all omega. The leading coefficient equals
/// h_{n-1}(omega) and may vanish, dropping the numerical degree.
#[derive(Debug, Clone)]
pub struct TildePolynomial {
    pub nominal_degree: usize,
    pub coeffs: Vec<Complex>,
    pub omega: Complex,
}

/// Recurrence coefficients alpha_0..alpha_{m-1} and beta_1..beta_{m-1} of
/// p_{n+1} = (x - alpha_n) p_n - beta_n p_{n-1}.
#[derive(Debug, Clone)]
pub struct RecurrenceCoefficients {
    pub alphas: Vec<Complex>,
    pub betas: Vec<Complex>,
    pub omega: Complex,
}

impl RecurrenceCoefficients {
    pub fn alpha(&self, n: usize) -> &Complex {
        &self.alphas[n]
    }

    /// beta_n for n >= 1.
    pub fn beta(&self, n: usize) -> &Complex {
        assert!(n >= 1);
        &self.betas[n - 1]
    }
}

impl MonicPolynomial {
    pub fn evaluate(&self, z: &Complex) -> Complex {
        evaluate(&self.coeffs, z)
    }
}

impl TildePolynomial {
    pub fn evaluate(&self, z: &Complex) -> Complex {
        evaluate(&self.coeffs, z)
    }

    pub fn leading(&self) -> &Complex {
        &self.coeffs[self.nominal_degree]
    }

    /// Largest k with `|coeffs[k]|` above `threshold`.
    pub fn numerical_degree(&self, threshold: &Float) -> usize {
        for k in (0..=self.nominal_degree).rev() {
            if self.coeffs[k].abs() > *threshold {
                return k;
            }
        }
        0
    }
}

/// Horner evaluation at working precision.
pub fn evaluate(coeffs: &[Complex], z: &Complex) -> Complex {
    let prec = z.prec().max(coeffs.last().map_or(64, |c| c.prec()));
    let mut acc = Complex::zero(prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

/// Dense polynomial product.
pub fn poly_mul(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let prec = a[0].prec();
    let mut out = vec![Complex::zero(prec); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// Coefficient-wise derivative.
pub fn poly_derivative(coeffs: &[Complex]) -> Vec<Complex> {
    if coeffs.len() <= 1 {
        return vec![Complex::zero(coeffs.first().map_or(64, |c| c.prec()))];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale_i64(k as i64))
        .collect()
}

/// The bilinear form <f,g> = sum_k (fg)_k mu_k.
pub fn bilinear_inner(seq: &MomentSequence, f: &[Complex], g: &[Complex]) -> Result<Complex> {
    let prod = poly_mul(f, g);
    let mut acc = Complex::zero(prod[0].prec());
    for (k, c) in prod.iter().enumerate() {
        acc = acc.add(&c.mul(seq.value(k)?));
    }
    Ok(acc)
}

/// Monic coefficients of p_n from a moment table: solves the n x n Hankel
/// system H_{n-1} c = -(mu_n .. mu_{2n-1}). Returns `None` on an exactly
/// singular pivot.
pub(crate) fn monic_coeffs_from_moments(seq: &MomentSequence, n: usize) -> Option<Vec<Complex>> {
    let prec = seq.values[0].prec();
    if n == 0 {
        return Some(vec![Complex::one(prec)]);
    }
    let mut matrix = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = Vec::with_capacity(n);
        for k in 0..n {
            row.push(seq.values[j + k].clone());
        }
        matrix.push(row);
    }
    let rhs: Vec<Complex> = (0..n).map(|j| seq.values[n + j].neg()).collect();
    let mut coeffs = hankel::lu_solve(matrix, rhs)?;
    coeffs.push(Complex::one(prec));
    Some(coeffs)
}

/// Maximum coefficient magnitude.
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

fn vec_agree(a: &[Complex], b: &[Complex], tol: &Float) -> bool {
    let p = b[0].prec();
    let mut scale = coeff_norm(a);
    let sb = coeff_norm(b);
    if sb > scale {
        scale = sb;
    }
    if scale.is_zero() {
        return true;
    }
    let limit = (&scale * tol).complete(p);
    a.iter()
        .zip(b.iter())
        .all(|(x, y)| x.with_prec(p).sub(y).abs() <= limit)
}

/// Adaptive escalation for coefficient vectors: accept once two consecutive
/// precisions agree on the whole vector and `extra_ok` passes on the finer one.
fn adaptive_vec<F, G>(f: F, policy: &PrecisionPolicy, extra_ok: G) -> Result<Vec<Complex>>
where
    F: Fn(u32) -> Result<Vec<Complex>>,
    G: Fn(&[Complex], u32) -> Result<bool>,
{
    let tol = Float::with_val(64, policy.rel_tol);
    let mut lo = f(policy.bits)?;
    let mut hi_bits = (2 * policy.bits).min(policy.max_bits);
    loop {
        let hi = f(hi_bits)?;
        if vec_agree(&lo, &hi, &tol) && extra_ok(&hi, hi_bits)? {
            return Ok(hi);
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

/// Existence threshold for p_n at omega: |h_{n-1}| must exceed
/// 1e-15 x the leading-order envelope.
pub fn degeneracy_threshold(n: usize, omega: &Float) -> Float {
    let env = hankel::envelope(n as i64 - 1, omega);
    env * Float::with_val(omega.prec(), 1e-15)
}

/// The monic orthogonal polynomial p_n. Fails with `NearSingular` at zeros of
/// h_{n-1}, where p_n does not exist.
pub fn monic_op(n: usize, omega: &Float, policy: &PrecisionPolicy) -> Result<MonicPolynomial> {
    let om = Complex::real(omega.clone());
    if n == 0 {
        return Ok(MonicPolynomial {
            degree: 0,
            coeffs: vec![Complex::one(policy.bits)],
            omega: om,
        });
    }

    let h_prev = hankel::hankel_det(n - 1, omega, policy)?;
    let threshold = degeneracy_threshold(n, omega);
    let mag = h_prev.det_raw.abs();
    if mag < threshold {
        return Err(Error::NearSingular {
            index: n as i64 - 1,
            magnitude: mag.to_f64(),
            threshold: threshold.to_f64(),
        });
    }

    let coeffs = adaptive_vec(
        |prec| {
            let seq = moments::moments_at(2 * n - 1, &om, prec, policy)?;
            monic_coeffs_from_moments(&seq, n).ok_or(Error::NearSingular {
                index: n as i64 - 1,
                magnitude: 0.0,
                threshold: threshold.to_f64(),
            })
        },
        policy,
        |coeffs, prec| {
            // Orthogonality residuals <p_n, x^k> for k < n certify the solve.
            let seq = moments::moments_at(2 * n - 1, &om.with_prec(prec), prec, policy)?;
            let mut mu_scale = Float::new(prec);
            for v in &seq.values {
                let a = v.abs();
                if a > mu_scale {
                    mu_scale = a;
                }
            }
            let bound = coeff_norm(coeffs) * &mu_scale * Float::with_val(prec, policy.rel_tol);
            for k in 0..n {
                let mut r = Complex::zero(prec);
                for (j, c) in coeffs.iter().enumerate() {
                    r = r.add(&c.mul(seq.value(k + j)?));
                }
                if r.abs() > bound {
                    return Ok(false);
                }
            }
            Ok(true)
        },
    )?;

    Ok(MonicPolynomial {
        degree: n,
        coeffs,
        omega: om,
    })
}

/// p~_n by cofactor expansion of the (n+1)x(n+1) determinant along its last
/// column; total in omega, no division by h_{n-1}.
pub fn tilde_op(n: usize, omega: &Float, policy: &PrecisionPolicy) -> Result<TildePolynomial> {
    let om = Complex::real(omega.clone());
    if n == 0 {
        return Ok(TildePolynomial {
            nominal_degree: 0,
            coeffs: vec![Complex::one(policy.bits)],
            omega: om,
        });
    }

    let coeffs = adaptive_vec(
        |prec| {
            let seq = moments::moments_at(2 * n - 1, &om, prec, policy)?;
            let mut out = Vec::with_capacity(n + 1);
            for r in 0..=n {
                // minor: delete row r and the trailing x-column
                let mut minor = Vec::with_capacity(n);
                for j in (0..=n).filter(|&j| j != r) {
                    let mut row = Vec::with_capacity(n);
                    for c in 0..n {
                        row.push(seq.values[j + c].clone());
                    }
                    minor.push(row);
                }
                let mut v = hankel::det_lu(minor);
                if (r + n) % 2 == 1 {
                    v = v.neg();
                }
                out.push(v);
            }
            Ok(out)
        },
        policy,
        |_, _| Ok(true),
    )?;

    Ok(TildePolynomial {
        nominal_degree: n,
        coeffs,
        omega: om,
    })
}

/// Recurrence coefficients from Hankel determinants, cross-checked against
/// Stieltjes inner products.
pub fn recurrence_coeffs(
    m: usize,
    omega: &Float,
    policy: &PrecisionPolicy,
) -> Result<RecurrenceCoefficients> {
    assert!(m >= 1);
    let om = Complex::real(omega.clone());
    let prec = policy.bits;

    // h_n and h_n' for n = -1..m-1 (h_{-1} = 1, h_{-1}' = 0)
    let mut h = vec![Complex::one(prec)];
    let mut dh = vec![Complex::zero(prec)];
    for n in 0..m {
        let hv = hankel::hankel_det(n, omega, policy)?;
        let threshold = degeneracy_threshold(n + 1, omega);
        let mag = hv.det_raw.abs();
        if mag < threshold {
            return Err(Error::NearSingular {
                index: n as i64,
                magnitude: mag.to_f64(),
                threshold: threshold.to_f64(),
            });
        }
        h.push(Complex::real(hv.det));
        dh.push(Complex::real(hankel::hankel_det_derivative(
            n, omega, 1, policy,
        )?));
    }
    let hi = |n: i64| -> &Complex { &h[(n + 1) as usize] };
    let dhi = |n: i64| -> &Complex { &dh[(n + 1) as usize] };

    let mut alphas = Vec::with_capacity(m);
    for n in 0..m as i64 {
        let a = dhi(n)
            .div(hi(n))
            .sub(&dhi(n - 1).div(hi(n - 1)))
            .mul_i()
            .neg();
        alphas.push(a);
    }
    let mut betas = Vec::with_capacity(m.saturating_sub(1));
    for n in 1..m as i64 {
        let b = hi(n).mul(hi(n - 2)).div(&hi(n - 1).mul(hi(n - 1)));
        betas.push(b);
    }

    // Stieltjes cross-check wherever the monic polynomials exist.
    let seq = moments::moments_at(2 * m - 1, &om, prec, policy)?;
    let mut tol = Float::with_val(prec, policy.rel_tol);
    let floor = Float::with_val(prec, 24 - (prec as i32)).exp2();
    if tol < floor {
        tol = floor;
    }
    let mut polys = Vec::with_capacity(m);
    for n in 0..m {
        polys.push(
            monic_coeffs_from_moments(&seq, n).ok_or(Error::NearSingular {
                index: n as i64 - 1,
                magnitude: 0.0,
                threshold: 0.0,
            })?,
        );
    }
    let mut norms = Vec::with_capacity(m);
    for p in &polys {
        norms.push(bilinear_inner(&seq, p, p)?);
    }
    for n in 0..m {
        let xp: Vec<Complex> = {
            let mut v = vec![Complex::zero(prec)];
            v.extend(polys[n].iter().cloned());
            v
        };
        let alpha_s = bilinear_inner(&seq, &xp, &polys[n])?.div(&norms[n]);
        let d = alpha_s.sub(&alphas[n]).abs();
        let scale = {
            let a = alpha_s.abs();
            let b = alphas[n].abs();
            let mx = if a > b { a } else { b };
            // alpha can vanish (it does identically at omega = 0); compare on
            // the natural O(1) coefficient scale in that case.
            if mx > 1f64 {
                mx
            } else {
                Float::with_val(prec, 1)
            }
        };
        if d > (&scale * &tol).complete(prec) {
            return Err(Error::CrossCheckFailed {
                what: "alpha via Hankel derivatives vs Stieltjes",
                disagreement: (d / scale).to_f64(),
            });
        }
        if n >= 1 {
            let beta_s = norms[n].div(&norms[n - 1]);
            let d = beta_s.sub(&betas[n - 1]).abs();
            let scale = beta_s.abs();
            if !scale.is_zero() && d > (&scale * &tol).complete(prec) {
                return Err(Error::CrossCheckFailed {
                    what: "beta via Hankel ratio vs Stieltjes",
                    disagreement: (d / scale).to_f64(),
                });
            }
        }
    }

    Ok(RecurrenceCoefficients {
        alphas,
        betas,
        omega: om,
    })
}

/// Max relative residual of the differential-difference (Toda/Flaschka)
/// system over n < m: central finite differences of alpha_n, beta_n at step
/// `delta` against i(beta_{n+1}-beta_n) and i beta_n (alpha_n - alpha_{n-1}).
pub fn dd_residual(
    m: usize,
    omega: &Float,
    policy: &PrecisionPolicy,
    delta: &Float,
) -> Result<Float> {
    assert!(m >= 1);
    let prec = policy.bits;
    let center = recurrence_coeffs(m + 1, omega, policy)?;
    let up = recurrence_coeffs(m, &Float::with_val(prec, omega + delta.clone()), policy)?;
    let dn = recurrence_coeffs(m, &Float::with_val(prec, omega - delta.clone()), policy)?;
    let half_inv = Float::with_val(prec, 0.5) / delta;

    let rel = |fd: &Complex, rhs: &Complex| -> Float {
        let d = fd.sub(rhs).abs();
        let a = fd.abs();
        let b = rhs.abs();
        let scale = if a > b { a } else { b };
        if scale.is_zero() {
            Float::new(prec)
        } else {
            d / scale
        }
    };

    let mut worst = Float::new(prec);
    for n in 0..m {
        let fd = up.alphas[n].sub(&dn.alphas[n]).scale(&half_inv);
        let rhs = {
            let b_next = center.beta(n + 1);
            let b_n = if n == 0 {
                Complex::zero(prec)
            } else {
                center.beta(n).clone()
            };
            b_next.sub(&b_n).mul_i()
        };
        let r = rel(&fd, &rhs);
        if r > worst {
            worst = r;
        }
    }
    for n in 1..m {
        let fd = up.beta(n).sub(dn.beta(n)).scale(&half_inv);
        let rhs = center
            .beta(n)
            .mul(&center.alphas[n].sub(&center.alphas[n - 1]))
            .mul_i();
        let r = rel(&fd, &rhs);
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::pi;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn legendre_p2() {
        let p = policy();
        let poly = monic_op(2, &Float::with_val(p.bits, 0), &p).unwrap();
        assert!((poly.coeffs[0].re.to_f64() + 1.0 / 3.0).abs() < 1e-70);
        assert!(poly.coeffs[0].im.is_zero());
        assert!(poly.coeffs[1].is_zero());
        assert_eq!(poly.coeffs[2].re.to_f64(), 1.0);
        // evaluate at a root and at 1
        let z = Complex::from_f64(p.bits, 1.0, 0.0);
        assert!((poly.evaluate(&z).re.to_f64() - 2.0 / 3.0).abs() < 1e-70);
        let root = Complex::real(Float::with_val(p.bits, 3).sqrt().recip());
        assert!(poly.evaluate(&root).abs().to_f64() < 1e-70);
    }

    #[test]
    fn p1_at_half_pi() {
        let p = policy();
        let w = pi(p.bits) / 2u32;
        let poly = monic_op(1, &w, &p).unwrap();
        // p_1 = x - 2i/pi
        let expected = -2.0 / std::f64::consts::PI;
        assert!(poly.coeffs[0].re.to_f64().abs() < 1e-70);
        assert!((poly.coeffs[0].im.to_f64() - expected).abs() < 1e-15);
    }

    #[test]
    fn orthogonality_residuals_small() {
        let p = policy();
        let w = Float::with_val(p.bits, 7.25);
        for n in 1..=6usize {
            let poly = monic_op(n, &w, &p).unwrap();
            let seq = moments::moments_at(2 * n, &poly.omega, p.bits, &p).unwrap();
            let mut mu0 = seq.values[0].abs();
            for v in &seq.values {
                let a = v.abs();
                if a > mu0 {
                    mu0 = a;
                }
            }
            for k in 0..n {
                let xk: Vec<Complex> = (0..=k)
                    .map(|j| {
                        if j == k {
                            Complex::one(p.bits)
                        } else {
                            Complex::zero(p.bits)
                        }
                    })
                    .collect();
                let r = bilinear_inner(&seq, &poly.coeffs, &xk).unwrap();
                assert!(
                    r.abs() < mu0.clone() * Float::with_val(p.bits, 1e-25),
                    "n={} k={}",
                    n,
                    k
                );
            }
        }
    }

    #[test]
    fn reflection_symmetry_of_coefficients() {
        // c_k (-1)^{n-k} = conj(c_k): coefficients alternate real/imaginary.
        let p = policy();
        let w = Float::with_val(p.bits, 3.75);
        for n in 1..=5usize {
            let poly = monic_op(n, &w, &p).unwrap();
            for (k, c) in poly.coeffs.iter().enumerate() {
                if (n - k) % 2 == 0 {
                    assert!(
                        c.im.clone().abs() <= c.abs() * Float::with_val(p.bits, 1e-40),
                        "n={} k={}",
                        n,
                        k
                    );
                } else {
                    assert!(
                        c.re.clone().abs() <= c.abs() * Float::with_val(p.bits, 1e-40),
                        "n={} k={}",
                        n,
                        k
                    );
                }
            }
        }
    }

    #[test]
    fn tilde_is_scaled_monic() {
        let p = policy();
        let w = Float::with_val(p.bits, 5);
        let tilde = tilde_op(2, &w, &p).unwrap();
        let monic = monic_op(2, &w, &p).unwrap();
        let h1 = hankel::hankel_det(1, &w, &p).unwrap().det;
        for k in 0..=2usize {
            let expected = monic.coeffs[k].scale(&h1);
            let d = tilde.coeffs[k].sub(&expected).abs();
            assert!(d < Float::with_val(p.bits, 1e-25), "k={}", k);
        }
        // evaluation route agrees too
        let z = Complex::from_f64(p.bits, 0.3, 0.7);
        let lhs = tilde.evaluate(&z);
        let rhs = monic.evaluate(&z).scale(&h1);
        assert!(lhs.sub(&rhs).abs().to_f64() < 1e-30);
    }

    #[test]
    fn tilde_at_legendre_point() {
        let p = policy();
        let tilde = tilde_op(1, &Float::with_val(p.bits, 0), &p).unwrap();
        // h_0(0) p_1 = 2x
        assert!(tilde.coeffs[0].is_zero());
        assert!((tilde.coeffs[1].re.to_f64() - 2.0).abs() < 1e-70);
    }

    #[test]
    fn legendre_recurrence_coefficients() {
        let p = policy();
        let rc = recurrence_coeffs(3, &Float::with_val(p.bits, 0), &p).unwrap();
        for a in &rc.alphas {
            assert!(a.abs().to_f64() < 1e-70);
        }
        // beta_n = n^2/(4n^2-1)
        assert!((rc.beta(1).re.to_f64() - 1.0 / 3.0).abs() < 1e-70);
        assert!((rc.beta(2).re.to_f64() - 4.0 / 15.0).abs() < 1e-70);
    }

    #[test]
    fn alpha0_at_half_pi() {
        let p = policy();
        let w = pi(p.bits) / 2u32;
        let rc = recurrence_coeffs(1, &w, &p).unwrap();
        let expected = 2.0 / std::f64::consts::PI;
        assert!(rc.alphas[0].re.to_f64().abs() < 1e-30);
        assert!((rc.alphas[0].im.to_f64() - expected).abs() < 1e-15);
    }

    #[test]
    fn beta1_at_one_closed_form() {
        let p = policy();
        let w = Float::with_val(p.bits, 1);
        let rc = recurrence_coeffs(2, &w, &p).unwrap();
        // beta_1 = h_1 / h_0^2 with the closed forms of Section "small cases"
        let h0 = crate::closedforms::h0(&w);
        let h1 = crate::closedforms::h1(&w);
        let expected = h1 / h0.clone().square();
        let d = (rc.beta(1).re.clone() - &expected).abs();
        assert!(d.to_f64() < 1e-40);
        assert!(rc.beta(1).im.clone().abs().to_f64() < 1e-40);
    }

    #[test]
    fn monic_blows_up_at_h0_zero() {
        // h_0(pi) = 0, so p_1 does not exist there.
        let p = policy();
        let got = monic_op(1, &pi(p.bits), &p);
        assert!(matches!(got, Err(Error::NearSingular { index: 0, .. })));
    }

    #[test]
    fn dd_residual_small() {
        let p = PrecisionPolicy::new(512, 1e-30, 4096);
        let delta = Float::with_val(p.bits, 1e-10);
        let r = dd_residual(2, &Float::with_val(p.bits, 0.5), &p, &delta).unwrap();
        assert!(r.to_f64() < 1e-10, "residual {}", r.to_f64());
    }
}
