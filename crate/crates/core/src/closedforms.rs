//! Exact terminating expressions for the first few Hankel determinants and
//! their small-omega Taylor coefficients.
//!
//! These are the independent reference values the determinant pipeline is
//! verified against: h_0..h_3 admit finite expansions in negative powers of
//! omega with trigonometric coefficients, valid for all omega > 0.

use rug::ops::Pow;
use rug::Float;

/// h_0(omega) = 2 sin(omega)/omega.
pub fn h0(omega: &Float) -> Float {
    let s = omega.clone().sin();
    s * 2u32 / omega
}

/// h_1(omega) = 4/omega^2 + 2(cos 2omega - 1)/omega^4.
pub fn h1(omega: &Float) -> Float {
    let p = omega.prec();
    let c2 = (omega.clone() * 2u32).cos();
    let t1 = Float::with_val(p, 4) / omega.clone().pow(2);
    let t2 = (c2 - 1u32) * 2u32 / omega.clone().pow(4);
    t1 + t2
}

/// h_2(omega) = -32 sin/w^5 - 64 cos/w^6 + 96 sin/w^7 - 32 sin^3/w^9.
pub fn h2(omega: &Float) -> Float {
    let s = omega.clone().sin();
    let c = omega.clone().cos();
    let s3 = s.clone().pow(3);
    let mut acc = s.clone() * -32i32 / omega.clone().pow(5);
    acc += c * -64i32 / omega.clone().pow(6);
    acc += s * 96i32 / omega.clone().pow(7);
    acc += s3 * -32i32 / omega.clone().pow(9);
    acc
}

/// h_3(omega), the seven-term terminating expansion.
pub fn h3(omega: &Float) -> Float {
    let p = omega.prec();
    let c2 = (omega.clone() * 2u32).cos();
    let s2 = (omega.clone() * 2u32).sin();
    let mut acc = Float::with_val(p, 256) / omega.clone().pow(8);
    acc += (c2.clone() - 4u32) * 512i32 / omega.clone().pow(10);
    acc += s2.clone() * -3072i32 / omega.clone().pow(11);
    acc += (c2.clone() * 11u32 - 2u32) * -768i32 / omega.clone().pow(12);
    acc += s2 * 9216i32 / omega.clone().pow(13);
    acc += (c2.clone() - 1u32) * 6912i32 / omega.clone().pow(14);
    acc += (c2 - 1u32).pow(2) * 576i32 / omega.clone().pow(16);
    acc
}

/// The terminating expansion of h_n for n <= 3, as a single dispatch.
pub fn hn(n: usize, omega: &Float) -> Option<Float> {
    match n {
        0 => Some(h0(omega)),
        1 => Some(h1(omega)),
        2 => Some(h2(omega)),
        3 => Some(h3(omega)),
        _ => None,
    }
}

/// Two-term Taylor expansions around omega = 0: (constant, omega^2 coefficient)
/// for h_0..h_3, as exact rationals evaluated at the given precision.
pub fn small_omega_taylor(n: usize, prec: u32) -> Option<(Float, Float)> {
    let frac = |num: i64, den: i64| Float::with_val(prec, num) / Float::with_val(prec, den);
    match n {
        0 => Some((frac(2, 1), frac(-1, 3))),
        1 => Some((frac(4, 3), frac(-8, 45))),
        2 => Some((frac(32, 135), frac(-16, 525))),
        3 => Some((frac(256, 23625), frac(-2048, 1488375))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h1_at_one() {
        // 4 + 2(cos 2 - 1) = 1.1677063...
        let w = Float::with_val(256, 1);
        let v = h1(&w);
        assert!((v.to_f64() - 1.1677063269057152).abs() < 1e-14);
    }

    #[test]
    fn taylor_matches_closed_form_near_zero() {
        let prec = 512;
        let w = Float::with_val(prec, 1e-4);
        for n in 0..=3usize {
            let exact = hn(n, &w).unwrap();
            let (c0, c2) = small_omega_taylor(n, prec).unwrap();
            let approx = c0 + c2 * w.clone().square();
            let rel = ((exact.clone() - &approx) / exact).abs();
            assert!(rel.to_f64() < 1e-12, "n={}", n);
        }
    }
}
