//! Precision contract and adaptive-precision evaluation shared by all modules.
//!
//! Every quantity in this crate is computed in MPFR arithmetic at an explicit
//! working precision. Real elementary operations are correctly rounded;
//! composite complex operations (multiplication, division, exp, sin, ...) are
//! built from fused or correctly-rounded parts and are accurate to at most a
//! couple of ulp per operation, which is what the downstream tolerances assume.

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::Float;
use std::fmt;

/// Working precision in bits plus the acceptance tolerance that governs
/// adaptive verification.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionPolicy {
    /// Mantissa precision for the first evaluation pass.
    pub bits: u32,
    /// Relative tolerance two consecutive passes must meet to accept a value.
    pub rel_tol: f64,
    /// Escalation cap for adaptive doubling.
    pub max_bits: u32,
}

impl PrecisionPolicy {
    /// A policy with explicit parameters.
    ///
    /// Requires `bits >= 64`, `max_bits >= bits` and `0 < rel_tol < 1`.
    pub fn new(bits: u32, rel_tol: f64, max_bits: u32) -> Self {
        assert!(bits >= 64, "working precision must be at least 64 bits");
        assert!(max_bits >= bits, "max_bits must be at least bits");
        assert!(rel_tol > 0.0 && rel_tol < 1.0, "rel_tol must be in (0,1)");
        PrecisionPolicy {
            bits,
            rel_tol,
            max_bits,
        }
    }

    /// The tolerance as a `Float` at the given precision.
    pub fn tol(&self, prec: u32) -> Float {
        Float::with_val(prec, self.rel_tol)
    }
}

impl Default for PrecisionPolicy {
    /// 256 working bits with escalation to 4096. Determinants of order n
    /// lose on the order of 2N^2*log2(omega) bits to cancellation, so the
    /// default keeps n <= 8 experiments cheap while escalation covers the
    /// worst cases.
    fn default() -> Self {
        PrecisionPolicy::new(256, 1e-30, 4096)
    }
}

/// A complex number with arbitrary-precision real and imaginary parts.
///
/// Both components always carry the same precision; arithmetic produces
/// results at the precision of the left operand.
#[derive(Debug, Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    /// Zero at the given precision.
    pub fn zero(prec: u32) -> Self {
        Complex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Complex {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    /// The imaginary unit at the given precision.
    pub fn i(prec: u32) -> Self {
        Complex {
            re: Float::new(prec),
            im: Float::with_val(prec, 1),
        }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    /// A purely real value.
    pub fn real(value: Float) -> Self {
        let prec = value.prec();
        Complex {
            re: value,
            im: Float::new(prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// The same value re-rounded to a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Complex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: (-&self.im).complete(self.prec()),
        }
    }

    pub fn neg(&self) -> Self {
        Complex {
            re: (-&self.re).complete(self.prec()),
            im: (-&self.im).complete(self.prec()),
        }
    }

    /// Multiplication by the imaginary unit: i*(a+bi) = -b + ai.
    pub fn mul_i(&self) -> Self {
        Complex {
            re: (-&self.im).complete(self.prec()),
            im: self.re.clone(),
        }
    }

    /// Division by the imaginary unit: (a+bi)/i = b - ai.
    pub fn div_i(&self) -> Self {
        Complex {
            re: self.im.clone(),
            im: (-&self.re).complete(self.prec()),
        }
    }

    pub fn add(&self, rhs: &Complex) -> Self {
        let p = self.prec();
        Complex {
            re: (&self.re + &rhs.re).complete(p),
            im: (&self.im + &rhs.im).complete(p),
        }
    }

    pub fn sub(&self, rhs: &Complex) -> Self {
        let p = self.prec();
        Complex {
            re: (&self.re - &rhs.re).complete(p),
            im: (&self.im - &rhs.im).complete(p),
        }
    }

    /// Fused complex product: each component is a single correctly-rounded
    /// `a*b +/- c*d`.
    pub fn mul(&self, rhs: &Complex) -> Self {
        let re = self.re.clone().mul_sub_mul(&rhs.re, &self.im, &rhs.im);
        let im = self.re.clone().mul_add_mul(&rhs.im, &self.im, &rhs.re);
        Complex { re, im }
    }

    /// Scale by a real factor.
    pub fn scale(&self, factor: &Float) -> Self {
        let p = self.prec();
        Complex {
            re: (&self.re * factor).complete(p),
            im: (&self.im * factor).complete(p),
        }
    }

    pub fn scale_i64(&self, factor: i64) -> Self {
        let p = self.prec();
        Complex {
            re: (&self.re * factor).complete(p),
            im: (&self.im * factor).complete(p),
        }
    }

    pub fn div(&self, rhs: &Complex) -> Self {
        let denom = rhs.re.clone().mul_add_mul(&rhs.re, &rhs.im, &rhs.im);
        let num_re = self.re.clone().mul_add_mul(&rhs.re, &self.im, &rhs.im);
        let num_im = self.im.clone().mul_sub_mul(&rhs.re, &self.re, &rhs.im);
        Complex {
            re: num_re / &denom,
            im: num_im / &denom,
        }
    }

    pub fn recip(&self) -> Self {
        Complex::one(self.prec()).div(self)
    }

    /// |z|, computed as a correctly rounded hypot.
    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    /// |z|^2 as a single fused operation.
    pub fn norm_sqr(&self) -> Float {
        self.re.clone().mul_add_mul(&self.re, &self.im, &self.im)
    }

    /// Principal argument.
    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    /// exp(a+bi) = e^a (cos b + i sin b).
    pub fn exp(&self) -> Self {
        let p = self.prec();
        let ea = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Complex {
            re: (&ea * &c).complete(p),
            im: (&ea * &s).complete(p),
        }
    }

    /// sin(a+bi) = sin a cosh b + i cos a sinh b.
    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        Complex {
            re: (&s * &ch).complete(p),
            im: (&c * &sh).complete(p),
        }
    }

    /// cos(a+bi) = cos a cosh b - i sin a sinh b.
    pub fn cos(&self) -> Self {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        Complex {
            re: (&c * &ch).complete(p),
            im: -(&s * &sh).complete(p),
        }
    }

    /// Principal logarithm: ln|z| + i arg z.
    pub fn ln(&self) -> Self {
        Complex {
            re: self.abs().ln(),
            im: self.arg(),
        }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.im.is_zero() {
            if self.re.is_sign_negative() && !self.re.is_zero() {
                let r = (-&self.re).complete(p).sqrt();
                return Complex {
                    re: Float::new(p),
                    im: r,
                };
            }
            return Complex {
                re: self.re.clone().sqrt(),
                im: Float::new(p),
            };
        }
        // sqrt(z) = sqrt((|z|+re)/2) + i sign(im) sqrt((|z|-re)/2)
        let r = self.abs();
        let half = Float::with_val(p, 0.5);
        let re = (((&r + &self.re).complete(p)) * &half).sqrt();
        let mut im = (((&r - &self.re).complete(p)) * &half).sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        Complex { re, im }
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Complex::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

/// pi at the given precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Relative distance |a-b| / max(|a|,|b|); zero if both vanish.
pub fn rel_diff(a: &Complex, b: &Complex) -> Float {
    let p = a.prec().max(b.prec());
    let d = a.with_prec(p).sub(&b.with_prec(p)).abs();
    let sa = a.abs();
    let sb = b.abs();
    let scale = if sa > sb { sa } else { sb };
    if scale.is_zero() {
        return Float::new(p);
    }
    d / Float::with_val(p, scale)
}

/// `true` when a and b agree to `tol` relatively (or are both zero).
pub fn rel_close(a: &Complex, b: &Complex, tol: &Float) -> bool {
    rel_diff(a, b) <= *tol
}

/// Evaluate a precision-parameterized computation adaptively.
///
/// Runs `f` at `policy.bits` and twice that, accepting the higher-precision
/// result once two consecutive precisions agree to `rel_tol` under the
/// supplied comparator; otherwise keeps doubling up to `max_bits`.
pub fn adaptive_eval_with<F, A>(f: F, policy: &PrecisionPolicy, agree: A) -> Result<Complex>
where
    F: Fn(u32) -> Result<Complex>,
    A: Fn(&Complex, &Complex) -> bool,
{
    let mut lo = f(policy.bits)?;
    let mut hi_bits = (2 * policy.bits).min(policy.max_bits);
    loop {
        let hi = f(hi_bits)?;
        if agree(&lo, &hi) {
            return Ok(hi);
        }
        if hi_bits >= policy.max_bits {
            return Err(Error::PrecisionExhausted {
                max_bits: policy.max_bits,
                disagreement: rel_diff(&lo, &hi).to_f64(),
            });
        }
        lo = hi;
        hi_bits = (2 * hi_bits).min(policy.max_bits);
    }
}

/// Adaptive evaluation with the plain relative-difference comparator.
pub fn adaptive_eval<F>(f: F, policy: &PrecisionPolicy) -> Result<Complex>
where
    F: Fn(u32) -> Result<Complex>,
{
    let tol = Float::with_val(64, policy.rel_tol);
    adaptive_eval_with(f, policy, |a, b| rel_close(a, b, &tol))
}
