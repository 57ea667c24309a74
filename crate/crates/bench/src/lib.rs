//! Shared fixtures for the criterion benchmarks.

use kisspoly::numerics::PrecisionPolicy;
use rug::Float;

/// The default policy every benchmark runs under.
pub fn bench_policy() -> PrecisionPolicy {
    PrecisionPolicy::default()
}

/// A benchmark omega at working precision.
pub fn omega(policy: &PrecisionPolicy, value: f64) -> Float {
    Float::with_val(policy.bits, value)
}
