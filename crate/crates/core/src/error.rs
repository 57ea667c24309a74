//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the computational kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Adaptive evaluation reached the precision cap without two consecutive
    /// working precisions agreeing. Usually a sign of catastrophic
    /// cancellation, e.g. a Hankel determinant evaluated close to one of its
    /// zeros without an absolute-scale floor.
    #[error("precision exhausted at {max_bits} bits (relative disagreement {disagreement:e})")]
    PrecisionExhausted { max_bits: u32, disagreement: f64 },

    /// Two independent computation routes disagreed where both are trusted.
    #[error("cross-check failed for {what}: relative disagreement {disagreement:e}")]
    CrossCheckFailed {
        what: &'static str,
        disagreement: f64,
    },

    /// The imaginary part of a quantity that must be real (for real omega)
    /// exceeded tolerance, signalling insufficient working precision.
    #[error("reality check failed: |Im|/scale = {ratio:e}")]
    RealityCheckFailed { ratio: f64 },

    /// A moment index outside the computed range was requested.
    #[error("moment index {index} out of range (have 0..={max})")]
    IndexOutOfRange { index: usize, max: usize },

    /// A Hankel determinant is zero within the degeneracy threshold, so the
    /// requested monic polynomial does not exist at this omega.
    #[error("near-singular Hankel determinant h_{index} (|h| = {magnitude:e} vs threshold {threshold:e})")]
    NearSingular {
        index: i64,
        magnitude: f64,
        threshold: f64,
    },

    /// An intermediate Hankel determinant in a product chain vanishes.
    #[error("singular chain: h_{index} vanishes within tolerance")]
    SingularChain { index: i64 },

    /// An iteration failed to converge within its cap.
    #[error("no convergence in {what} after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: u32 },

    /// A tensor-product quadrature would exceed the configured node budget.
    #[error("cost cap exceeded: {nodes} nodes requested, budget {budget}")]
    CostCapExceeded { nodes: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
