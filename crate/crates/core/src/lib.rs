//! Polynomials orthogonal with respect to the complex oscillatory weight
//! e^{i omega x} on [-1,1] ("kissing polynomials"), computed in multiprecision
//! arithmetic.
//!
//! The crate is organised around the Hankel determinants h_n of the moment
//! sequence mu_n(omega) = int_{-1}^1 x^n e^{i omega x} dx:
//!
//! - [`moments`] evaluates the moments and their omega-derivatives,
//! - [`hankel`] builds Hankel matrices, determinants, derivatives and the
//!   Toda-lattice identity,
//! - [`orthopoly`] constructs the monic polynomials p_n, the always-existing
//!   rescaling p~_n = h_{n-1} p_n and the recurrence coefficients,
//! - [`roots`] finds polynomial roots, tracks root trajectories in omega and
//!   locates real and complex zeros of the Hankel determinants,
//! - [`asymptotics`] provides the closed-form predictions: superfactorial
//!   leading orders, Laguerre endpoint behaviour, onion-peel Lambert-W zero
//!   formulas and the Pascal-matrix determinant oracles,
//! - [`oracle`] cross-validates everything against brute-force tensor
//!   quadrature of the Heine multivariate integrals,
//! - [`verify`] packages the acceptance checks consumed by the test suite and
//!   the CLI.

pub mod asymptotics;
pub mod closedforms;
pub mod error;
pub mod hankel;
pub mod moments;
pub mod numerics;
pub mod oracle;
pub mod orthopoly;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{adaptive_eval, adaptive_eval_with, Complex, PrecisionPolicy};
