//! Arc length of the Hardy `Z(t)`-curve.
//!
//! * [`riemann`]: Riemann–Siegel main sums for `Z` and `Z'`, zeros and
//!   extrema, and the numeric arc length over a window.
//! * [`stochastic`]: the random-phase model of `Z'` and its arc-length
//!   process, with Monte Carlo moments and central-limit diagnostics.
//! * [`special`]: digamma, `I₀`, `K₀`, `K₁`, the Gaussian integral `F(β)`
//!   and the closed-form statistical arc length.
//! * [`quad`]: adaptive Gauss–Kronrod quadrature shared by all of the above.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep all published digits.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod quad;
pub mod riemann;
pub mod special;
pub mod stochastic;

pub use error::{Error, Result};

/// Crate version, stamped into cached results and output records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
