//! Conditional-mean estimation for the Poisson noise channel.
//!
//! The channel maps a nonnegative input `X` to a count `Y` with
//! `Y | X = x ~ Poisson(a x + lambda)`, where `a > 0` is the scaling factor
//! and `lambda >= 0` the dark current. This crate computes the output law,
//! the posterior moments `E[X^k | Y = y]` by several independent routes,
//! score functions and the Fisher-information/MMSE link, growth and tail
//! bounds, empirical-Bayes plug-in estimates, and diagnostics for when the
//! estimator is (close to) linear.
//!
//! Every analytic identity exposed here is also wired into an executable
//! residual check; see [`report`] for the identity suite the CLI runs.

pub mod analysis;
pub mod channel;
pub mod cli;
mod error;
pub mod estimator;
pub mod prior;
pub mod quad;
pub mod report;
pub mod score;
pub mod specfun;

pub use error::{Error, Result};

/// Scalar type used throughout the crate.
///
/// The accuracy contracts (residuals down to 1e-12) are stated for this
/// type; everything is written against the alias.
pub type Real = f64;

pub use channel::{ChannelParams, OutputPmf, PmfRoute};
pub use estimator::{EmpiricalCounts, EstimatorCurve, EstimatorRoute};
pub use prior::Prior;

/// 15 significant digits, lowercase scientific: the fixed on-disk number
/// format, chosen to round-trip f64 exactly enough for figure comparison.
pub fn fmt_sci(x: Real) -> String {
    format!("{x:.14e}")
}
