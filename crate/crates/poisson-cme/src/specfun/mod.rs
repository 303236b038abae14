//! Self-contained special-function kernel.
//!
//! Everything the closed-form estimator formulas need: log-gamma machinery,
//! incomplete gamma (plus a cancellation-free interval form), digamma, both
//! real branches of Lambert W, Touchard polynomials, and modified Bessel K
//! of real order. All functions are pure.

mod bessel;
mod gamma;
mod lambert;
mod touchard;

pub use bessel::bessel_k;
pub use gamma::{
    digamma, gamma_p, gamma_q, ln_binomial, ln_factorial, ln_gamma_interval, log_gamma,
    upper_incomplete_gamma,
};
pub use lambert::{lambert_w, lambert_w_neg1_bound, WBranch};
pub use touchard::{touchard, TOUCHARD_MAX_N};
