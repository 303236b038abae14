//! Real branches of the Lambert W function.

use crate::error::{Error, Result};
use crate::Real;

/// Which real branch of W to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WBranch {
    /// W_0, defined for x >= -1/e, with W_0(x) >= -1.
    Principal,
    /// W_{-1}, defined for -1/e <= x < 0, with W_{-1}(x) <= -1.
    NegativeOne,
}

const NEG_INV_E: Real = -0.367_879_441_171_442_33;

/// Solves w e^w = x on the requested branch by Halley iteration.
///
/// Initial guesses: the branch-point expansion in p = sqrt(2(e x + 1)) near
/// x = -1/e, log-based guesses elsewhere. Residual |w e^w - x| converges to
/// a few ulps; a monotone bisection fallback guards pathological starts.
pub fn lambert_w(branch: WBranch, x: Real) -> Result<Real> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("lambert_w needs finite x, got {x}")));
    }
    match branch {
        WBranch::Principal => {
            if x < NEG_INV_E {
                return Err(Error::Domain(format!(
                    "principal branch needs x >= -1/e, got {x}"
                )));
            }
        }
        WBranch::NegativeOne => {
            if !(NEG_INV_E..0.0).contains(&x) {
                return Err(Error::Domain(format!(
                    "negative branch needs -1/e <= x < 0, got {x}"
                )));
            }
        }
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // p^2 = 2(ex + 1) >= 0 up to rounding at the branch point.
    let p2 = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0);
    if p2 == 0.0 {
        return Ok(-1.0);
    }
    let p = p2.sqrt();

    let mut w = match branch {
        WBranch::Principal => {
            if x < -0.25 {
                -1.0 + p - p2 / 3.0 + 11.0 / 72.0 * p2 * p
            } else if x < 2.5 {
                x.ln_1p()
            } else {
                let l1 = x.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            }
        }
        WBranch::NegativeOne => {
            if x < -0.27 {
                -1.0 - p - p2 / 3.0 - 11.0 / 72.0 * p2 * p
            } else {
                let l = (-x).ln();
                l - (-l).ln()
            }
        }
    };

    let tol = 1e-14 * x.abs().max(1.0);
    let mut converged = false;
    for _ in 0..60 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= tol {
            converged = true;
            break;
        }
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() <= 1e-17 * (1.0 + w.abs()) {
            converged = true;
            break;
        }
    }

    if !converged || !w.is_finite() || branch_violated(branch, w) {
        w = bisect(branch, x);
    }
    Ok(w)
}

fn branch_violated(branch: WBranch, w: Real) -> bool {
    match branch {
        // Allow a hair of slack right at the branch point.
        WBranch::Principal => w < -1.0 - 1e-9,
        WBranch::NegativeOne => w > -1.0 + 1e-9,
    }
}

/// w e^w is monotone on each branch range, so bisection always lands.
fn bisect(branch: WBranch, x: Real) -> Real {
    let f = |w: Real| w * w.exp() - x;
    let (mut lo, mut hi) = match branch {
        WBranch::Principal => (-1.0, 1.0 + x.abs().max(1.0).ln() + x.abs()),
        WBranch::NegativeOne => (-750.0, -1.0),
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            // f increasing on [-1, inf) and decreasing on (-inf, -1].
            match branch {
                WBranch::Principal => lo = mid,
                WBranch::NegativeOne => hi = mid,
            }
        } else {
            match branch {
                WBranch::Principal => hi = mid,
                WBranch::NegativeOne => lo = mid,
            }
        }
    }
    0.5 * (lo + hi)
}

/// Logarithmic envelope for the negative branch: for 0 < x <= 1/e,
/// -W_{-1}(-x) <= 2 log(1/x), which is the value returned.
pub fn lambert_w_neg1_bound(x: Real) -> Result<Real> {
    if !(x > 0.0 && x <= -NEG_INV_E + 1e-16) {
        return Err(Error::Domain(format!(
            "bound defined on (0, 1/e], got {x}"
        )));
    }
    Ok(2.0 * (1.0 / x).ln())
}
