//! Touchard (exponential) polynomials.

use crate::error::{Error, Result};
use crate::Real;

/// Largest supported polynomial index; binomial weights stay exactly
/// representable well past this, but magnitudes explode combinatorially.
pub const TOUCHARD_MAX_N: usize = 60;

/// Touchard polynomial T_n(x) by the binomial recurrence
/// T_{n+1}(x) = x * sum_k C(n, k) T_k(x), with T_0 = 1.
///
/// At x = 1 these are the Bell numbers.
pub fn touchard(n: usize, x: Real) -> Result<Real> {
    if n > TOUCHARD_MAX_N {
        return Err(Error::Domain(format!(
            "touchard supports n <= {TOUCHARD_MAX_N}, got {n}"
        )));
    }
    let mut values: Vec<Real> = Vec::with_capacity(n + 1);
    values.push(1.0);
    for m in 0..n {
        // Row of binomials C(m, k) built multiplicatively.
        let mut binom = 1.0;
        let mut acc = 0.0;
        for (k, t) in values.iter().enumerate() {
            if k > 0 {
                binom *= (m - k + 1) as Real / k as Real;
            }
            acc += binom * t;
        }
        let next = x * acc;
        if !next.is_finite() || next.abs() > 1e300 {
            return Err(Error::Overflow(format!(
                "touchard({}, {x}) exceeds representable range",
                m + 1
            )));
        }
        values.push(next);
    }
    Ok(values[n])
}
