//! Score functions of the output pmf, Fisher information, MMSE, and the
//! identity linking the two.
//!
//! The score is defined through the channel-parameter gradient of the
//! log-pmf: rho_po(y) = -(a d/da + lambda d/dlambda) log P_Y(y). By the
//! pmf difference identities this equals the forward difference
//! ((y+1) P(y+1) - y P(y)) / P(y), which is exactly E[aX+lambda | Y=y] - y,
//! so the Tweedie-style formula E[U | Y=y] = y + rho_po(y) holds verbatim.
//! The per-parameter components are the log-derivatives themselves:
//! rho_dc = d log P / d lambda = -rho_bwd, and
//! rho_scale = d log P / d a = -(rho_po + lambda rho_dc) / a.

use crate::channel::{pmf_point, ChannelParams, OutputPmf, PmfRoute};
use crate::error::{Error, Result};
use crate::prior::Prior;
use crate::quad::kahan_sum;
use crate::Real;
use serde::Serialize;

/// All score variants at one output value.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScoreValues {
    pub y: u64,
    /// Negative inner product of (a, lambda) with the log-pmf gradient;
    /// satisfies E[aX + lambda | Y=y] = y + rho_po.
    pub rho_po: Real,
    /// d log P_Y(y) / d a.
    pub rho_scale: Real,
    /// d log P_Y(y) / d lambda.
    pub rho_dc: Real,
    /// Forward difference of y P(y), over P(y).
    pub rho_fwd: Real,
    /// Backward difference of P(y), over P(y).
    pub rho_bwd: Real,
}

/// Scores from a tabulated pmf. Needs y + 1 within the table; the backward
/// difference at y = 0 uses P(-1) = 0.
pub fn score(pmf: &OutputPmf, y: u64) -> Result<ScoreValues> {
    let p0 = pmf.prob(y)?;
    let p_next = pmf.prob(y + 1)?;
    if p0 <= 0.0 {
        return Err(Error::ZeroProbability(format!("P[Y = {y}] vanishes")));
    }
    let p_prev = if y == 0 { 0.0 } else { pmf.prob(y - 1)? };
    let yf = y as Real;
    let rho_fwd = ((yf + 1.0) * p_next - yf * p0) / p0;
    let rho_bwd = (p0 - p_prev) / p0;
    let rho_po = rho_fwd;
    let rho_dc = -rho_bwd;
    let rho_scale = -(rho_po + pmf.params.lambda * rho_dc) / pmf.params.a;
    Ok(ScoreValues {
        y,
        rho_po,
        rho_scale,
        rho_dc,
        rho_fwd,
        rho_bwd,
    })
}

/// The three discrete score definitions from the empirical-Bayes literature,
/// for a count variable with the given mean E[U] = a E[X] + lambda.
///
/// They tie back to [`score`] by rho_dc = rho_k = (rho_jg + 1)/(y E[U]) and
/// rho_po = E[U] rho_khj + E[U] - y.
pub fn alt_scores(pmf: &OutputPmf, mean_u: Real, y: u64) -> Result<(Real, Real, Real)> {
    let p0 = pmf.prob(y)?;
    let p_next = pmf.prob(y + 1)?;
    if p0 <= 0.0 {
        return Err(Error::ZeroProbability(format!("P[Y = {y}] vanishes")));
    }
    if !mean_u.is_finite() {
        return Err(Error::MomentUndefined("alt scores need a finite E[U]".into()));
    }
    let p_prev = if y == 0 { 0.0 } else { pmf.prob(y - 1)? };
    let yf = y as Real;
    let rho_k = (p_prev - p0) / p0;
    let rho_khj = (yf + 1.0) * p_next / (mean_u * p0) - 1.0;
    let rho_jg = yf * mean_u * (p_prev - p0) / p0 - 1.0;
    Ok((rho_k, rho_khj, rho_jg))
}

/// Fisher information J = E[rho_po(Y)^2] over a tabulated pmf.
pub fn fisher_info(pmf: &OutputPmf) -> Result<Real> {
    if pmf.tail_bound >= 1e-10 {
        return Err(Error::Truncation(format!(
            "fisher_info needs tail below 1e-10, pmf has {}",
            pmf.tail_bound
        )));
    }
    let mut terms = Vec::with_capacity(pmf.probs.len());
    for y in 0..pmf.y_max() {
        let p = pmf.prob(y)?;
        if p <= 0.0 {
            continue;
        }
        let s = score(pmf, y)?;
        terms.push(p * s.rho_po * s.rho_po);
    }
    Ok(kahan_sum(terms))
}

/// Fisher information with self-managed truncation: the sum extends until
/// the summand stays below 1e-14 well past the mean count.
pub fn fisher_info_auto(prior: &Prior, params: &ChannelParams) -> Result<Real> {
    let mean_count = params.mean_count(prior)?;
    let mut terms = Vec::new();
    let mut p_cur = pmf_point(prior, params, 0, PmfRoute::Mixture)?;
    let mut y = 0u64;
    let mut quiet = 0u32;
    loop {
        let p_next = pmf_point(prior, params, y + 1, PmfRoute::Mixture)?;
        if p_cur > 0.0 {
            let yf = y as Real;
            let rho = ((yf + 1.0) * p_next - yf * p_cur) / p_cur;
            let term = p_cur * rho * rho;
            terms.push(term);
            if yf > mean_count {
                quiet = if term < 1e-14 { quiet + 1 } else { 0 };
                if quiet >= 5 {
                    break;
                }
            }
        } else if y as Real > mean_count {
            break;
        }
        y += 1;
        p_cur = p_next;
        if y > 100_000 {
            return Err(Error::Numeric("fisher information sum did not settle".into()));
        }
    }
    Ok(kahan_sum(terms))
}

/// Minimum mean squared error E[(X - E[X|Y])^2], summed as the expected
/// conditional variance over the output law.
pub fn mmse(prior: &Prior, params: &ChannelParams) -> Result<Real> {
    prior.second_moment()?; // moment precondition
    let mean_count = params.mean_count(prior)?;
    let a2 = params.a * params.a;
    let mut terms = Vec::new();
    let mut p0 = pmf_point(prior, params, 0, PmfRoute::Mixture)?;
    let mut p1 = pmf_point(prior, params, 1, PmfRoute::Mixture)?;
    let mut y = 0u64;
    let mut quiet = 0u32;
    let mut acc_hint = 0.0;
    loop {
        let p2 = pmf_point(prior, params, y + 2, PmfRoute::Mixture)?;
        if p0 > 0.0 && p1 > 0.0 {
            let yf = y as Real;
            let m0 = (yf + 1.0) * p1 / p0;
            let m1 = (yf + 2.0) * p2 / p1;
            let var_u = (m0 * (m1 - m0)).max(0.0);
            let term = p0 * var_u / a2;
            terms.push(term);
            acc_hint += term;
            if yf > mean_count {
                quiet = if term < 1e-15 * (1.0 + acc_hint) { quiet + 1 } else { 0 };
                if quiet >= 5 {
                    break;
                }
            }
        } else if y as Real > mean_count {
            break;
        }
        y += 1;
        p0 = p1;
        p1 = p2;
        if y > 100_000 {
            return Err(Error::Numeric("mmse sum did not settle".into()));
        }
    }
    Ok(kahan_sum(terms))
}

/// Absolute residual of mmse = (a E[X] + lambda - J) / a^2.
pub fn brown_residual(prior: &Prior, params: &ChannelParams) -> Result<Real> {
    let mmse_val = mmse(prior, params)?;
    let j = fisher_info_auto(prior, params)?;
    let rhs = (params.mean_count(prior)? - j) / (params.a * params.a);
    Ok((mmse_val - rhs).abs())
}
