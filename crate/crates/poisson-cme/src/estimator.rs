//! Posterior moments E[X^k | Y = y] by independent computation routes, and
//! the empirical-Bayes plug-in estimator.
//!
//! The direct route integrates the defining Bayes ratio and serves as the
//! oracle; the others (output-pmf ratio, Laplace-derivative representation,
//! per-family closed forms, moment-product identity) must agree with it
//! wherever they are defined.

use crate::channel::{pmf_point, weighted_moments, ChannelParams, OutputPmf, PmfRoute};
use crate::error::{Error, Result};
use crate::prior::Prior;
use crate::specfun::{bessel_k, ln_factorial, ln_gamma_interval, touchard};
use crate::Real;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Computation route of an estimator value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorRoute {
    /// Bayes ratio E[x^k lik] / E[lik] by summation/quadrature (the oracle).
    Direct,
    /// Output-pmf ratio (y+1) P(y+1) / P(y), shifted and scaled.
    Tgr,
    /// Ratio of Laplace-transform derivatives of the prior.
    Laplace,
    /// Family-specific closed form, zero dark current only.
    ClosedForm,
    /// Product of first conditional moments at successive outputs.
    Product,
    /// Plug-in ratio of empirical counts.
    Empirical,
}

/// Evidence floor: below this the conditioning event is numerically void.
const EVIDENCE_FLOOR: Real = 1e-300;

/// E[X | Y = y] from the defining ratio of prior integrals.
pub fn posterior_mean_direct(prior: &Prior, params: &ChannelParams, y: u64) -> Result<Real> {
    let m = weighted_moments(prior, params, y, 1)?;
    if m[0] < EVIDENCE_FLOOR {
        return Err(Error::ZeroProbability(format!(
            "evidence P[Y = {y}] below {EVIDENCE_FLOOR:e}"
        )));
    }
    Ok(m[1] / m[0])
}

/// E[X^k | Y = y] by the same direct integrals, k small.
pub fn posterior_moment_direct(
    prior: &Prior,
    params: &ChannelParams,
    y: u64,
    k: u32,
) -> Result<Real> {
    let m = weighted_moments(prior, params, y, k)?;
    if m[0] < EVIDENCE_FLOOR {
        return Err(Error::ZeroProbability(format!(
            "evidence P[Y = {y}] below {EVIDENCE_FLOOR:e}"
        )));
    }
    Ok(m[k as usize] / m[0])
}

/// E[X | Y = y] from a tabulated output pmf:
/// ((y+1) P(y+1) / P(y) - lambda) / a.
pub fn posterior_mean_tgr(pmf: &OutputPmf, y: u64) -> Result<Real> {
    let p0 = pmf.prob(y)?;
    let p1 = pmf.prob(y + 1)?;
    if p0 < EVIDENCE_FLOOR {
        return Err(Error::ZeroProbability(format!(
            "P[Y = {y}] vanishes; ratio undefined"
        )));
    }
    Ok(((y + 1) as Real * p1 / p0 - pmf.params.lambda) / pmf.params.a)
}

/// E[U | Y = y] for U = aX + lambda, from freshly computed pmf points.
fn posterior_mean_u(prior: &Prior, params: &ChannelParams, y: u64) -> Result<Real> {
    let p0 = pmf_point(prior, params, y, PmfRoute::Mixture)?;
    let p1 = pmf_point(prior, params, y + 1, PmfRoute::Mixture)?;
    if p0 < EVIDENCE_FLOOR {
        return Err(Error::ZeroProbability(format!(
            "P[Y = {y}] vanishes; ratio undefined"
        )));
    }
    Ok((y + 1) as Real * p1 / p0)
}

/// k-th conditional moment of U = aX + lambda:
/// E[U^k | Y = y] = ((y+k)! / y!) P(y+k) / P(y).
pub fn posterior_moment(prior: &Prior, params: &ChannelParams, y: u64, k: u32) -> Result<Real> {
    if k == 0 {
        return Ok(1.0);
    }
    let p0 = pmf_point(prior, params, y, PmfRoute::Mixture)?;
    let pk = pmf_point(prior, params, y + k as u64, PmfRoute::Mixture)?;
    if p0 < EVIDENCE_FLOOR {
        return Err(Error::ZeroProbability(format!(
            "P[Y = {y}] vanishes; ratio undefined"
        )));
    }
    let ln_ratio = ln_factorial(y + k as u64) - ln_factorial(y) + pk.ln() - p0.ln();
    Ok(ln_ratio.exp())
}

/// Same moment from the product of first moments at y, y+1, .., y+k-1.
pub fn posterior_moment_product(
    prior: &Prior,
    params: &ChannelParams,
    y: u64,
    k: u32,
) -> Result<Real> {
    let mut acc = 1.0;
    for i in 0..k as u64 {
        acc *= posterior_mean_u(prior, params, y + i)?;
    }
    Ok(acc)
}

/// Conditional variance of U = aX + lambda:
/// V(U | Y = y) = E[U | Y = y] (E[U | Y = y+1] - E[U | Y = y]).
pub fn posterior_variance(prior: &Prior, params: &ChannelParams, y: u64) -> Result<Real> {
    let m0 = posterior_mean_u(prior, params, y)?;
    let m1 = posterior_mean_u(prior, params, y + 1)?;
    Ok((m0 * (m1 - m0)).max(0.0))
}

/// E[X | Y = y] as a ratio of Laplace-transform derivatives of the prior.
pub fn posterior_mean_laplace(prior: &Prior, params: &ChannelParams, y: u64) -> Result<Real> {
    let a = params.a;
    let lambda = params.lambda;
    if lambda == 0.0 {
        let ln_num = prior.ln_abs_laplace_deriv(y as u32 + 1, a)?;
        let ln_den = prior.ln_abs_laplace_deriv(y as u32, a)?;
        if ln_den == Real::NEG_INFINITY {
            return Err(Error::ZeroProbability(format!(
                "Laplace derivative of order {y} vanishes"
            )));
        }
        return Ok((ln_num - ln_den).exp());
    }
    // Both binomial sums are single-signed, so log-scaled addition is exact.
    let ln_sum = |order: u64| -> Result<Real> {
        let mut terms = Vec::with_capacity(order as usize + 1);
        for i in 0..=order {
            let ln_l = prior.ln_abs_laplace_deriv((order - i) as u32, a)?;
            terms.push(
                crate::specfun::ln_binomial(order, i)
                    + (order - i) as Real * a.ln()
                    + i as Real * lambda.ln()
                    + ln_l,
            );
        }
        Ok(crate::quad::log_sum_exp(&terms))
    };
    let ln_num = ln_sum(y + 1)?;
    let ln_den = ln_sum(y)?;
    if ln_den == Real::NEG_INFINITY {
        return Err(Error::ZeroProbability(format!(
            "Laplace representation denominator vanishes at y = {y}"
        )));
    }
    Ok((ln_num - ln_den).exp() / a - lambda / a)
}

/// Closed-form E[X | Y = y] for zero dark current, per supported family.
pub fn closed_form_mean(prior: &Prior, a: Real, y: u64) -> Result<Real> {
    let yf = y as Real;
    match prior {
        Prior::Gamma { rate, shape } => Ok((yf + shape) / (rate + a)),
        Prior::InverseGamma { shape, scale } => {
            let nu_hi = shape - (yf + 1.0);
            let nu_lo = shape - yf;
            if nu_hi.abs() > 50.0 || nu_lo.abs() > 50.0 {
                return Err(Error::UnsupportedOrder(format!(
                    "inverse gamma closed form needs Bessel orders within +-50, y = {y}"
                )));
            }
            let arg = (4.0 * scale * a).sqrt();
            Ok((scale / a).sqrt() * bessel_k(nu_hi, arg)? / bessel_k(nu_lo, arg)?)
        }
        Prior::Uniform { lower, upper } => {
            let num = ln_gamma_interval(yf + 2.0, lower * a, upper * a)?;
            let den = ln_gamma_interval(yf + 1.0, lower * a, upper * a)?;
            Ok((num - den).exp() / a)
        }
        Prior::Bernoulli { p } => {
            if y == 0 {
                let w = p * (-a).exp();
                Ok(w / ((1.0 - p) + w))
            } else {
                Ok(1.0)
            }
        }
        Prior::Poisson { mean } => {
            // Ratio of Touchard polynomials at mean * e^{-a}.
            let arg = mean * (-a).exp();
            let num = touchard(y as usize + 1, arg)?;
            let den = touchard(y as usize, arg)?;
            Ok(num / den)
        }
        _ => Err(Error::UnsupportedFamily(format!(
            "no closed-form estimator for {prior:?}"
        ))),
    }
}

/// Observed output counts N_y.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmpiricalCounts {
    pub counts: BTreeMap<u64, u64>,
    pub n_total: u64,
}

impl EmpiricalCounts {
    pub fn from_counts(counts: BTreeMap<u64, u64>) -> Result<Self> {
        let n_total: u64 = counts.values().sum();
        if n_total == 0 {
            return Err(Error::Config("empirical counts are empty".into()));
        }
        Ok(EmpiricalCounts { counts, n_total })
    }

    pub fn from_outputs<I: IntoIterator<Item = u64>>(ys: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for y in ys {
            *counts.entry(y).or_insert(0) += 1;
        }
        Self::from_counts(counts)
    }

    pub fn count(&self, y: u64) -> u64 {
        self.counts.get(&y).copied().unwrap_or(0)
    }

    /// Parses `y,count` rows (header optional) or one raw output per line.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut raw = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if lineno == 0 && (line.eq_ignore_ascii_case("y,count") || line.eq_ignore_ascii_case("y"))
            {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse = |s: &str| -> Result<u64> {
                // Tolerate float-formatted integers from external tools.
                if let Ok(v) = s.parse::<u64>() {
                    return Ok(v);
                }
                let f: f64 = s
                    .parse()
                    .map_err(|_| Error::Config(format!("line {}: bad integer '{s}'", lineno + 1)))?;
                if f < 0.0 || f.fract() != 0.0 {
                    return Err(Error::Config(format!(
                        "line {}: expected a nonnegative integer, got '{s}'",
                        lineno + 1
                    )));
                }
                Ok(f as u64)
            };
            match fields.len() {
                1 => raw.push(parse(fields[0])?),
                2 => {
                    let y = parse(fields[0])?;
                    let c = parse(fields[1])?;
                    *counts.entry(y).or_insert(0) += c;
                }
                n => {
                    return Err(Error::Config(format!(
                        "line {}: expected 1 or 2 fields, got {n}",
                        lineno + 1
                    )))
                }
            }
        }
        if !counts.is_empty() && !raw.is_empty() {
            return Err(Error::Config(
                "mixed count rows and raw-value rows in one file".into(),
            ));
        }
        if !raw.is_empty() {
            return Self::from_outputs(raw);
        }
        Self::from_counts(counts)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,count\n");
        for (y, c) in &self.counts {
            out.push_str(&format!("{y},{c}\n"));
        }
        out
    }
}

/// Robbins plug-in: ((y+1) N_{y+1} / N_y - lambda) / a.
///
/// No smoothing; for small counts the value can drop below zero (the caller
/// decides how to flag that).
pub fn empirical_bayes_mean(
    counts: &EmpiricalCounts,
    params: &ChannelParams,
    y: u64,
) -> Result<Real> {
    let n_y = counts.count(y);
    if n_y == 0 {
        return Err(Error::NoObservations(y));
    }
    let n_next = counts.count(y + 1) as Real;
    Ok(((y + 1) as Real * n_next / n_y as Real - params.lambda) / params.a)
}

/// A tabulated estimator curve y -> E[X^k | Y = y].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimatorCurve {
    pub k: u32,
    pub route: EstimatorRoute,
    pub params: ChannelParams,
    pub values: Vec<Real>,
}

impl EstimatorCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,value\n");
        for (y, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{y},{}\n", crate::fmt_sci(*v)));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Converts conditional U-moments into the X-moment of order k.
fn u_moments_to_x_moment(
    u_moments: &[Real], // E[U^j | y] for j = 0..=k
    params: &ChannelParams,
    k: u32,
) -> Real {
    if params.lambda == 0.0 {
        return u_moments[k as usize] / params.a.powi(k as i32);
    }
    // X = (U - lambda)/a; binomial expansion of the power.
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        if j > 0 {
            binom *= (k - j + 1) as Real / j as Real;
        }
        let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += binom * sign * params.lambda.powi((k - j) as i32) * u_moments[j as usize];
    }
    acc / params.a.powi(k as i32)
}

/// Builds the curve over y = 0..=y_max with the chosen route.
pub fn estimator_curve(
    prior: &Prior,
    params: &ChannelParams,
    k: u32,
    route: EstimatorRoute,
    y_max: u64,
) -> Result<EstimatorCurve> {
    if k == 0 {
        return Err(Error::Config("moment order k must be >= 1".into()));
    }
    let mut values = Vec::with_capacity(y_max as usize + 1);
    match route {
        EstimatorRoute::Direct => {
            for y in 0..=y_max {
                values.push(posterior_moment_direct(prior, params, y, k)?);
            }
        }
        EstimatorRoute::Tgr | EstimatorRoute::Product => {
            for y in 0..=y_max {
                let mut u_moments = Vec::with_capacity(k as usize + 1);
                for j in 0..=k {
                    let m = match route {
                        EstimatorRoute::Tgr => posterior_moment(prior, params, y, j)?,
                        _ => posterior_moment_product(prior, params, y, j)?,
                    };
                    u_moments.push(m);
                }
                values.push(u_moments_to_x_moment(&u_moments, params, k));
            }
        }
        EstimatorRoute::Laplace => {
            if k != 1 {
                return Err(Error::UnsupportedRoute(
                    "Laplace-representation route covers the first moment only".into(),
                ));
            }
            for y in 0..=y_max {
                values.push(posterior_mean_laplace(prior, params, y)?);
            }
        }
        EstimatorRoute::ClosedForm => {
            if k != 1 {
                return Err(Error::UnsupportedRoute(
                    "closed forms cover the first moment only".into(),
                ));
            }
            if params.lambda != 0.0 {
                return Err(Error::UnsupportedRoute(
                    "closed-form estimators require zero dark current".into(),
                ));
            }
            for y in 0..=y_max {
                values.push(closed_form_mean(prior, params.a, y)?);
            }
        }
        EstimatorRoute::Empirical => {
            return Err(Error::UnsupportedRoute(
                "empirical curves are built from counts, not a prior".into(),
            ));
        }
    }
    Ok(EstimatorCurve {
        k,
        route,
        params: *params,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::output_pmf;

    fn fig2_prior() -> Prior {
        Prior::discrete(vec![(6.0, 0.3), (16.0, 0.7)]).unwrap()
    }

    fn rel(a: Real, b: Real) -> Real {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn fig3_direct_values() {
        let prior = fig2_prior();
        let p0 = ChannelParams::new(1.0, 0.0).unwrap();
        assert!(rel(
            posterior_mean_direct(&prior, &p0, 0).unwrap(),
            6.00105921948798
        ) < 1e-11);
        assert!(rel(
            posterior_mean_direct(&prior, &p0, 9).unwrap(),
            10.1939953018791
        ) < 1e-11);
        let p3 = ChannelParams::new(1.0, 3.0).unwrap();
        assert!(rel(
            posterior_mean_direct(&prior, &p3, 10).unwrap(),
            7.57021578567893
        ) < 1e-11);
    }

    #[test]
    fn degenerate_posterior_is_constant() {
        let prior = Prior::degenerate(2.5).unwrap();
        let params = ChannelParams::new(1.3, 0.8).unwrap();
        let pmf = output_pmf(&prior, &params, PmfRoute::Mixture, None).unwrap();
        for y in 0..10 {
            assert!(rel(posterior_mean_direct(&prior, &params, y).unwrap(), 2.5) < 1e-12);
            assert!(rel(posterior_mean_tgr(&pmf, y).unwrap(), 2.5) < 1e-10);
            assert!(posterior_variance(&prior, &params, y).unwrap() < 1e-10);
        }
    }

    #[test]
    fn tgr_gamma_rate3() {
        // Rate-3 exponential input: E[X | Y = y] = (y + 1)/4 with a = 1.
        let prior = Prior::exponential(3.0).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        let pmf = output_pmf(&prior, &params, PmfRoute::Mixture, None).unwrap();
        let v = posterior_mean_tgr(&pmf, 1).unwrap();
        assert!(rel(v, 0.5) < 1e-10);
    }

    #[test]
    fn fig6_dark_current_two() {
        let prior = Prior::exponential(3.0).unwrap();
        let params = ChannelParams::new(1.0, 2.0).unwrap();
        let pmf = output_pmf(&prior, &params, PmfRoute::ClosedForm, Some(40)).unwrap();
        assert!(rel(posterior_mean_tgr(&pmf, 5).unwrap(), 0.458016606244889) < 1e-10);
        assert!(rel(posterior_mean_tgr(&pmf, 9).unwrap(), 0.846281655353462) < 1e-10);
    }

    #[test]
    fn geometric_u_moments() {
        // Unit gamma, a = 1, lambda = 0: E[U^k | y] = (y+k)! / (2^k y!).
        let prior = Prior::gamma(1.0, 1.0).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        for y in 0..6u64 {
            for k in 1..5u32 {
                let expect = (ln_factorial(y + k as u64) - ln_factorial(y)).exp()
                    / (2.0 as Real).powi(k as i32);
                assert!(rel(posterior_moment(&prior, &params, y, k).unwrap(), expect) < 1e-9);
                assert!(
                    rel(posterior_moment_product(&prior, &params, y, k).unwrap(), expect) < 1e-9
                );
            }
        }
        // k = 3 at y = 0 is 3!/2^3 = 0.75.
        assert!(rel(posterior_moment_product(&prior, &params, 0, 3).unwrap(), 0.75) < 1e-9);
    }

    #[test]
    fn moment_k1_equals_tgr_identity() {
        let prior = fig2_prior();
        let params = ChannelParams::new(1.0, 3.0).unwrap();
        let pmf = output_pmf(&prior, &params, PmfRoute::Mixture, None).unwrap();
        for y in [0u64, 3, 9, 14] {
            let m1 = posterior_moment(&prior, &params, y, 1).unwrap();
            let tgr = posterior_mean_tgr(&pmf, y).unwrap();
            assert!(rel(m1, params.a * tgr + params.lambda) < 1e-9, "y={y}");
        }
    }

    #[test]
    fn variance_consistency() {
        let prior = fig2_prior();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        for y in [0u64, 2, 9] {
            let v = posterior_variance(&prior, &params, y).unwrap();
            let m1 = posterior_moment(&prior, &params, y, 1).unwrap();
            let m2 = posterior_moment(&prior, &params, y, 2).unwrap();
            assert!((v - (m2 - m1 * m1)).abs() < 1e-8 * v.max(1.0), "y={y}");
            // Brute-force oracle on the two atoms.
            let w6 = 0.3 * crate::channel::likelihood(y, 6.0, &params);
            let w16 = 0.7 * crate::channel::likelihood(y, 16.0, &params);
            let mean = (6.0 * w6 + 16.0 * w16) / (w6 + w16);
            let second = (36.0 * w6 + 256.0 * w16) / (w6 + w16);
            assert!((v - (second - mean * mean)).abs() < 1e-8 * v.max(1.0));
        }
    }

    #[test]
    fn gamma_posterior_variance_linear() {
        // Unit gamma: V(X | Y = y) = (shape + y) / (rate + a)^2, so V(U | 0) = 1/4.
        let prior = Prior::gamma(1.0, 1.0).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        assert!(rel(posterior_variance(&prior, &params, 0).unwrap(), 0.25) < 1e-9);
    }

    #[test]
    fn laplace_route_closed_forms() {
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        let gamma = Prior::gamma(2.0, 3.0).unwrap();
        for y in 0..12u64 {
            let expect = (y as Real + 3.0) / 3.0;
            assert!(rel(posterior_mean_laplace(&gamma, &params, y).unwrap(), expect) < 1e-11);
        }
        let bern = Prior::bernoulli(0.4).unwrap();
        let e = (-1.0 as Real).exp();
        let expect0 = 0.4 * e / (0.6 + 0.4 * e);
        assert!(rel(posterior_mean_laplace(&bern, &params, 0).unwrap(), expect0) < 1e-12);
        for y in 1..6u64 {
            assert!(rel(posterior_mean_laplace(&bern, &params, y).unwrap(), 1.0) < 1e-12);
        }
    }

    #[test]
    fn laplace_route_with_dark_current_matches_direct() {
        let params = ChannelParams::new(1.0, 2.0).unwrap();
        for prior in [
            Prior::gamma(3.0, 1.0).unwrap(),
            fig2_prior(),
            Prior::poisson(2.0).unwrap(),
        ] {
            for y in [0u64, 1, 5, 11] {
                let lap = posterior_mean_laplace(&prior, &params, y).unwrap();
                let dir = posterior_mean_direct(&prior, &params, y).unwrap();
                assert!(rel(lap, dir) < 1e-9, "{prior:?} y={y}: {lap} vs {dir}");
            }
        }
    }

    #[test]
    fn closed_forms_match_direct() {
        let a = 1.0;
        let params = ChannelParams::new(a, 0.0).unwrap();
        let cases: Vec<Prior> = vec![
            Prior::gamma(2.0, 3.0).unwrap(),
            Prior::inverse_gamma(3.0, 2.0).unwrap(),
            Prior::uniform(0.5, 2.0).unwrap(),
            Prior::bernoulli(0.4).unwrap(),
            Prior::poisson(2.0).unwrap(),
        ];
        for prior in &cases {
            for y in 0..=12u64 {
                let cf = closed_form_mean(prior, a, y).unwrap();
                let dir = posterior_mean_direct(prior, &params, y).unwrap();
                assert!(rel(cf, dir) < 1e-8, "{prior:?} y={y}: cf={cf} direct={dir}");
            }
        }
        assert!(matches!(
            closed_form_mean(&fig2_prior(), a, 0),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn empirical_plug_in() {
        let mut counts = BTreeMap::new();
        counts.insert(0u64, 500u64);
        counts.insert(1u64, 250u64);
        let counts = EmpiricalCounts::from_counts(counts).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        assert!((empirical_bayes_mean(&counts, &params, 0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            empirical_bayes_mean(&counts, &params, 7),
            Err(Error::NoObservations(7))
        ));
    }

    #[test]
    fn counts_csv_roundtrip() {
        let counts = EmpiricalCounts::from_csv("y,count\n0,500\n1,250\n").unwrap();
        assert_eq!(counts.count(0), 500);
        assert_eq!(counts.n_total, 750);
        let raw = EmpiricalCounts::from_csv("0\n0\n1\n").unwrap();
        assert_eq!(raw.count(0), 2);
        assert_eq!(raw.count(1), 1);
        assert!(EmpiricalCounts::from_csv("0,1\n2\n").is_err());
        assert!(EmpiricalCounts::from_csv("").is_err());
        let csv = counts.to_csv();
        assert!(csv.starts_with("y,count\n0,500"));
    }

    #[test]
    fn curve_building_and_serialization() {
        let prior = Prior::gamma(1.0, 1.0).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        let curve = estimator_curve(&prior, &params, 1, EstimatorRoute::Tgr, 8).unwrap();
        for (y, v) in curve.values.iter().enumerate() {
            assert!(rel(*v, (y as Real + 1.0) / 2.0) < 1e-9);
        }
        let json = curve.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["route"], "tgr");
        assert_eq!(v["k"], 1);
        let csv = curve.to_csv();
        assert!(csv.starts_with("y,value\n"));
    }

    #[test]
    fn bounded_support_clamp() {
        // Posterior means stay inside the prior support.
        let cases: Vec<(Prior, Real)> = vec![
            (fig2_prior(), 3.0),
            (Prior::uniform(0.5, 2.0).unwrap(), 1.0),
            (Prior::bernoulli(0.4).unwrap(), 0.0),
        ];
        for (prior, lambda) in cases {
            let params = ChannelParams::new(1.0, lambda).unwrap();
            let lo = prior.support_min();
            let hi = prior.support_max().unwrap();
            for y in 0..=20u64 {
                let m = posterior_mean_direct(&prior, &params, y).unwrap();
                assert!(
                    (lo - 1e-9..=hi + 1e-9).contains(&m),
                    "{prior:?} y={y}: mean {m} outside [{lo}, {hi}]"
                );
            }
        }
    }
}
