//! Input distributions: nonnegative priors for the channel input X.
//!
//! Each family exposes moments, the log-moment E[log(aX + lambda)], exact
//! Laplace-transform derivatives, the characteristic function, sampling, and
//! the CDF. Everything except `sample` is pure; `sample` takes the caller's
//! RNG state.

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::quad::{integrate, kahan_sum, log_sum_exp};
use crate::specfun::{
    digamma, gamma_p, gamma_q, ln_gamma_interval, log_gamma, touchard, TOUCHARD_MAX_N,
};
use crate::Real;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::Distribution;
use serde::Deserialize;

/// A nonnegative input distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    /// Gamma with rate `rate` and shape `shape` (mean = shape / rate).
    Gamma { rate: Real, shape: Real },
    /// Inverse gamma with shape and scale.
    InverseGamma { shape: Real, scale: Real },
    /// Uniform on [lower, upper], 0 <= lower < upper.
    Uniform { lower: Real, upper: Real },
    /// Mass p at 1, mass 1-p at 0.
    Bernoulli { p: Real },
    /// Poisson-distributed input with the given mean.
    Poisson { mean: Real },
    /// Finite support: sorted, distinct atoms (x_i, p_i).
    Discrete { atoms: Vec<(Real, Real)> },
    /// Point mass.
    Degenerate { value: Real },
    /// Convex combination of other priors.
    Mixture { components: Vec<(Real, Prior)> },
}

impl Prior {
    pub fn gamma(rate: Real, shape: Real) -> Result<Self> {
        if !(rate > 0.0 && shape > 0.0) {
            return Err(Error::Config(format!(
                "gamma requires rate > 0 and shape > 0 (rate={rate}, shape={shape})"
            )));
        }
        Ok(Prior::Gamma { rate, shape })
    }

    /// Exponential of the given rate: gamma with unit shape.
    pub fn exponential(rate: Real) -> Result<Self> {
        Self::gamma(rate, 1.0)
    }

    pub fn inverse_gamma(shape: Real, scale: Real) -> Result<Self> {
        if !(shape > 0.0 && scale > 0.0) {
            return Err(Error::Config(format!(
                "inverse_gamma requires shape > 0 and scale > 0 (shape={shape}, scale={scale})"
            )));
        }
        Ok(Prior::InverseGamma { shape, scale })
    }

    pub fn uniform(lower: Real, upper: Real) -> Result<Self> {
        if !(lower >= 0.0 && upper > lower) {
            return Err(Error::Config(format!(
                "uniform requires 0 <= lower < upper (lower={lower}, upper={upper})"
            )));
        }
        Ok(Prior::Uniform { lower, upper })
    }

    pub fn bernoulli(p: Real) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("bernoulli requires p in [0,1], got {p}")));
        }
        Ok(Prior::Bernoulli { p })
    }

    pub fn poisson(mean: Real) -> Result<Self> {
        if !(mean > 0.0) {
            return Err(Error::Config(format!("poisson requires mean > 0, got {mean}")));
        }
        Ok(Prior::Poisson { mean })
    }

    pub fn degenerate(value: Real) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::Config(format!(
                "degenerate requires a finite value >= 0, got {value}"
            )));
        }
        Ok(Prior::Degenerate { value })
    }

    pub fn discrete(mut atoms: Vec<(Real, Real)>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() > 100_000 {
            return Err(Error::Config(format!(
                "discrete requires 1..=100000 atoms, got {}",
                atoms.len()
            )));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut total = 0.0;
        for w in atoms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Config(format!("duplicate atom at x = {}", w[0].0)));
            }
        }
        for &(x, p) in &atoms {
            if !(x >= 0.0) || !x.is_finite() || !(p > 0.0) {
                return Err(Error::Config(format!(
                    "atoms need x >= 0 and p > 0, got ({x}, {p})"
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "atom probabilities sum to {total}, expected 1 within 1e-12"
            )));
        }
        Ok(Prior::Discrete { atoms })
    }

    pub fn mixture(components: Vec<(Real, Prior)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Config("mixture needs at least one component".into()));
        }
        let total: Real = components.iter().map(|c| c.0).sum();
        if components.iter().any(|c| !(c.0 > 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "mixture weights must be positive and sum to 1, sum = {total}"
            )));
        }
        Ok(Prior::Mixture { components })
    }

    /// Parses the JSON prior description, e.g.
    /// `{"family": "gamma", "rate": 3.0, "shape": 1.0}` or
    /// `{"family": "discrete", "atoms": [[6, 0.3], [16, 0.7]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PriorSpec =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("bad prior JSON: {e}")))?;
        spec.build()
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum PriorSpec {
    Gamma { rate: Real, shape: Real },
    Exponential { rate: Real },
    InverseGamma { shape: Real, scale: Real },
    Uniform { lower: Real, upper: Real },
    Bernoulli { p: Real },
    Poisson { mean: Real },
    Discrete { atoms: Vec<(Real, Real)> },
    Degenerate { value: Real },
    Mixture { components: Vec<ComponentSpec> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentSpec {
    weight: Real,
    prior: PriorSpec,
}

impl PriorSpec {
    fn build(self) -> Result<Prior> {
        match self {
            PriorSpec::Gamma { rate, shape } => Prior::gamma(rate, shape),
            PriorSpec::Exponential { rate } => Prior::exponential(rate),
            PriorSpec::InverseGamma { shape, scale } => Prior::inverse_gamma(shape, scale),
            PriorSpec::Uniform { lower, upper } => Prior::uniform(lower, upper),
            PriorSpec::Bernoulli { p } => Prior::bernoulli(p),
            PriorSpec::Poisson { mean } => Prior::poisson(mean),
            PriorSpec::Discrete { atoms } => Prior::discrete(atoms),
            PriorSpec::Degenerate { value } => Prior::degenerate(value),
            PriorSpec::Mixture { components } => {
                let mut parts = Vec::with_capacity(components.len());
                for c in components {
                    parts.push((c.weight, c.prior.build()?));
                }
                Prior::mixture(parts)
            }
        }
    }
}

impl Prior {
    pub fn mean(&self) -> Result<Real> {
        match self {
            Prior::Gamma { rate, shape } => Ok(shape / rate),
            Prior::InverseGamma { shape, scale } => {
                if *shape > 1.0 {
                    Ok(scale / (shape - 1.0))
                } else {
                    Err(Error::MomentUndefined(format!(
                        "inverse gamma mean needs shape > 1, got {shape}"
                    )))
                }
            }
            Prior::Uniform { lower, upper } => Ok(0.5 * (lower + upper)),
            Prior::Bernoulli { p } => Ok(*p),
            Prior::Poisson { mean } => Ok(*mean),
            Prior::Discrete { atoms } => Ok(kahan_sum(atoms.iter().map(|&(x, p)| x * p))),
            Prior::Degenerate { value } => Ok(*value),
            Prior::Mixture { components } => {
                let mut m = 0.0;
                for (w, prior) in components {
                    m += w * prior.mean()?;
                }
                Ok(m)
            }
        }
    }

    pub fn second_moment(&self) -> Result<Real> {
        match self {
            Prior::Gamma { rate, shape } => Ok(shape * (shape + 1.0) / (rate * rate)),
            Prior::InverseGamma { shape, scale } => {
                if *shape > 2.0 {
                    Ok(scale * scale / ((shape - 1.0) * (shape - 2.0)))
                } else {
                    Err(Error::MomentUndefined(format!(
                        "inverse gamma second moment needs shape > 2, got {shape}"
                    )))
                }
            }
            Prior::Uniform { lower, upper } => {
                Ok((upper * upper + upper * lower + lower * lower) / 3.0)
            }
            Prior::Bernoulli { p } => Ok(*p),
            Prior::Poisson { mean } => Ok(mean * (mean + 1.0)),
            Prior::Discrete { atoms } => Ok(kahan_sum(atoms.iter().map(|&(x, p)| x * x * p))),
            Prior::Degenerate { value } => Ok(value * value),
            Prior::Mixture { components } => {
                let mut m = 0.0;
                for (w, prior) in components {
                    m += w * prior.second_moment()?;
                }
                Ok(m)
            }
        }
    }

    pub fn variance(&self) -> Result<Real> {
        let m = self.mean()?;
        Ok((self.second_moment()? - m * m).max(0.0))
    }

    /// Smallest point of the support.
    pub fn support_min(&self) -> Real {
        match self {
            Prior::Gamma { .. } | Prior::InverseGamma { .. } => 0.0,
            Prior::Uniform { lower, .. } => *lower,
            Prior::Bernoulli { p } => {
                if *p >= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Prior::Poisson { .. } => 0.0,
            Prior::Discrete { atoms } => atoms[0].0,
            Prior::Degenerate { value } => *value,
            Prior::Mixture { components } => components
                .iter()
                .map(|(_, p)| p.support_min())
                .fold(Real::INFINITY, Real::min),
        }
    }

    /// Largest point of the support, `None` when unbounded.
    pub fn support_max(&self) -> Option<Real> {
        match self {
            Prior::Gamma { .. } | Prior::InverseGamma { .. } | Prior::Poisson { .. } => None,
            Prior::Uniform { upper, .. } => Some(*upper),
            Prior::Bernoulli { p } => Some(if *p <= 0.0 { 0.0 } else { 1.0 }),
            Prior::Discrete { atoms } => Some(atoms[atoms.len() - 1].0),
            Prior::Degenerate { value } => Some(*value),
            Prior::Mixture { components } => {
                let mut hi: Real = 0.0;
                for (_, p) in components {
                    hi = hi.max(p.support_max()?);
                }
                Some(hi)
            }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        match self {
            Prior::Degenerate { .. } => true,
            Prior::Bernoulli { p } => *p == 0.0 || *p == 1.0,
            Prior::Discrete { atoms } => atoms.len() == 1,
            Prior::Mixture { components } => {
                components.iter().all(|(_, p)| p.is_degenerate())
                    && components
                        .windows(2)
                        .all(|w| w[0].1.support_min() == w[1].1.support_min())
            }
            _ => false,
        }
    }

    pub fn has_atom_at_zero(&self) -> bool {
        match self {
            Prior::Bernoulli { p } => *p < 1.0,
            Prior::Poisson { .. } => true,
            Prior::Discrete { atoms } => atoms[0].0 == 0.0,
            Prior::Degenerate { value } => *value == 0.0,
            Prior::Mixture { components } => components.iter().any(|(_, p)| p.has_atom_at_zero()),
            _ => false,
        }
    }

    /// Atom representation for purely discrete priors (Poisson truncated at
    /// negligible tail mass). `None` for families with a density part.
    pub fn atoms(&self) -> Option<Vec<(Real, Real)>> {
        match self {
            Prior::Bernoulli { p } => Some(if *p == 0.0 {
                vec![(0.0, 1.0)]
            } else if *p == 1.0 {
                vec![(1.0, 1.0)]
            } else {
                vec![(0.0, 1.0 - p), (1.0, *p)]
            }),
            Prior::Poisson { mean } => {
                let mut out = Vec::new();
                let mut log_p = -mean; // log pmf at k = 0
                let mut remaining = 1.0;
                let mut k = 0u64;
                loop {
                    let p = log_p.exp();
                    out.push((k as Real, p));
                    remaining -= p;
                    if remaining < 1e-17 && k as Real > *mean {
                        break;
                    }
                    k += 1;
                    log_p += mean.ln() - (k as Real).ln();
                    if k > 2_000_000 {
                        break;
                    }
                }
                Some(out)
            }
            Prior::Discrete { atoms } => Some(atoms.clone()),
            Prior::Degenerate { value } => Some(vec![(*value, 1.0)]),
            Prior::Mixture { components } => {
                let mut merged: Vec<(Real, Real)> = Vec::new();
                for (w, prior) in components {
                    for (x, p) in prior.atoms()? {
                        merged.push((x, w * p));
                    }
                }
                merged.sort_by(|a, b| a.0.total_cmp(&b.0));
                Some(merged)
            }
            _ => None,
        }
    }

    /// Log density for the absolutely continuous families.
    pub(crate) fn ln_pdf(&self, x: Real) -> Real {
        match self {
            Prior::Gamma { rate, shape } => {
                if x <= 0.0 {
                    return Real::NEG_INFINITY;
                }
                shape * rate.ln() - log_gamma(*shape).expect("shape > 0")
                    + (shape - 1.0) * x.ln()
                    - rate * x
            }
            Prior::InverseGamma { shape, scale } => {
                if x <= 0.0 {
                    return Real::NEG_INFINITY;
                }
                shape * scale.ln() - log_gamma(*shape).expect("shape > 0")
                    - (shape + 1.0) * x.ln()
                    - scale / x
            }
            Prior::Uniform { lower, upper } => {
                if x < *lower || x > *upper {
                    Real::NEG_INFINITY
                } else {
                    -(upper - lower).ln()
                }
            }
            _ => Real::NEG_INFINITY,
        }
    }

    /// CDF, right-continuous.
    pub fn cdf(&self, x: Real) -> Real {
        if x < self.support_min() {
            return 0.0;
        }
        match self {
            Prior::Gamma { rate, shape } => gamma_p(*shape, rate * x).expect("validated"),
            Prior::InverseGamma { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    gamma_q(*shape, scale / x).expect("validated")
                }
            }
            Prior::Uniform { lower, upper } => ((x - lower) / (upper - lower)).clamp(0.0, 1.0),
            Prior::Bernoulli { p } => {
                if x >= 1.0 {
                    1.0
                } else if x >= 0.0 {
                    1.0 - p
                } else {
                    0.0
                }
            }
            Prior::Poisson { mean } => {
                if x < 0.0 {
                    0.0
                } else {
                    // P[N <= k] = Q(k + 1, mean)
                    gamma_q(x.floor() + 1.0, *mean).expect("validated")
                }
            }
            Prior::Discrete { atoms } => kahan_sum(
                atoms
                    .iter()
                    .take_while(|&&(xi, _)| xi <= x)
                    .map(|&(_, p)| p),
            ),
            Prior::Degenerate { value } => {
                if x >= *value {
                    1.0
                } else {
                    0.0
                }
            }
            Prior::Mixture { components } => {
                kahan_sum(components.iter().map(|(w, p)| w * p.cdf(x)))
            }
        }
    }

    /// Window [lo, hi] holding all but at most `eps` of the prior mass.
    pub(crate) fn quantile_window(&self, eps: Real) -> (Real, Real) {
        let lo = self.support_min();
        if let Some(hi) = self.support_max() {
            return (lo, hi);
        }
        // Unbounded above: double until the cdf clears 1 - eps.
        let start = match self.mean() {
            Ok(m) => m.max(1.0),
            Err(_) => 1.0,
        };
        let mut hi = start;
        while self.cdf(hi) < 1.0 - eps && hi < 1e300 {
            hi *= 2.0;
        }
        let lo = match self {
            Prior::InverseGamma { .. } => {
                // Density vanishes like exp(-scale/x) toward zero; find where
                // the left tail is negligible to keep quadrature panels tight.
                let (mut a, mut b) = (1e-300, hi);
                for _ in 0..200 {
                    let mid = (a * b).sqrt();
                    if self.cdf(mid) < eps {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                a
            }
            _ => lo,
        };
        (lo, hi)
    }

    /// E[log(aX + lambda)].
    ///
    /// Closed forms where the family admits one (digamma for gamma-type with
    /// no dark current), exact finite/truncated sums for atomic priors,
    /// adaptive quadrature otherwise. Diverges to a reported error exactly
    /// when the prior puts mass at 0 and lambda = 0.
    pub fn log_moment(&self, params: &ChannelParams) -> Result<Real> {
        let a = params.a;
        let lambda = params.lambda;
        if lambda == 0.0 && self.has_atom_at_zero() {
            return Err(Error::Divergent(
                "E[log(aX + lambda)] diverges: mass at X = 0 with lambda = 0".into(),
            ));
        }
        match self {
            Prior::Gamma { rate, shape } if lambda == 0.0 => {
                Ok(digamma(*shape)? - rate.ln() + a.ln())
            }
            Prior::InverseGamma { shape, scale } if lambda == 0.0 => {
                Ok(scale.ln() - digamma(*shape)? + a.ln())
            }
            Prior::Uniform { lower, upper } => {
                // Antiderivative of log(ax + lambda) is u (log u - 1) / a.
                let h = |x: Real| {
                    let u = a * x + lambda;
                    if u <= 0.0 {
                        0.0
                    } else {
                        u * (u.ln() - 1.0) / a
                    }
                };
                Ok((h(*upper) - h(*lower)) / (upper - lower))
            }
            Prior::Degenerate { value } => {
                let u: Real = a * value + lambda;
                if u <= 0.0 {
                    Err(Error::Divergent("log of zero intensity".into()))
                } else {
                    Ok(u.ln())
                }
            }
            Prior::Mixture { components } => {
                let mut acc = 0.0;
                for (w, prior) in components {
                    acc += w * prior.log_moment(params)?;
                }
                Ok(acc)
            }
            _ => {
                if let Some(atoms) = self.atoms() {
                    Ok(kahan_sum(
                        atoms.iter().map(|&(x, p)| p * (a * x + lambda).ln()),
                    ))
                } else {
                    self.expectation(|x| (a * x + lambda).ln())
                }
            }
        }
    }

    /// E[g(X)] for continuous families by scaled adaptive quadrature.
    fn expectation<F: Fn(Real) -> Real>(&self, g: F) -> Result<Real> {
        let (lo, hi) = self.quantile_window(1e-16);
        match self {
            Prior::Gamma { shape, .. } if *shape < 1.0 => {
                // Substitute x = u^{1/shape} to absorb the x^{shape-1}
                // endpoint singularity; the transformed density is bounded.
                let th = *shape;
                let f = |u: Real| {
                    if u <= 0.0 {
                        return 0.0;
                    }
                    let x = u.powf(1.0 / th);
                    let jac_ln = (1.0 / th).ln() + (1.0 / th - 1.0) * u.ln();
                    (self.ln_pdf(x) + jac_ln).exp() * g(x)
                };
                let (v, _) = integrate(f, 0.0, hi.powf(th), 1e-12, 1e-11);
                Ok(v)
            }
            _ => {
                let f = |x: Real| self.ln_pdf(x).exp() * g(x);
                let (v, _) = integrate(f, lo, hi, 1e-12, 1e-11);
                Ok(v)
            }
        }
    }

    /// n-th derivative of the Laplace transform E[e^{-tX}] at t.
    ///
    /// The sign is exactly (-1)^n; magnitudes are computed in the log domain
    /// and can overflow to infinity for extreme orders.
    pub fn laplace_deriv(&self, n: u32, t: Real) -> Result<Real> {
        let ln = self.ln_abs_laplace_deriv(n, t)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * ln.exp())
    }

    /// ln |d^n/dt^n E[e^{-tX}]|; -inf when the derivative vanishes.
    pub fn ln_abs_laplace_deriv(&self, n: u32, t: Real) -> Result<Real> {
        let nf = n as Real;
        match self {
            Prior::Gamma { rate, shape } => {
                if t <= -rate {
                    return Err(Error::Domain(format!(
                        "gamma Laplace transform needs t > -rate = {}",
                        -rate
                    )));
                }
                Ok(-nf * rate.ln() - (nf + shape) * (1.0 + t / rate).ln()
                    + log_gamma(shape + nf)?
                    - log_gamma(*shape)?)
            }
            Prior::InverseGamma { shape, scale } => {
                if t < 0.0 {
                    return Err(Error::Domain(
                        "inverse gamma Laplace transform needs t >= 0".into(),
                    ));
                }
                if t == 0.0 {
                    if n == 0 {
                        return Ok(0.0);
                    }
                    if nf < *shape {
                        return Ok(nf * scale.ln() + log_gamma(shape - nf)? - log_gamma(*shape)?);
                    }
                    return Err(Error::MomentUndefined(format!(
                        "inverse gamma moment of order {n} needs shape > {n}"
                    )));
                }
                let order = shape - nf;
                if order.abs() > 50.0 {
                    return Err(Error::UnsupportedOrder(format!(
                        "inverse gamma derivative {n}: Bessel order {order} beyond +-50"
                    )));
                }
                let k = crate::specfun::bessel_k(order, (4.0 * scale * t).sqrt())?;
                Ok(shape * scale.ln() - log_gamma(*shape)? + (2.0 as Real).ln() + k.ln()
                    + 0.5 * (nf - shape) * (scale.ln() - t.ln()))
            }
            Prior::Uniform { lower, upper } => {
                if t < 0.0 {
                    return Err(Error::Domain("uniform Laplace derivative needs t >= 0".into()));
                }
                if t == 0.0 {
                    // (-1)^n E[X^n]
                    let np1 = nf + 1.0;
                    let num = upper.powf(np1) - lower.powf(np1);
                    return Ok((num / (np1 * (upper - lower))).ln());
                }
                Ok(ln_gamma_interval(nf + 1.0, lower * t, upper * t)?
                    - (upper - lower).ln()
                    - (nf + 1.0) * t.ln())
            }
            Prior::Bernoulli { p } => {
                if n == 0 {
                    Ok(((1.0 - p) + p * (-t).exp()).ln())
                } else if *p == 0.0 {
                    Ok(Real::NEG_INFINITY)
                } else {
                    Ok(p.ln() - t)
                }
            }
            Prior::Poisson { mean } => {
                if n as usize > TOUCHARD_MAX_N {
                    return Err(Error::UnsupportedOrder(format!(
                        "poisson prior Laplace derivative limited to order {TOUCHARD_MAX_N}, got {n}"
                    )));
                }
                let arg = mean * (-t).exp();
                let poly = touchard(n as usize, arg)?;
                Ok(mean * ((-t).exp() - 1.0) + poly.ln())
            }
            Prior::Discrete { .. } | Prior::Degenerate { .. } => {
                let atoms = self.atoms().expect("atomic family");
                let terms: Vec<Real> = atoms
                    .iter()
                    .map(|&(x, p)| {
                        if x == 0.0 {
                            // 0^0 = 1 at n = 0; zero contribution otherwise.
                            if n == 0 {
                                p.ln()
                            } else {
                                Real::NEG_INFINITY
                            }
                        } else {
                            p.ln() + nf * x.ln() - t * x
                        }
                    })
                    .collect();
                Ok(log_sum_exp(&terms))
            }
            Prior::Mixture { components } => {
                let mut terms = Vec::with_capacity(components.len());
                for (w, prior) in components {
                    terms.push(w.ln() + prior.ln_abs_laplace_deriv(n, t)?);
                }
                Ok(log_sum_exp(&terms))
            }
        }
    }

    /// Characteristic function E[e^{isX}].
    pub fn char_fn(&self, s: Real) -> Complex64 {
        if s == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        match self {
            Prior::Gamma { rate, shape } => {
                Complex64::new(1.0, -s / rate).powf(-shape)
            }
            Prior::InverseGamma { .. } => {
                let (lo, hi) = self.quantile_window(1e-14);
                let re = integrate(|x| self.ln_pdf(x).exp() * (s * x).cos(), lo, hi, 1e-11, 1e-10).0;
                let im = integrate(|x| self.ln_pdf(x).exp() * (s * x).sin(), lo, hi, 1e-11, 1e-10).0;
                Complex64::new(re, im)
            }
            Prior::Uniform { lower, upper } => {
                let ea = Complex64::new(0.0, s * upper).exp();
                let eb = Complex64::new(0.0, s * lower).exp();
                (ea - eb) / (Complex64::new(0.0, s) * (upper - lower))
            }
            Prior::Bernoulli { p } => {
                Complex64::new(1.0 - p, 0.0) + p * Complex64::new(0.0, s).exp()
            }
            Prior::Poisson { mean } => {
                (mean * (Complex64::new(0.0, s).exp() - 1.0)).exp()
            }
            Prior::Discrete { atoms } => atoms
                .iter()
                .map(|&(x, p)| p * Complex64::new(0.0, s * x).exp())
                .sum(),
            Prior::Degenerate { value } => Complex64::new(0.0, s * value).exp(),
            Prior::Mixture { components } => components
                .iter()
                .map(|(w, prior)| *w * prior.char_fn(s))
                .sum(),
        }
    }

    /// Draws `n` i.i.d. samples using the caller's RNG state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<Real> {
        let mut out = Vec::with_capacity(n);
        match self {
            Prior::Gamma { rate, shape } => {
                let dist = rand_distr::Gamma::new(*shape, 1.0 / rate).expect("validated");
                out.extend((0..n).map(|_| dist.sample(rng)));
            }
            Prior::InverseGamma { shape, scale } => {
                // 1/X has gamma law with the same shape and rate = scale.
                let dist = rand_distr::Gamma::new(*shape, 1.0 / scale).expect("validated");
                out.extend((0..n).map(|_| 1.0 / dist.sample(rng)));
            }
            Prior::Uniform { lower, upper } => {
                let dist = rand_distr::Uniform::new(*lower, *upper).expect("validated");
                out.extend((0..n).map(|_| dist.sample(rng)));
            }
            Prior::Bernoulli { p } => {
                out.extend((0..n).map(|_| if rng.random::<Real>() < *p { 1.0 } else { 0.0 }));
            }
            Prior::Poisson { mean } => {
                let dist = rand_distr::Poisson::new(*mean).expect("validated");
                out.extend((0..n).map(|_| {
                    let v: Real = dist.sample(rng);
                    v
                }));
            }
            Prior::Discrete { atoms } => {
                let cumulative: Vec<Real> = atoms
                    .iter()
                    .scan(0.0, |acc, &(_, p)| {
                        *acc += p;
                        Some(*acc)
                    })
                    .collect();
                out.extend((0..n).map(|_| {
                    let u: Real = rng.random();
                    let idx = cumulative.partition_point(|&c| c < u);
                    atoms[idx.min(atoms.len() - 1)].0
                }));
            }
            Prior::Degenerate { value } => out.extend(std::iter::repeat(*value).take(n)),
            Prior::Mixture { components } => {
                let cumulative: Vec<Real> = components
                    .iter()
                    .scan(0.0, |acc, (w, _)| {
                        *acc += w;
                        Some(*acc)
                    })
                    .collect();
                for _ in 0..n {
                    let u: Real = rng.random();
                    let idx = cumulative.partition_point(|&c| c < u);
                    let idx = idx.min(components.len() - 1);
                    out.push(components[idx].1.sample(rng, 1)[0]);
                }
            }
        }
        out
    }
}
