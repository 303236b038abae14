//! Analytic-property verifiers: parameter derivatives of posterior moments,
//! the large-dark-current limit, growth envelopes on the estimator, and the
//! gamma-linearity / Levy-stability diagnostics.

use crate::channel::{pmf_point, ChannelParams, PmfRoute};
use crate::error::{Error, Result};
use crate::estimator::{posterior_mean_direct, posterior_moment, posterior_variance};
use crate::prior::Prior;
use crate::quad::central_diff_richardson;
use crate::Real;
use num_complex::Complex64;
use serde::Serialize;

/// Finite-difference step for parameter probes.
fn fd_step(param: Real) -> Real {
    1e-4 * param.abs().max(1.0)
}

/// d/dlambda E[X | Y = y], in closed form:
/// 0 at y = 0, else -y V(U|Y=y-1) / (a E[U|Y=y-1]^2).
pub fn dmean_dlambda(prior: &Prior, params: &ChannelParams, y: u64) -> Result<Real> {
    if y == 0 {
        return Ok(0.0);
    }
    let var_u = posterior_variance(prior, params, y - 1)?;
    let mean_u = posterior_moment(prior, params, y - 1, 1)?;
    Ok(-(y as Real) * var_u / (mean_u * mean_u) / params.a)
}

/// Residual of the gradient identity
/// a d/da E[X|Y=y] + lambda d/dlambda E[X|Y=y] = -a V(X|Y=y),
/// with both derivatives probed by Richardson-extrapolated central
/// differences of the direct posterior mean.
pub fn gradient_identity_residual(prior: &Prior, params: &ChannelParams, y: u64) -> Result<Real> {
    let a = params.a;
    let lambda = params.lambda;
    let da = central_diff_richardson(
        |t| posterior_mean_direct(prior, &ChannelParams::new(t, lambda).unwrap(), y).unwrap(),
        a,
        fd_step(a),
    );
    let dl = central_diff_richardson(
        |l| posterior_mean_direct(prior, &ChannelParams::new(a, l).unwrap(), y).unwrap(),
        lambda,
        fd_step(lambda),
    );
    let var_x = posterior_variance(prior, params, y)? / (a * a);
    Ok((a * da + lambda * dl + a * var_x).abs())
}

/// Residuals of the two higher-moment derivative identities for
/// M_k(y) = E[U^k | Y = y]:
/// (gradient)  a dM_k/da + lambda dM_k/dlambda = k M_k - M_{k+1} + M_k M_1;
/// (dark current) dM_k/dlambda = k M_{k-1}(0) at y = 0, and
/// ((y+k) M_{k-1}(y) E[U|y-1] - y M_k(y)) / E[U|y-1] for y >= 1.
pub fn moment_gradient_residual(
    prior: &Prior,
    params: &ChannelParams,
    y: u64,
    k: u32,
) -> Result<(Real, Real)> {
    let a = params.a;
    let lambda = params.lambda;
    let moment = |aa: Real, ll: Real, order: u32| -> Real {
        posterior_moment(prior, &ChannelParams::new(aa, ll).unwrap(), y, order).unwrap()
    };
    let m_k = moment(a, lambda, k);
    let m_kp1 = moment(a, lambda, k + 1);
    let m_1 = moment(a, lambda, 1);

    let da = central_diff_richardson(|t| moment(t, lambda, k), a, fd_step(a));
    let dl = central_diff_richardson(|l| moment(a, l, k), lambda, fd_step(lambda));
    let grad_residual = (a * da + lambda * dl - (k as Real * m_k - m_kp1 + m_k * m_1)).abs();

    let analytic_dl = if y == 0 {
        k as Real * moment(a, lambda, k - 1)
    } else {
        let m_km1 = moment(a, lambda, k - 1);
        let mean_prev = posterior_moment(prior, params, y - 1, 1)?;
        ((y + k as u64) as Real * m_km1 * mean_prev - y as Real * m_k) / mean_prev
    };
    let dl_residual = (dl - analytic_dl).abs();
    Ok((grad_residual, dl_residual))
}

/// Limit of E[X | Y = y] as the dark current grows:
/// E[X e^{-aX}] / E[e^{-aX}], independent of y.
pub fn lambda_limit(prior: &Prior, a: Real) -> Result<Real> {
    let ln_num = prior.ln_abs_laplace_deriv(1, a)?;
    let ln_den = prior.ln_abs_laplace_deriv(0, a)?;
    Ok((ln_num - ln_den).exp())
}

/// Growth diagnostic: the ratio E[U | Y = y] / (y + 1) and, when the prior's
/// transform derivatives are available, the same ratio rebuilt from them.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthDiagnostic {
    pub ratio: Real,
    pub laplace_estimate: Option<Real>,
}

pub fn growth_ratio(prior: &Prior, params: &ChannelParams, y: u64) -> Result<GrowthDiagnostic> {
    let p0 = pmf_point(prior, params, y, PmfRoute::Mixture)?;
    let p1 = pmf_point(prior, params, y + 1, PmfRoute::Mixture)?;
    if p0 <= 0.0 {
        return Err(Error::ZeroProbability(format!("P[Y = {y}] vanishes")));
    }
    let ratio = p1 / p0;
    let laplace_estimate = match (
        pmf_point(prior, params, y, PmfRoute::Laplace),
        pmf_point(prior, params, y + 1, PmfRoute::Laplace),
    ) {
        (Ok(l0), Ok(l1)) if l0 > 0.0 => Some(l1 / l0),
        _ => None,
    };
    Ok(GrowthDiagnostic {
        ratio,
        laplace_estimate,
    })
}

/// Explicit near-linear growth bound: returns
/// (E[U|Y=y]/2, (y+1) log(y+1) - y E[log U] + E[U] + 1/(2e) + 1);
/// the first component never exceeds the second.
pub fn explicit_growth_bound(
    prior: &Prior,
    params: &ChannelParams,
    y: u64,
) -> Result<(Real, Real)> {
    let lhs = posterior_moment(prior, params, y, 1)? / 2.0;
    let yf = y as Real;
    let rhs = (yf + 1.0) * (yf + 1.0).ln() - yf * prior.log_moment(params)?
        + params.mean_count(prior)?
        + 0.5 / std::f64::consts::E
        + 1.0;
    Ok((lhs, rhs))
}

/// Weighted least-squares fit of E[U | Y = y] against (1, y) under the
/// output law.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinearFit {
    pub c1: Real,
    pub c2: Real,
    /// Mean squared deviation E[(E[U|Y] - (c1 Y + c2))^2].
    pub eps: Real,
}

/// Gamma law matched to a linear estimator: U ~ Gam((1-c1)/c1, c2/c1).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaSurrogate {
    pub rate: Real,
    pub shape: Real,
}

impl GammaSurrogate {
    pub fn to_prior(self) -> Result<Prior> {
        Prior::gamma(self.rate, self.shape)
    }

    /// Characteristic function of the surrogate gamma law.
    pub fn char_fn(&self, s: Real) -> Complex64 {
        if s == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::new(1.0, -s / self.rate).powf(-self.shape)
    }
}

pub fn fit_linear(prior: &Prior, params: &ChannelParams) -> Result<LinearFit> {
    prior.second_moment()?;
    let pmf = crate::channel::output_pmf(prior, params, PmfRoute::Mixture, None)?;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    let mut t0 = 0.0;
    let mut t1 = 0.0;
    let mut rows = Vec::new();
    for y in 0..pmf.y_max() {
        let w = pmf.prob(y)?;
        if w <= 0.0 {
            continue;
        }
        let m = (y + 1) as Real * pmf.prob(y + 1)? / w;
        let yf = y as Real;
        s0 += w;
        s1 += w * yf;
        s2 += w * yf * yf;
        t0 += w * m;
        t1 += w * yf * m;
        rows.push((yf, w, m));
    }
    let det = s0 * s2 - s1 * s1;
    if det.abs() < 1e-14 || rows.len() < 2 {
        return Err(Error::DegenerateFit(
            "output law has no usable spread in y".into(),
        ));
    }
    let c1 = (s0 * t1 - s1 * t0) / det;
    let c2 = (t0 - c1 * s1) / s0;
    let eps = rows
        .iter()
        .map(|&(yf, w, m)| {
            let d = m - (c1 * yf + c2);
            w * d * d
        })
        .sum::<Real>()
        .max(0.0);
    if !(0.0 < c1 && c1 < 1.0) || c2 <= 0.0 {
        return Err(Error::DegenerateFit(format!(
            "fit (c1={c1}, c2={c2}) leaves the region where a gamma surrogate exists"
        )));
    }
    Ok(LinearFit { c1, c2, eps })
}

/// Exact-linearity gate: a gamma surrogate is only meaningful when the fit
/// deviation is at machine scale, which in turn requires zero dark current.
pub fn linearity_theorem_check(fit: &LinearFit, params: &ChannelParams) -> Result<GammaSurrogate> {
    if fit.eps >= 1e-10 {
        return Err(Error::LinearityViolation {
            eps: fit.eps,
            lambda: params.lambda,
        });
    }
    Ok(GammaSurrogate {
        rate: (1.0 - fit.c1) / fit.c1,
        shape: fit.c2 / fit.c1,
    })
}

/// Logarithmic grid on [1e-3, 1e3] used for the characteristic-function gap.
pub fn default_s_grid() -> Vec<Real> {
    let n = 2000usize;
    (0..n)
        .map(|i| 1e-3 * (1e6 as Real).powf(i as Real / (n - 1) as Real))
        .collect()
}

/// sup over the grid of |phi_U(s) - phi_surrogate(s)| / s, with the s -> 0
/// endpoint replaced by its analytic limit |E U - E U_surrogate|.
pub fn char_gap(prior_u: &Prior, surrogate: &GammaSurrogate, s_grid: &[Real]) -> Result<Real> {
    let mut gap: Real = 0.0;
    if let Ok(mean) = prior_u.mean() {
        gap = (mean - surrogate.shape / surrogate.rate).abs();
    }
    for &s in s_grid {
        if !(s > 0.0) {
            return Err(Error::Domain("s grid must be positive".into()));
        }
        let d = (prior_u.char_fn(s) - surrogate.char_fn(s)).norm() / s;
        gap = gap.max(d);
    }
    Ok(gap)
}

/// Levy metric between two priors: the smallest band h with
/// Q(x - h) - h <= P(x) <= Q(x + h) + h everywhere, found by bisection over
/// a quantile grid augmented with the atoms of both laws.
pub fn levy_distance(p: &Prior, q: &Prior) -> Real {
    let mut grid = Vec::new();
    for prior in [p, q] {
        grid.extend(quantile_grid(prior));
        if let Some(atoms) = prior.atoms() {
            for (x, _) in atoms {
                grid.push(x - 1e-9);
                grid.push(x);
                grid.push(x + 1e-9);
            }
        }
    }
    grid.sort_by(Real::total_cmp);
    grid.dedup();

    let feasible = |h: Real| -> bool {
        const TOL: Real = 1e-12;
        grid.iter().all(|&x| {
            let pc = p.cdf(x);
            let qc = q.cdf(x);
            q.cdf(x - h) - h <= pc + TOL
                && pc <= q.cdf(x + h) + h + TOL
                && p.cdf(x - h) - h <= qc + TOL
                && qc <= p.cdf(x + h) + h + TOL
        })
    };

    // h = 1 is always feasible.
    let (mut lo, mut hi) = (0.0, 1.0);
    if feasible(0.0) {
        return 0.0;
    }
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Every 0.1% quantile of the prior, located by bisection on the cdf.
fn quantile_grid(prior: &Prior) -> Vec<Real> {
    let lo0 = prior.support_min() - 1.0;
    let mut hi0 = prior.support_min().max(1.0);
    while prior.cdf(hi0) < 1.0 - 1e-9 && hi0 < 1e12 {
        hi0 *= 2.0;
    }
    let mut out = Vec::with_capacity(999);
    for i in 1..1000 {
        let level = i as Real / 1000.0;
        let (mut a, mut b) = (lo0, hi0);
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if prior.cdf(mid) < level {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Full linearity diagnostic bundle, serialized by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct LinearityReport {
    pub c1: Real,
    pub c2: Real,
    pub eps: Real,
    pub surrogate: Option<GammaSurrogate>,
    pub char_gap: Option<Real>,
    /// sqrt(eps) / (1 - c1), the theoretical ceiling for both the
    /// characteristic-function gap and half the squared Levy distance.
    pub levy_bound_rhs: Real,
    pub levy_distance: Option<Real>,
}

/// Builds the fit and, when the law of U = aX + lambda coincides with the
/// prior (a = 1, lambda = 0), the quantitative-stability diagnostics.
pub fn linearity_report(prior: &Prior, params: &ChannelParams) -> Result<LinearityReport> {
    let fit = fit_linear(prior, params)?;
    let levy_bound_rhs = fit.eps.sqrt() / (1.0 - fit.c1);
    let u_is_x = params.a == 1.0 && params.lambda == 0.0;
    let surrogate = GammaSurrogate {
        rate: (1.0 - fit.c1) / fit.c1,
        shape: fit.c2 / fit.c1,
    };
    let (gap, levy) = if u_is_x {
        let gap = char_gap(prior, &surrogate, &default_s_grid())?;
        let levy = levy_distance(prior, &surrogate.to_prior()?);
        (Some(gap), Some(levy))
    } else {
        (None, None)
    };
    Ok(LinearityReport {
        c1: fit.c1,
        c2: fit.c2,
        eps: fit.eps,
        surrogate: if fit.eps < 1e-10 { Some(surrogate) } else { None },
        char_gap: gap,
        levy_bound_rhs,
        levy_distance: levy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::central_diff;

    fn fig2_prior() -> Prior {
        Prior::discrete(vec![(6.0, 0.3), (16.0, 0.7)]).unwrap()
    }

    #[test]
    fn dmean_dlambda_zero_cases() {
        let params = ChannelParams::new(1.0, 1.0).unwrap();
        for prior in [fig2_prior(), Prior::gamma(1.0, 1.0).unwrap()] {
            assert_eq!(dmean_dlambda(&prior, &params, 0).unwrap(), 0.0);
        }
        let c = Prior::degenerate(2.0).unwrap();
        for y in 0..8 {
            assert!(dmean_dlambda(&c, &params, y).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn dmean_dlambda_matches_finite_difference() {
        let prior = Prior::exponential(3.0).unwrap();
        let params = ChannelParams::new(1.0, 1.0).unwrap();
        for y in [1u64, 3, 5] {
            let analytic = dmean_dlambda(&prior, &params, y).unwrap();
            let fd = central_diff(
                |l| {
                    posterior_mean_direct(&prior, &ChannelParams::new(1.0, l).unwrap(), y).unwrap()
                },
                1.0,
                1e-5,
            );
            assert!((analytic - fd).abs() < 1e-6, "y={y}: {analytic} vs {fd}");
        }
    }

    #[test]
    fn gradient_identity_cases() {
        let c = Prior::degenerate(2.0).unwrap();
        let params = ChannelParams::new(1.0, 0.5).unwrap();
        assert!(gradient_identity_residual(&c, &params, 2).unwrap() < 1e-7);

        let g = Prior::gamma(1.0, 1.0).unwrap();
        assert!(gradient_identity_residual(&g, &params, 3).unwrap() < 1e-5);

        let d = fig2_prior();
        let params3 = ChannelParams::new(1.0, 3.0).unwrap();
        assert!(gradient_identity_residual(&d, &params3, 10).unwrap() < 1e-5);
    }

    #[test]
    fn moment_gradient_identities() {
        let g = Prior::gamma(1.0, 1.0).unwrap();
        let params = ChannelParams::new(1.0, 1.0).unwrap();
        let (r_grad, r_dl) = moment_gradient_residual(&g, &params, 2, 2).unwrap();
        assert!(r_grad < 1e-5, "gradient residual {r_grad}");
        assert!(r_dl < 1e-5, "dark-current residual {r_dl}");
        // y = 0 branch of the dark-current derivative.
        let (_, r_dl) = moment_gradient_residual(&g, &params, 0, 2).unwrap();
        assert!(r_dl < 1e-5, "y=0 dark-current residual {r_dl}");
    }

    #[test]
    fn lambda_limit_values() {
        let e3 = Prior::exponential(3.0).unwrap();
        assert!((lambda_limit(&e3, 1.0).unwrap() - 0.25).abs() < 1e-12);
        let c = Prior::degenerate(2.0).unwrap();
        assert!((lambda_limit(&c, 1.0).unwrap() - 2.0).abs() < 1e-12);
        let d = fig2_prior();
        assert!(
            ((lambda_limit(&d, 1.0).unwrap() - 6.00105921948798) / 6.00105921948798).abs() < 1e-12
        );
    }

    #[test]
    fn lambda_limit_is_approached_from_above() {
        let prior = Prior::exponential(3.0).unwrap();
        let limit = lambda_limit(&prior, 1.0).unwrap();
        let y = 2u64;
        let mut last = Real::INFINITY;
        for &lambda in &[10.0, 50.0, 200.0] {
            let params = ChannelParams::new(1.0, lambda).unwrap();
            let v = posterior_mean_direct(&prior, &params, y).unwrap();
            assert!(v > limit - 1e-12, "lambda={lambda}");
            assert!(v < last, "decreasing toward the limit");
            last = v;
        }
        assert!(last - limit < 1e-3, "gap {}", last - limit);
    }

    #[test]
    fn growth_ratio_geometric() {
        let prior = Prior::gamma(1.0, 1.0).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        for y in [0u64, 5, 17] {
            let d = growth_ratio(&prior, &params, y).unwrap();
            assert!((d.ratio - 0.5).abs() < 1e-10, "y={y}");
            let lap = d.laplace_estimate.unwrap();
            assert!((lap - 0.5).abs() < 1e-10);
        }
        let c = Prior::degenerate(2.0).unwrap();
        let d = growth_ratio(&c, &params, 9).unwrap();
        assert!((d.ratio - 0.2).abs() < 1e-9, "2/(y+1) at y=9");
    }

    #[test]
    fn growth_bound_gamma_reference_values() {
        // U ~ Gam(0.3, 1.4) fed directly through a unit channel.
        let prior = Prior::gamma(0.3, 1.4).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        let (lhs, rhs) = explicit_growth_bound(&prior, &params, 0).unwrap();
        assert!(
            ((rhs - 5.85060638725239) / 5.85060638725239).abs() < 1e-12,
            "rhs {rhs}"
        );
        assert!(((2.0 * lhs - 1.07692307692308) / 1.07692307692308).abs() < 1e-10);
        let (_, rhs10) = explicit_growth_bound(&prior, &params, 10).unwrap();
        assert!(
            ((rhs10 - 20.8015717906263) / 20.8015717906263).abs() < 1e-12,
            "rhs {rhs10}"
        );
        for y in 0..=40u64 {
            let (l, r) = explicit_growth_bound(&prior, &params, y).unwrap();
            assert!(l <= r, "y={y}: lhs {l} rhs {r}");
        }
    }

    #[test]
    fn fit_linear_gamma_exact() {
        let prior = Prior::gamma(1.0, 1.0).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        let fit = fit_linear(&prior, &params).unwrap();
        assert!((fit.c1 - 0.5).abs() < 1e-9, "c1 {}", fit.c1);
        assert!((fit.c2 - 0.5).abs() < 1e-9, "c2 {}", fit.c2);
        assert!(fit.eps < 1e-12, "eps {}", fit.eps);
        let surrogate = linearity_theorem_check(&fit, &params).unwrap();
        assert!((surrogate.rate - 1.0).abs() < 1e-8);
        assert!((surrogate.shape - 1.0).abs() < 1e-8);
    }

    #[test]
    fn surrogate_mapping_values() {
        let fit = LinearFit {
            c1: 0.25,
            c2: 0.25,
            eps: 0.0,
        };
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        let s = linearity_theorem_check(&fit, &params).unwrap();
        assert!((s.rate - 3.0).abs() < 1e-12);
        assert!((s.shape - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dark_current_breaks_linearity() {
        let prior = Prior::exponential(3.0).unwrap();
        let params = ChannelParams::new(1.0, 2.0).unwrap();
        let fit = fit_linear(&prior, &params).unwrap();
        assert!(fit.eps > 1e-6, "eps {}", fit.eps);
        assert!(matches!(
            linearity_theorem_check(&fit, &params),
            Err(Error::LinearityViolation { .. })
        ));
    }

    #[test]
    fn surrogate_reproduces_output_law() {
        let prior = Prior::gamma(2.0, 3.0).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        let fit = fit_linear(&prior, &params).unwrap();
        let surrogate = linearity_theorem_check(&fit, &params).unwrap();
        let back = surrogate.to_prior().unwrap();
        for y in 0..30u64 {
            let p1 = pmf_point(&prior, &params, y, PmfRoute::Mixture).unwrap();
            let p2 = pmf_point(&back, &params, y, PmfRoute::Mixture).unwrap();
            assert!((p1 - p2).abs() < 1e-7, "y={y}");
        }
    }

    #[test]
    fn char_gap_zero_for_exact_match() {
        let prior = Prior::gamma(1.0, 1.0).unwrap();
        let surrogate = GammaSurrogate {
            rate: 1.0,
            shape: 1.0,
        };
        let gap = char_gap(&prior, &surrogate, &default_s_grid()).unwrap();
        assert!(gap < 1e-12, "gap {gap}");
    }

    #[test]
    fn levy_distance_basics() {
        let a = Prior::degenerate(0.0).unwrap();
        assert!(levy_distance(&a, &a) < 1e-6);
        // Point masses: the band must absorb both the horizontal offset and,
        // once the separation reaches 1, the full unit jump.
        let b = Prior::degenerate(0.5).unwrap();
        let d = levy_distance(&a, &b);
        assert!((d - 0.5).abs() < 1e-6, "d {d}");
        let c = Prior::degenerate(1.0).unwrap();
        let d = levy_distance(&a, &c);
        assert!((d - 1.0).abs() < 1e-6, "unit-separated point masses: {d}");
        // Symmetry.
        let g = Prior::gamma(1.0, 1.0).unwrap();
        let d1 = levy_distance(&g, &b);
        let d2 = levy_distance(&b, &g);
        assert!((d1 - d2).abs() < 1e-6);
    }

    #[test]
    fn levy_triangle_inequality() {
        let p1 = Prior::gamma(1.0, 1.0).unwrap();
        let p2 = Prior::gamma(1.5, 1.0).unwrap();
        let p3 = Prior::uniform(0.0, 2.0).unwrap();
        let d12 = levy_distance(&p1, &p2);
        let d23 = levy_distance(&p2, &p3);
        let d13 = levy_distance(&p1, &p3);
        assert!(d13 <= d12 + d23 + 1e-6);
    }

    #[test]
    fn stability_chain_on_contaminated_gamma() {
        for &delta in &[0.01, 0.05, 0.1] {
            let prior = Prior::mixture(vec![
                (1.0 - delta, Prior::gamma(1.0, 1.0).unwrap()),
                (delta, Prior::degenerate(3.0).unwrap()),
            ])
            .unwrap();
            let params = ChannelParams::new(1.0, 0.0).unwrap();
            let fit = fit_linear(&prior, &params).unwrap();
            let bound = fit.eps.sqrt() / (1.0 - fit.c1);
            let surrogate = GammaSurrogate {
                rate: (1.0 - fit.c1) / fit.c1,
                shape: fit.c2 / fit.c1,
            };
            let gap = char_gap(&prior, &surrogate, &default_s_grid()).unwrap();
            assert!(gap <= bound + 1e-9, "delta={delta}: gap {gap} bound {bound}");
            let levy = levy_distance(&prior, &surrogate.to_prior().unwrap());
            assert!(
                levy * levy / 2.0 <= bound + 1e-9,
                "delta={delta}: levy {levy} bound {bound}"
            );
        }
    }

    #[test]
    fn linearity_report_serializes() {
        let prior = Prior::gamma(1.0, 1.0).unwrap();
        let params = ChannelParams::new(1.0, 0.0).unwrap();
        let report = linearity_report(&prior, &params).unwrap();
        let v: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert!(v["c1"].is_number());
        assert!(v["surrogate"]["rate"].is_number());
        assert!(v["levy_distance"].is_number());
    }
}
