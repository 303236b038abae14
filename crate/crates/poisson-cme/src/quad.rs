//! Adaptive Gauss-Kronrod quadrature and small numerical helpers.

use crate::Real;

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (nonnegative half).
/// Even-indexed entries are also the 7-point Gauss nodes.
const XGK: [Real; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [Real; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Weights of the embedded 7-point Gauss rule (nodes XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [Real; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_95,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 15(7) panel on [a, b]. Returns (kronrod, |kronrod - gauss|).
fn gk15<F: Fn(Real) -> Real>(f: &F, a: Real, b: Real) -> (Real, Real) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;

    for j in 0..7 {
        let x = half * XGK[j];
        let fsum = f(center - x) + f(center + x);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive quadrature of `f` over [a, b].
///
/// Bisects the worst panel until the summed error estimate satisfies
/// `err <= max(abs_tol, rel_tol * |integral|)` or the panel budget runs out.
/// Returns the integral estimate and the final error estimate.
pub fn integrate<F: Fn(Real) -> Real>(
    f: F,
    a: Real,
    b: Real,
    abs_tol: Real,
    rel_tol: Real,
) -> (Real, Real) {
    if a == b {
        return (0.0, 0.0);
    }
    // (neg error, value, lo, hi) ordered so the worst panel pops first.
    let mut panels: Vec<(Real, Real, Real, Real)> = Vec::with_capacity(256);
    let (v, e) = gk15(&f, a, b);
    panels.push((e, v, a, b));

    let max_panels = 4096;
    loop {
        let total: Real = panels.iter().map(|p| p.1).sum();
        let err: Real = panels.iter().map(|p| p.0).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || panels.len() >= max_panels {
            return (total, err);
        }
        // Split the panel with the largest error estimate.
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .0.total_cmp(&y.1 .0))
            .expect("non-empty panel list");
        let (_, _, lo, hi) = panels.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval no longer splittable at this precision.
            let (v, e) = gk15(&f, lo, hi);
            panels.push((e, v, lo, hi));
            let total: Real = panels.iter().map(|p| p.1).sum();
            let err: Real = panels.iter().map(|p| p.0).sum();
            return (total, err);
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        panels.push((e1, v1, lo, mid));
        panels.push((e2, v2, mid, hi));
    }
}

/// Kahan-compensated sum.
pub fn kahan_sum<I: IntoIterator<Item = Real>>(values: I) -> Real {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// log(sum of exp(terms)) with the usual max-shift; tolerates -inf entries.
pub fn log_sum_exp(terms: &[Real]) -> Real {
    let m = terms.iter().copied().fold(Real::NEG_INFINITY, Real::max);
    if !m.is_finite() {
        return m;
    }
    let s = kahan_sum(terms.iter().map(|&t| (t - m).exp()));
    m + s.ln()
}

/// Central difference d/dx f at `x` with one level of Richardson extrapolation.
///
/// Uses steps h and h/2; the combination (4 D_{h/2} - D_h) / 3 cancels the
/// leading O(h^2) truncation term.
pub fn central_diff_richardson<F: Fn(Real) -> Real>(f: F, x: Real, h: Real) -> Real {
    let d = |step: Real| (f(x + step) - f(x - step)) / (2.0 * step);
    let d1 = d(h);
    let d2 = d(0.5 * h);
    (4.0 * d2 - d1) / 3.0
}

/// Plain central difference (no extrapolation).
pub fn central_diff<F: Fn(Real) -> Real>(f: F, x: Real, h: Real) -> Real {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
