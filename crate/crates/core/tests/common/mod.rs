#![allow(dead_code)]

use std::f64::consts::PI;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

fn gaussian_density(y: f64, mu: f64, sigma: f64) -> f64 {
    let z = (y - mu) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

/// `E[(f - y_max) 1{y_max <= f <= upper}]` for `f ~ N(mu, sigma^2)` by direct
/// integration of the improvement against the Gaussian density. The infinite
/// upper limit is cut twelve standard deviations past the mean.
pub fn improvement_by_quadrature(mu: f64, sigma: f64, y_max: f64, upper: f64) -> f64 {
    let hi = upper.min(mu.max(y_max) + 12.0 * sigma);
    if hi <= y_max {
        return 0.0;
    }
    let integrand = |y: f64| (y - y_max) * gaussian_density(y, mu, sigma);
    // fixed subdivision first so the adaptive rule cannot miss a narrow tail mass
    let pieces = 64;
    let cuts: Vec<f64> = (0..=pieces)
        .map(|i| y_max + (hi - y_max) * i as f64 / pieces as f64)
        .collect();
    cuts.windows(2).map(|w| simpson(&integrand, w[0], w[1], 1e-14)).sum()
}
