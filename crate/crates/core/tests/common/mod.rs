//! Statistical helpers shared by the integration tests: Kolmogorov–Smirnov
//! statistics, adaptive quadrature, and an independent sampler for the
//! affine-chart coordinate distribution.
#![allow(dead_code)]

use grasstat::rng::{complex_gaussian_matrix, SimRng};
use grasstat::sampling::AffineChartPoint;
use grasstat::CMatrix;

/// One-sample Kolmogorov–Smirnov statistic sup |F_n − F| for sorted samples.
/// The 1% critical value is approximately 1.63/√n.
pub fn ks_one_sample(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max((f - (i + 1) as f64 / n).abs());
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a − F_b| for sorted
/// samples. The 1% critical value is approximately 1.628·√((n+m)/(nm)).
pub fn ks_two_sample(sorted_a: &[f64], sorted_b: &[f64]) -> f64 {
    let (mut i, mut j) = (0usize, 0usize);
    let (n, m) = (sorted_a.len() as f64, sorted_b.len() as f64);
    let mut d = 0.0f64;
    while i < sorted_a.len() && j < sorted_b.len() {
        if sorted_a[i] <= sorted_b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

fn simpson_rule(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    (mid, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

fn simpson_recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    mid: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson_rule(f, a, fa, mid, fm);
    let (rm, frm, right) = simpson_rule(f, mid, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_recurse(f, a, fa, mid, fm, lm, flm, left, tol / 2.0, depth - 1)
        + simpson_recurse(f, mid, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over [a, b] to absolute tolerance
/// `tol`. The integrand must be finite throughout the closed interval.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let (mid, fm, whole) = simpson_rule(&f, a, fa, b, fb);
    simpson_recurse(&f, a, fa, b, fb, mid, fm, whole, tol, 48)
}

/// Draws the affine-chart coordinate of a uniform subspace directly: a
/// (T−M)×M matrix-variate t realization `Z·L⁻¹` where Z is standard complex
/// Gaussian and L is the Cholesky factor of GᴴG for an independent M×M
/// standard complex Gaussian G. Its density is proportional to
/// det(I + ÃᴴÃ)^{−T}, which is the chart density of the uniform measure.
pub fn sample_chart_coordinate(t: usize, m: usize, rng: &mut SimRng) -> AffineChartPoint {
    loop {
        let g = complex_gaussian_matrix(m, m, rng);
        let Some(chol) = (g.adjoint() * &g).cholesky() else {
            continue;
        };
        let z = complex_gaussian_matrix(t - m, m, rng);
        let inverse_factor = chol
            .l()
            .solve_lower_triangular(&CMatrix::identity(m, m))
            .expect("cholesky factor is invertible");
        if let Ok(point) = AffineChartPoint::new(t, m, z * inverse_factor) {
            return point;
        }
    }
}

/// Sample mean and its standard error.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
