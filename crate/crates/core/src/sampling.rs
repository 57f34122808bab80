//! Uniform sampling on the Grassmannian, the affine-chart parameterization,
//! and exact volume formulas.
//!
//! Uniform (rotation-invariant) samples are produced by orthonormalizing a
//! matrix of i.i.d. standard complex Gaussians; the affine chart writes a
//! subspace with invertible top block as the column span of `[I_M ; Ã]`, and
//! the chart coordinate `Ã` of a uniform subspace follows a matrix-variate t
//! density which this module evaluates. The density is a verification oracle,
//! not a generator.

use crate::grassmann::{orthonormalize, GrassmannPoint};
use crate::rng::complex_gaussian_matrix;
use crate::{C64, CMatrix, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

/// Chart coordinate Ã of the subspace spanned by `[I_M ; Ã]`.
///
/// Ã ranges over all of ℂ^{(T-M) x M}; the chart misses only the measure-zero
/// set of subspaces whose top M x M block is singular.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineChartPoint {
    tail: CMatrix,
}

impl AffineChartPoint {
    /// Builds the chart point for given (T, M); `tail` must be (T-M) x M.
    pub fn new(t: usize, m: usize, tail: CMatrix) -> Result<Self> {
        if m < 1 || 2 * m > t {
            return Err(Error::InvalidDimensions { t, m });
        }
        if tail.nrows() != t - m || tail.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: (t - m, m),
                got: (tail.nrows(), tail.ncols()),
            });
        }
        Ok(Self { tail })
    }

    pub fn ambient_dim(&self) -> usize {
        self.tail.nrows() + self.tail.ncols()
    }

    pub fn subspace_dim(&self) -> usize {
        self.tail.ncols()
    }

    /// The (T-M) x M block Ã.
    pub fn tail(&self) -> &CMatrix {
        &self.tail
    }

    /// Orthonormalized representative of the subspace spanned by `[I_M ; Ã]`.
    pub fn embed(&self) -> GrassmannPoint {
        let m = self.subspace_dim();
        let t = self.ambient_dim();
        let mut stacked = CMatrix::zeros(t, m);
        for j in 0..m {
            stacked[(j, j)] = C64::new(1.0, 0.0);
            for i in 0..t - m {
                stacked[(m + i, j)] = self.tail[(i, j)];
            }
        }
        // [I; Ã] always has full column rank
        orthonormalize(&stacked).expect("stacked chart representative has full rank")
    }
}

/// Draws a uniformly distributed point of Gr(M, ℂ^T).
///
/// The distribution is invariant under left multiplication by any fixed
/// unitary: a Gaussian T x M matrix is left-unitarily invariant and the
/// orthonormalized span only depends on its column space.
pub fn sample_uniform<R: Rng + ?Sized>(t: usize, m: usize, rng: &mut R) -> Result<GrassmannPoint> {
    if m < 1 || 2 * m > t {
        return Err(Error::InvalidDimensions { t, m });
    }
    loop {
        let raw = complex_gaussian_matrix(t, m, rng);
        // Gaussian matrices are full rank almost surely; retry on the
        // measure-zero failure instead of surfacing it.
        if let Ok(point) = orthonormalize(&raw) {
            return Ok(point);
        }
    }
}

/// Chart coordinate of a point: Ã = (bottom block) · (top block)⁻¹.
///
/// Fails with [`Error::ChartSingular`] when the top M x M block is singular at
/// tolerance 1e-10 (smallest singular value).
pub fn to_affine_chart(point: &GrassmannPoint) -> Result<AffineChartPoint> {
    let t = point.ambient_dim();
    let m = point.subspace_dim();
    let top = point.basis().view((0, 0), (m, m)).into_owned();
    let bottom = point.basis().view((m, 0), (t - m, m)).into_owned();

    let sigma_min = top.clone().singular_values().min();
    if sigma_min < 1e-10 {
        return Err(Error::ChartSingular);
    }
    let top_inv = top.try_inverse().ok_or(Error::ChartSingular)?;
    AffineChartPoint::new(t, m, bottom * top_inv)
}

/// Density of the chart coordinate of a uniform subspace at Ã:
/// `1 / (Vol(Gr(M, ℂ^T)) · det(I_M + ÃᴴÃ)^T)`.
pub fn chart_density(chart: &AffineChartPoint) -> f64 {
    let t = chart.ambient_dim();
    let m = chart.subspace_dim();
    let gram = CMatrix::identity(m, m) + chart.tail.ad_mul(&chart.tail);
    // Hermitian positive definite, so the Cholesky factor exists and the
    // log-determinant is twice the sum of the log diagonal.
    let chol = gram.cholesky().expect("I + ÃᴴÃ is positive definite");
    let ln_det: f64 = (0..m).map(|i| chol.l_dirty()[(i, i)].re.ln()).sum::<f64>() * 2.0;
    (-grassmannian_volume_ln(t, m).unwrap() - t as f64 * ln_det).exp()
}

fn check_volume_dims(t: usize, m: usize) -> Result<()> {
    if m < 1 || m > t {
        return Err(Error::InvalidDimensions { t, m });
    }
    Ok(())
}

/// Volume of Gr(M, ℂ^T):
/// `π^{M(T-M)} · 1!·2!···(M-1)! / ((T-M)!·(T-M+1)!···(T-1)!)`.
pub fn grassmannian_volume(t: usize, m: usize) -> Result<f64> {
    Ok(grassmannian_volume_ln(t, m)?.exp())
}

/// Natural log of the volume; safe for large T where factorials overflow.
pub fn grassmannian_volume_ln(t: usize, m: usize) -> Result<f64> {
    check_volume_dims(t, m)?;
    let mut ln = (m * (t - m)) as f64 * std::f64::consts::PI.ln();
    for j in 1..m {
        ln += libm::lgamma(j as f64 + 1.0);
    }
    for j in (t - m)..t {
        ln -= libm::lgamma(j as f64 + 1.0);
    }
    Ok(ln)
}

/// Exact rational coefficient c with `Vol = c · π^{M(T-M)}`.
pub fn grassmannian_volume_rational(t: usize, m: usize) -> Result<BigRational> {
    check_volume_dims(t, m)?;
    let mut numer = BigInt::one();
    for j in 1..m {
        numer *= factorial(j);
    }
    let mut denom = BigInt::one();
    for j in (t - m)..t {
        denom *= factorial(j);
    }
    Ok(BigRational::new(numer, denom))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}
