//! Subspace representation and the chordal product kernel.
//!
//! A point of the complex Grassmannian Gr(M, ℂ^T) is stored as a T x M matrix
//! with orthonormal columns (a Stiefel representative). The chordal product of
//! two points is `det(I - AᴴB BᴴA) = ∏ sin²θᵢ` over their principal angles;
//! it is zero exactly when the subspaces intersect nontrivially. Everything in
//! this module is representative-independent.

use crate::{C64, CMatrix, Error, Result, Tolerances};

/// A point of Gr(M, ℂ^T): a T x M complex matrix with orthonormal columns.
///
/// Dimensions must satisfy 1 <= M and 2M <= T.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannPoint {
    basis: CMatrix,
}

impl GrassmannPoint {
    /// Wraps an already orthonormal basis, validating the invariants.
    pub fn new(basis: CMatrix) -> Result<Self> {
        Self::with_tolerances(basis, &Tolerances::default())
    }

    /// Like [`GrassmannPoint::new`] with explicit tolerances.
    pub fn with_tolerances(basis: CMatrix, tol: &Tolerances) -> Result<Self> {
        let (t, m) = (basis.nrows(), basis.ncols());
        check_dims(t, m)?;
        let gram = basis.ad_mul(&basis);
        let residual = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| {
                let expected = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                (gram[(i, j)] - expected).norm()
            })
            .fold(0.0f64, f64::max);
        if residual > tol.orthonormality {
            return Err(Error::InvalidCodeFile(format!(
                "basis is not orthonormal: residual {residual:.3e} exceeds {:.0e}",
                tol.orthonormality
            )));
        }
        Ok(Self { basis })
    }

    /// Ambient dimension T.
    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Subspace dimension M.
    pub fn subspace_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// The orthonormal representative.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthogonal projector `basis · basisᴴ` onto the subspace.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }
}

fn check_dims(t: usize, m: usize) -> Result<()> {
    if m < 1 || 2 * m > t {
        return Err(Error::InvalidDimensions { t, m });
    }
    Ok(())
}

/// Canonicalizes an arbitrary full-column-rank T x M matrix into a Grassmann
/// point spanning the same column space.
///
/// Thin QR with the diagonal of R made real and positive, so representatives
/// are deterministic. Fails with [`Error::RankDeficient`] when the numerical
/// rank at the configured tolerance is below M.
pub fn orthonormalize(raw: &CMatrix) -> Result<GrassmannPoint> {
    orthonormalize_with(raw, &Tolerances::default())
}

/// [`orthonormalize`] with explicit tolerances.
pub fn orthonormalize_with(raw: &CMatrix, tol: &Tolerances) -> Result<GrassmannPoint> {
    let (t, m) = (raw.nrows(), raw.ncols());
    check_dims(t, m)?;

    let singular_values = raw.clone().singular_values();
    let sigma_max = singular_values.max();
    let rank = singular_values
        .iter()
        .filter(|&&s| s > tol.rank * sigma_max.max(1.0))
        .count();
    if rank < m {
        return Err(Error::RankDeficient { rank, expected: m });
    }

    let qr = raw.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    // Fix the unitary phase freedom: make the R diagonal real positive by
    // rotating each column of Q with the conjugate phase.
    for j in 0..m {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..t {
                q[(i, j)] *= phase;
            }
        }
    }
    GrassmannPoint::with_tolerances(q, tol)
}

/// Principal angles θ₁ <= … <= θ_M between two subspaces, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngleSet {
    angles: Vec<f64>,
}

impl PrincipalAngleSet {
    /// Angles sorted ascending, each in [0, π/2].
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// ∏ sin²θᵢ, the chordal product implied by these angles.
    pub fn chordal_product(&self) -> f64 {
        self.angles.iter().map(|a| a.sin().powi(2)).product()
    }

    /// Σ sin²θᵢ, the squared chordal distance between the subspaces.
    pub fn squared_chordal_distance(&self) -> f64 {
        self.angles.iter().map(|a| a.sin().powi(2)).sum()
    }
}

fn check_same_space(a: &GrassmannPoint, b: &GrassmannPoint) -> Result<()> {
    let da = (a.ambient_dim(), a.subspace_dim());
    let db = (b.ambient_dim(), b.subspace_dim());
    if da != db {
        return Err(Error::DimensionMismatch { expected: da, got: db });
    }
    Ok(())
}

/// Total order on representatives so that symmetric operations evaluate the
/// same expression for (A, B) and (B, A), making them exactly symmetric.
fn canonical_order<'p>(
    a: &'p GrassmannPoint,
    b: &'p GrassmannPoint,
) -> (&'p GrassmannPoint, &'p GrassmannPoint) {
    for (x, y) in a.basis.iter().zip(b.basis.iter()) {
        for (u, v) in [(x.re, y.re), (x.im, y.im)] {
            if u < v {
                return (a, b);
            }
            if u > v {
                return (b, a);
            }
        }
    }
    (a, b)
}

/// Cosines of the principal angles: the singular values of AᴴB, clamped into
/// [0, 1] and sorted descending.
fn principal_cosines(a: &GrassmannPoint, b: &GrassmannPoint) -> Vec<f64> {
    let (first, second) = canonical_order(a, b);
    let product = first.basis.ad_mul(&second.basis);
    let mut cosines: Vec<f64> = product
        .singular_values()
        .iter()
        .map(|&s| s.clamp(0.0, 1.0))
        .collect();
    cosines.sort_unstable_by(|x, y| y.total_cmp(x));
    cosines
}

/// Chordal product determinant `det(I - AᴴB BᴴA) = ∏ sin²θᵢ`, in [0, 1].
///
/// Computed as `∏ (1-σᵢ)(1+σᵢ)` from the singular values σᵢ of AᴴB, which
/// keeps precision when σᵢ ≈ 1 (nearly coincident subspaces). Exactly
/// symmetric in its arguments.
pub fn chordal_product(a: &GrassmannPoint, b: &GrassmannPoint) -> Result<f64> {
    check_same_space(a, b)?;
    let product: f64 = principal_cosines(a, b)
        .iter()
        .map(|&s| (1.0 - s) * (1.0 + s))
        .product();
    Ok(product.clamp(0.0, 1.0))
}

/// Principal angles between two subspaces via the SVD of AᴴB.
pub fn principal_angles(a: &GrassmannPoint, b: &GrassmannPoint) -> Result<PrincipalAngleSet> {
    check_same_space(a, b)?;
    let mut angles: Vec<f64> = principal_cosines(a, b).iter().map(|&s| s.acos()).collect();
    angles.sort_unstable_by(f64::total_cmp);
    Ok(PrincipalAngleSet { angles })
}

/// An ordered collection of K >= 2 points sharing the same Gr(M, ℂ^T).
#[derive(Debug, Clone)]
pub struct Code {
    points: Vec<GrassmannPoint>,
}

impl Code {
    pub fn new(points: Vec<GrassmannPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidCardinality { k: points.len() });
        }
        for p in &points[1..] {
            check_same_space(&points[0], p)?;
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[GrassmannPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the invariant guarantees K >= 2
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].ambient_dim()
    }

    pub fn subspace_dim(&self) -> usize {
        self.points[0].subspace_dim()
    }
}

/// Chordal product energy of a code: divergent configurations are tagged with
/// an offending pair instead of reported as an error, so that a search can
/// reject them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Energy {
    Finite(f64),
    /// Some pair of points has chordal product zero; `pair` indexes one such.
    Infinite { pair: (usize, usize) },
}

impl Energy {
    pub fn as_f64(&self) -> f64 {
        match self {
            Energy::Finite(v) => *v,
            Energy::Infinite { .. } => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Energy::Finite(_))
    }
}

/// Σ over ordered pairs i ≠ j of `chordal_product(Xᵢ, Xⱼ)^(-N)`.
pub fn code_energy(code: &Code, n: u32) -> Energy {
    assert!(n >= 1, "energy exponent N must be >= 1");
    let k = code.len();
    let mut unordered_sum = 0.0f64;
    for i in 0..k {
        for j in (i + 1)..k {
            // same (T, M) by the Code invariant
            let product = chordal_product(&code.points[i], &code.points[j]).unwrap();
            if product == 0.0 {
                return Energy::Infinite { pair: (i, j) };
            }
            unordered_sum += product.powi(-(n as i32));
        }
    }
    Energy::Finite(2.0 * unordered_sum)
}

/// Minimum pairwise chordal product over unordered pairs, with the minimizing
/// pair. Ties break to the lexicographically first pair.
pub fn min_pairwise_product(code: &Code) -> (f64, (usize, usize)) {
    let k = code.len();
    let mut best = f64::INFINITY;
    let mut arg = (0, 1);
    for i in 0..k {
        for j in (i + 1)..k {
            let product = chordal_product(&code.points[i], &code.points[j]).unwrap();
            if product < best {
                best = product;
                arg = (i, j);
            }
        }
    }
    (best, arg)
}
