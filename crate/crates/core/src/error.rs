use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input matrix does not have full column rank at the configured tolerance.
    #[error("matrix is rank deficient: numerical rank {rank} < {expected}")]
    RankDeficient { rank: usize, expected: usize },

    /// Two operands do not share the same ambient/subspace dimensions.
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },

    /// Dimensions violate 1 <= M and 2M <= T (or 1 <= M <= T where stated).
    #[error("invalid Grassmannian dimensions: T={t}, M={m}")]
    InvalidDimensions { t: usize, m: usize },

    /// The top M x M block of the representative is singular, so the point
    /// has no affine-chart coordinate.
    #[error("affine chart is singular for this subspace")]
    ChartSingular,

    /// The requested moment does not exist: the exponent is at or below the
    /// divergence boundary.
    #[error("moment diverges: exponent {p} is not above the boundary {boundary}")]
    MomentDiverges { p: f64, boundary: f64 },

    /// Code cardinality below the minimum of two points.
    #[error("invalid code cardinality K={k}; need K >= 2")]
    InvalidCardinality { k: usize },

    /// A scalar argument lies outside its admissible interval.
    #[error("{what} = {value} outside the admissible domain")]
    DomainError { what: &'static str, value: f64 },

    /// The two subspaces intersect nontrivially (chordal product zero), so the
    /// pairwise error quantities are undefined.
    #[error("subspaces intersect nontrivially (zero chordal product)")]
    IntersectingSubspaces,

    /// Code file violates the format or the orthonormality invariant.
    #[error("invalid code file: {0}")]
    InvalidCodeFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
