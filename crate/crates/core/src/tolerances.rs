/// Numerical tolerances used by validation and canonicalization routines.
///
/// All thresholds live here rather than as scattered magic numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max-norm bound on `basisᴴ·basis - I` for a valid orthonormal basis.
    pub orthonormality: f64,
    /// Relative singular-value cutoff for numerical rank decisions.
    pub rank: f64,
    /// Tolerance for cross-checks between algebraically equal routes.
    pub consistency: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orthonormality: 1e-12,
            rank: 1e-10,
            consistency: 1e-10,
        }
    }
}
