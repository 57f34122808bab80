//! Moments of the chordal product of uniformly distributed subspace pairs.
//!
//! For independent uniform points of Gr(M, ℂ^T) the chordal product has
//! p-th moment
//!
//! ```text
//! E[D^p] = ∏_{m=1}^{M} Γ(T−m+1) Γ(T+p−m−M+1) / ( Γ(T−m−M+1) Γ(T+p−m+1) ),
//! ```
//!
//! finite exactly when p > 2M − T − 1. Equivalently D is distributed as the
//! product of M independent Beta(T−M+1−m, M) variables, m = 1..M; this module
//! exposes the moment formula, the beta parameters, analytic beta moments, a
//! sampler for the product representation, and an exact-rational evaluation
//! for integer exponents.

use crate::rng::SimRng;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

/// A moment request: dimensions (T, M) with 2M <= T and a real exponent p
/// strictly above the divergence boundary 2M − T − 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentQuery {
    t: usize,
    m: usize,
    p: f64,
}

impl MomentQuery {
    pub fn new(t: usize, m: usize, p: f64) -> Result<Self> {
        if m < 1 || 2 * m > t {
            return Err(Error::InvalidDimensions { t, m });
        }
        let boundary = 2.0 * m as f64 - t as f64 - 1.0;
        if !(p > boundary) {
            return Err(Error::MomentDiverges { p, boundary });
        }
        Ok(Self { t, m, p })
    }

    pub fn ambient_dim(&self) -> usize {
        self.t
    }

    pub fn subspace_dim(&self) -> usize {
        self.m
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }
}

/// Parameters of one beta factor in the product representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaFactor {
    pub alpha: f64,
    pub beta: f64,
}

/// The p-th moment of the chordal product, evaluated in log-Gamma domain so
/// large T cannot overflow. Lies in (0, 1] for p >= 0 and is >= 1 for p <= 0.
pub fn chordal_moment(q: &MomentQuery) -> f64 {
    let (t, m_dim, p) = (q.t as f64, q.m, q.p);
    let mut log_sum = 0.0;
    for m in 1..=m_dim {
        let m = m as f64;
        let md = m_dim as f64;
        log_sum += libm::lgamma(t - m + 1.0) + libm::lgamma(t + p - m - md + 1.0)
            - libm::lgamma(t - m - md + 1.0)
            - libm::lgamma(t + p - m + 1.0);
    }
    log_sum.exp()
}

/// The beta parameters (α_m, β_m) = (T−M+1−m, M) for m = 1..M.
pub fn beta_product_params(t: usize, m: usize) -> Result<Vec<BetaFactor>> {
    if m < 1 || 2 * m > t {
        return Err(Error::InvalidDimensions { t, m });
    }
    Ok((1..=m)
        .map(|i| BetaFactor {
            alpha: (t - m + 1 - i) as f64,
            beta: m as f64,
        })
        .collect())
}

/// The p-th moment of a Beta(α, β) variable:
/// `Γ(α+β)Γ(α+p) / (Γ(α+β+p)Γ(α))`, finite for p > −α.
pub fn beta_moment(f: &BetaFactor, p: f64) -> Result<f64> {
    if !(p + f.alpha > 0.0) {
        return Err(Error::MomentDiverges { p, boundary: -f.alpha });
    }
    Ok((libm::lgamma(f.alpha + f.beta) + libm::lgamma(f.alpha + p)
        - libm::lgamma(f.alpha + f.beta + p)
        - libm::lgamma(f.alpha))
    .exp())
}

/// Draws one value of the product of independent Beta(α_m, β_m) variables,
/// which matches the chordal product of a uniform pair in distribution.
///
/// Each beta draw is the ratio X/(X+Y) of two Gamma(α, 1) and Gamma(β, 1)
/// draws.
pub fn sample_beta_product(t: usize, m: usize, rng: &mut SimRng) -> Result<f64> {
    let params = beta_product_params(t, m)?;
    let mut product = 1.0;
    for f in &params {
        product *= sample_beta(f, rng);
    }
    Ok(product)
}

fn sample_beta(f: &BetaFactor, rng: &mut impl Rng) -> f64 {
    let x = Gamma::new(f.alpha, 1.0).expect("alpha > 0").sample(rng);
    let y = Gamma::new(f.beta, 1.0).expect("beta > 0").sample(rng);
    x / (x + y)
}

/// Exact rational value of the p-th moment for integer p.
///
/// For integer exponents every Γ-ratio in the moment formula collapses to a
/// product of consecutive integers, so the moment is rational:
/// `∏_m [ ∏_{j=T−m−M+1}^{T−m} j ] / [ ∏_{j=T+p−m−M+1}^{T+p−m} j ]`.
pub fn chordal_moment_exact(t: usize, m: usize, p: i64) -> Result<BigRational> {
    // validates dimensions and the divergence boundary
    MomentQuery::new(t, m, p as f64)?;
    let (t, m_dim) = (t as i64, m as i64);
    let mut numer = BigInt::one();
    let mut denom = BigInt::one();
    for m in 1..=m_dim {
        for j in (t - m - m_dim + 1)..=(t - m) {
            numer *= BigInt::from(j);
        }
        for j in (t + p - m - m_dim + 1)..=(t + p - m) {
            denom *= BigInt::from(j);
        }
    }
    Ok(BigRational::new(numer, denom))
}
