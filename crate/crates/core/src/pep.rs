//! Noncoherent block-fading channel simulation: transmit a subspace codeword
//! through `Y = X·H + √(M/(Tρ))·W`, decode with the maximum-likelihood
//! projection statistic, and estimate pairwise error probabilities against
//! their high-SNR asymptote.

use crate::bounds::union_bound_constant;
use crate::grassmann::{chordal_product, Code, GrassmannPoint};
use crate::rng::{complex_gaussian_matrix, shard_rng};
use crate::{CMatrix, Error, Result};
use rand::Rng;
use rayon::prelude::*;

/// Channel dimensions and SNR: T symbol slots, M transmit and N receive
/// antennas, ρ the linear-scale signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    t: usize,
    m: usize,
    n: usize,
    rho: f64,
}

impl ChannelConfig {
    pub fn new(t: usize, m: usize, n: usize, rho: f64) -> Result<Self> {
        if m < 1 || 2 * m > t {
            return Err(Error::InvalidDimensions { t, m });
        }
        if n < 1 {
            return Err(Error::DomainError { what: "N", value: n as f64 });
        }
        if !(rho > 0.0) {
            return Err(Error::DomainError { what: "rho", value: rho });
        }
        Ok(Self { t, m, n, rho })
    }

    pub fn ambient_dim(&self) -> usize {
        self.t
    }

    pub fn subspace_dim(&self) -> usize {
        self.m
    }

    pub fn receive_antennas(&self) -> usize {
        self.n
    }

    pub fn snr(&self) -> f64 {
        self.rho
    }

    fn noise_scale(&self) -> f64 {
        (self.m as f64 / (self.t as f64 * self.rho)).sqrt()
    }
}

/// Monte-Carlo estimate of a pairwise error probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PepEstimate {
    /// Observed error frequency.
    pub p_hat: f64,
    /// Number of simulated transmissions.
    pub trials: u64,
    /// Binomial standard error √(p̂(1−p̂)/trials).
    pub stderr: f64,
}

impl PepEstimate {
    fn from_counts(errors: u64, trials: u64) -> Self {
        let p_hat = errors as f64 / trials as f64;
        let stderr = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
        Self { p_hat, trials, stderr }
    }

    /// Conservative upper confidence bound on the true probability. Estimates
    /// with zero observed errors are below the measurable range of plain
    /// Monte-Carlo; the rule-of-three bound 3/n stands in for them.
    pub fn upper_confidence(&self) -> f64 {
        if self.p_hat == 0.0 {
            3.0 / self.trials as f64
        } else {
            (self.p_hat + 3.0 * self.stderr).min(1.0)
        }
    }
}

/// One channel use: `Y = X·H + √(M/(Tρ))·W` with H (M×N) and W (T×N) drawn
/// i.i.d. standard complex Gaussian.
pub fn transmit<R: Rng + ?Sized>(
    x: &GrassmannPoint,
    cfg: &ChannelConfig,
    rng: &mut R,
) -> Result<CMatrix> {
    let h = complex_gaussian_matrix(cfg.m, cfg.n, rng);
    let w = complex_gaussian_matrix(cfg.t, cfg.n, rng);
    transmit_with(x, cfg, &h, &w)
}

/// Channel output for explicitly supplied fading and noise realizations.
pub fn transmit_with(
    x: &GrassmannPoint,
    cfg: &ChannelConfig,
    h: &CMatrix,
    w: &CMatrix,
) -> Result<CMatrix> {
    if x.ambient_dim() != cfg.t || x.subspace_dim() != cfg.m {
        return Err(Error::DimensionMismatch {
            expected: (cfg.t, cfg.m),
            got: (x.ambient_dim(), x.subspace_dim()),
        });
    }
    if h.shape() != (cfg.m, cfg.n) {
        return Err(Error::DimensionMismatch { expected: (cfg.m, cfg.n), got: h.shape() });
    }
    if w.shape() != (cfg.t, cfg.n) {
        return Err(Error::DimensionMismatch { expected: (cfg.t, cfg.n), got: w.shape() });
    }
    Ok(x.basis() * h + w.scale(cfg.noise_scale()))
}

/// Maximum-likelihood decoding: the index maximizing the projection energy
/// `tr(Yᴴ X_j X_jᴴ Y)`. Ties resolve to the lowest index.
pub fn ml_decode(y: &CMatrix, code: &Code) -> Result<usize> {
    if y.nrows() != code.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: (code.ambient_dim(), y.ncols()),
            got: y.shape(),
        });
    }
    let mut best = 0;
    let mut best_stat = f64::NEG_INFINITY;
    for (j, point) in code.points().iter().enumerate() {
        let stat = (point.basis().adjoint() * y).norm_squared();
        if stat > best_stat {
            best = j;
            best_stat = stat;
        }
    }
    Ok(best)
}

const TRIALS_PER_SHARD: u64 = 8192;

/// Estimate of the probability that a transmission of `x1` decodes as `x2`
/// under the two-word code {x1, x2}. Trials are sharded across independent
/// RNG streams derived from `seed`, so the estimate does not depend on how
/// shards are scheduled.
pub fn estimate_pep(
    x1: &GrassmannPoint,
    x2: &GrassmannPoint,
    cfg: &ChannelConfig,
    trials: u64,
    seed: u64,
) -> Result<PepEstimate> {
    if trials < 1 {
        return Err(Error::DomainError { what: "trials", value: trials as f64 });
    }
    if chordal_product(x1, x2)? == 0.0 {
        return Err(Error::IntersectingSubspaces);
    }
    let code = Code::new(vec![x1.clone(), x2.clone()])?;
    let transmitted = code.points()[0].clone();
    if transmitted.ambient_dim() != cfg.t || transmitted.subspace_dim() != cfg.m {
        return Err(Error::DimensionMismatch {
            expected: (cfg.t, cfg.m),
            got: (transmitted.ambient_dim(), transmitted.subspace_dim()),
        });
    }
    let shards = trials.div_ceil(TRIALS_PER_SHARD);
    let errors: u64 = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = shard_rng(seed, shard);
            let in_shard = TRIALS_PER_SHARD.min(trials - shard * TRIALS_PER_SHARD);
            let mut errors = 0;
            for _ in 0..in_shard {
                let y = transmit(&transmitted, cfg, &mut rng).expect("dims already checked");
                if ml_decode(&y, &code).expect("dims already checked") == 1 {
                    errors += 1;
                }
            }
            errors
        })
        .sum();
    Ok(PepEstimate::from_counts(errors, trials))
}

/// High-SNR approximation of the pairwise error probability:
/// `C · ρ^{−NM} · d(x1, x2)^{−N}` with d the chordal product and C the
/// pairwise-error constant for the pair's dimensions.
pub fn asymptotic_pep(
    x1: &GrassmannPoint,
    x2: &GrassmannPoint,
    n: usize,
    rho: f64,
) -> Result<f64> {
    if x1.ambient_dim() != x2.ambient_dim() || x1.subspace_dim() != x2.subspace_dim() {
        return Err(Error::DimensionMismatch {
            expected: (x1.ambient_dim(), x1.subspace_dim()),
            got: (x2.ambient_dim(), x2.subspace_dim()),
        });
    }
    if n < 1 {
        return Err(Error::DomainError { what: "N", value: n as f64 });
    }
    if !(rho > 0.0) {
        return Err(Error::DomainError { what: "rho", value: rho });
    }
    let product = chordal_product(x1, x2)?;
    if product == 0.0 {
        return Err(Error::IntersectingSubspaces);
    }
    let (t, m) = (x1.ambient_dim(), x1.subspace_dim());
    let nm = (n * m) as f64;
    Ok(union_bound_constant(t, m, n as u32) * rho.powf(-nm) * product.powf(-(n as f64)))
}
