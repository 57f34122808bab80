//! Seeded, splittable random streams for reproducible Monte-Carlo runs.
//!
//! Every stochastic routine in this crate takes either an explicit generator
//! or a `(seed, stream)` pair. ChaCha streams make parallel shards
//! reproducible independently of scheduling: shard `i` of a run with a given
//! seed always consumes stream `i`.

use crate::{C64, CMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// The generator used by simulations and samplers.
pub type SimRng = ChaCha8Rng;

/// Generator for shard `stream` of the run identified by `seed`.
pub fn shard_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One draw from the standard complex Gaussian CN(0, 1): real and imaginary
/// parts independent N(0, 1/2), so that E|z|² = 1.
pub fn standard_complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    const HALF_SQRT: f64 = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * HALF_SQRT, im * HALF_SQRT)
}

/// Matrix with i.i.d. CN(0, 1) entries, filled in column-major order.
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| standard_complex_gaussian(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shards_are_reproducible_and_distinct() {
        let a: Vec<u64> = shard_rng(7, 0).random_iter().take(4).collect();
        let b: Vec<u64> = shard_rng(7, 0).random_iter().take(4).collect();
        let c: Vec<u64> = shard_rng(7, 1).random_iter().take(4).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn complex_gaussian_has_unit_power() {
        let mut rng = shard_rng(0, 0);
        let n = 200_000;
        let mean_sq: f64 = (0..n)
            .map(|_| standard_complex_gaussian(&mut rng).norm_sqr())
            .sum::<f64>()
            / n as f64;
        // E|z|^2 = 1, var |z|^2 = 1, so 3 sigma is 3/sqrt(n)
        assert!((mean_sq - 1.0).abs() < 3.0 / (n as f64).sqrt());
    }
}
