//! Coding-theoretic bounds: Gilbert–Varshamov guarantees, the expected energy
//! of random codes, and the high-SNR union bound on decoding error.
//!
//! The Gilbert–Varshamov direction converts between a code cardinality K and
//! the guaranteed minimum pairwise chordal product δ through the distribution
//! function of the chordal product. The union bound combines a code's energy
//! with the asymptotic pairwise error constant
//! `C = ½ (4M/T)^{NM} (2NM−1)!!/(2NM)!!`.

use crate::density::{cdf_eval, invert_cdf};
use crate::{Error, Result};

/// Parameters of a union-bound evaluation: dimensions (T, M), receive
/// antennas N, cardinality K, and linear-scale SNR ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnionBoundQuery {
    t: usize,
    m: usize,
    n: u32,
    k: u64,
    rho: f64,
}

impl UnionBoundQuery {
    pub fn new(t: usize, m: usize, n: u32, k: u64, rho: f64) -> Result<Self> {
        if m < 1 || 2 * m > t {
            return Err(Error::InvalidDimensions { t, m });
        }
        if n < 1 {
            return Err(Error::DomainError { what: "N", value: n as f64 });
        }
        if k < 2 {
            return Err(Error::InvalidCardinality { k: k as usize });
        }
        if !(rho > 0.0) {
            return Err(Error::DomainError { what: "rho", value: rho });
        }
        Ok(Self { t, m, n, k, rho })
    }

    pub fn ambient_dim(&self) -> usize {
        self.t
    }

    pub fn subspace_dim(&self) -> usize {
        self.m
    }

    pub fn receive_antennas(&self) -> u32 {
        self.n
    }

    pub fn cardinality(&self) -> u64 {
        self.k
    }

    pub fn snr(&self) -> f64 {
        self.rho
    }
}

/// Largest δ such that a K-point code with minimum pairwise chordal product
/// at least δ is guaranteed to exist: the solution of F_M(δ; T) = 1/K.
pub fn gv_min_product(t: usize, m: usize, k: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidCardinality { k: k as usize });
    }
    invert_cdf(m, t, 1.0 / k as f64)
}

/// Cardinality guaranteed achievable with minimum pairwise chordal product δ:
/// ⌈1 / F_M(δ; T)⌉.
///
/// The guarantee holds for any K at least 1/F_M(δ;T); the ceiling is the
/// tightest integer form of that claim.
pub fn gv_min_cardinality(t: usize, m: usize, delta: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::DomainError { what: "delta", value: delta });
    }
    let mass = cdf_eval(m, t, delta)?;
    let k = (1.0 / mass).ceil();
    if !k.is_finite() || k > u64::MAX as f64 {
        return Err(Error::DomainError { what: "delta", value: delta });
    }
    Ok(k as u64)
}

/// Expected chordal product energy of K independent uniform points:
/// `K(K−1) ∏_{m=1}^{M} (T−m)!(T−N−m−M)! / ((T−m−M)!(T−N−m)!)`,
/// finite exactly when N <= T − 2M.
pub fn expected_random_energy(t: usize, m: usize, n: u32, k: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidCardinality { k: k as usize });
    }
    if m < 1 || 2 * m > t {
        return Err(Error::InvalidDimensions { t, m });
    }
    if n < 1 {
        return Err(Error::DomainError { what: "N", value: n as f64 });
    }
    if n as usize > t - 2 * m {
        return Err(Error::MomentDiverges {
            p: -(n as f64),
            boundary: 2.0 * m as f64 - t as f64 - 1.0,
        });
    }
    let (t, n) = (t as f64, n as f64);
    let mut log_product = 0.0;
    for i in 1..=m {
        let i = i as f64;
        let md = m as f64;
        log_product += libm::lgamma(t - i + 1.0) + libm::lgamma(t - n - i - md + 1.0)
            - libm::lgamma(t - i - md + 1.0)
            - libm::lgamma(t - n - i + 1.0);
    }
    Ok((k * (k - 1)) as f64 * log_product.exp())
}

/// The pairwise-error constant `C = ½ (4M/T)^{NM} (2NM−1)!!/(2NM)!!`,
/// evaluated in log domain; the double-factorial ratio is the central
/// binomial form `C(2k, k)/4^k` with k = NM.
pub fn union_bound_constant(t: usize, m: usize, n: u32) -> f64 {
    let k = (n as u64 * m as u64) as f64;
    let ln_ratio =
        libm::lgamma(2.0 * k + 1.0) - 2.0 * libm::lgamma(k + 1.0) - k * 4f64.ln();
    0.5 * (k * (4.0 * m as f64 / t as f64).ln() + ln_ratio).exp()
}

/// Union bound on the block error probability at SNR ρ:
/// `(C/K) · ρ^{−NM} · energy`, where `energy` is the chordal product energy
/// sum of the code (or its expectation for random codes).
pub fn union_bound(q: &UnionBoundQuery, energy: f64) -> Result<f64> {
    if !(energy >= 0.0) {
        return Err(Error::DomainError { what: "energy", value: energy });
    }
    let nm = q.n as f64 * q.m as f64;
    let c = union_bound_constant(q.t, q.m, q.n);
    Ok(c / q.k as f64 * q.rho.powf(-nm) * energy)
}
