//! Exact partial-fraction coefficients behind the general-M density.
//!
//! The moment function factors over the poles of
//!
//! ```text
//! D(x) = ∏_{m=1}^{M} (x−m)^m · ∏_{m=1}^{M−1} (x−M−m)^{M−m},
//! ```
//!
//! a degree-M² polynomial with integer roots, via
//! `1/D(x) = Σ_{m,l} A_{ml}/(x−m)^l + Σ_{m,l} B_{ml}/(x−M−m)^l`.
//! Clearing denominators turns this into a polynomial identity whose
//! coefficients give a square M² x M² linear system; the system is solved in
//! exact rational arithmetic because it is Vandermonde-like and becomes
//! ill-conditioned in floating point as M grows.

use super::dd::Dd;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Dense polynomial with rational coefficients, ascending degree order.
#[derive(Debug, Clone, PartialEq)]
struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    fn one() -> Self {
        RatPoly { coeffs: vec![BigRational::one()] }
    }

    /// (x − root)^power
    fn linear_power(root: i64, power: usize) -> Self {
        let linear = RatPoly {
            coeffs: vec![BigRational::from_integer(BigInt::from(-root)), BigRational::one()],
        };
        let mut result = RatPoly::one();
        for _ in 0..power {
            result = result.mul(&linear);
        }
        result
    }

    fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn mul(&self, other: &RatPoly) -> RatPoly {
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly { coeffs }
    }
}

/// Gaussian elimination over the rationals; the caller guarantees regularity.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()))
            .expect("nonempty remainder");
        assert!(!a[pivot_row][col].is_zero(), "coefficient system is singular");
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &a[col][col];
            for k in col..n {
                let delta = &factor * &a[col][k];
                a[row][k] -= delta;
            }
            let delta = &factor * &b[col];
            b[row] -= delta;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in (row + 1)..n {
            acc -= &a[row][k] * &x[k];
        }
        x[row] = acc / &a[row][row];
    }
    x
}

/// The exact coefficient tables of the degree-M² partial-fraction
/// decomposition, shared by the general density and distribution evaluators.
///
/// `A_{ml}` is indexed by m = 1..M, l = 1..m and `B_{ml}` by m = 1..M−1,
/// l = 1..M−m; the tables hold M² entries in total. Coefficients depend only
/// on M, so models are cached per M and shared.
#[derive(Debug)]
pub struct PdfModel {
    m: usize,
    coeffs_a: Vec<Vec<BigRational>>,
    coeffs_b: Vec<Vec<BigRational>>,
    scaled_a: Vec<Vec<Dd>>,
    scaled_b: Vec<Vec<Dd>>,
}

impl PdfModel {
    fn build(m_dim: usize) -> PdfModel {
        assert!(m_dim >= 1, "subspace dimension must be at least 1");
        let n = m_dim * m_dim;

        // columns: A_{ml} in (m, l) order, then B_{ml}
        let mut columns: Vec<RatPoly> = Vec::with_capacity(n);
        for m in 1..=m_dim {
            for l in 1..=m {
                let mut p = RatPoly::linear_power(m as i64, m - l);
                for i in 1..=m_dim {
                    if i != m {
                        p = p.mul(&RatPoly::linear_power(i as i64, i));
                    }
                }
                for i in 1..m_dim {
                    p = p.mul(&RatPoly::linear_power((m_dim + i) as i64, m_dim - i));
                }
                columns.push(p);
            }
        }
        for m in 1..m_dim {
            for l in 1..=(m_dim - m) {
                let mut p = RatPoly::linear_power((m_dim + m) as i64, m_dim - m - l);
                for i in 1..=m_dim {
                    p = p.mul(&RatPoly::linear_power(i as i64, i));
                }
                for i in 1..m_dim {
                    if i != m {
                        p = p.mul(&RatPoly::linear_power((m_dim + i) as i64, m_dim - i));
                    }
                }
                columns.push(p);
            }
        }
        debug_assert_eq!(columns.len(), n);
        debug_assert!(columns.iter().all(|p| p.degree() <= n - 1));

        let matrix: Vec<Vec<BigRational>> = (0..n)
            .map(|row| columns.iter().map(|p| p.coeff(row)).collect())
            .collect();
        let mut rhs = vec![BigRational::zero(); n];
        rhs[0] = BigRational::one();
        let solution = solve_exact(matrix, rhs);

        let mut coeffs_a = Vec::with_capacity(m_dim);
        let mut iter = solution.into_iter();
        for m in 1..=m_dim {
            coeffs_a.push((&mut iter).take(m).collect::<Vec<_>>());
        }
        let mut coeffs_b = Vec::with_capacity(m_dim.saturating_sub(1));
        for m in 1..m_dim {
            coeffs_b.push((&mut iter).take(m_dim - m).collect::<Vec<_>>());
        }

        let scale = |table: &Vec<Vec<BigRational>>| -> Vec<Vec<Dd>> {
            table
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .map(|(l0, c)| Dd::from_rational(&(c * &sign_over_factorial(l0))))
                        .collect()
                })
                .collect()
        };
        let scaled_a = scale(&coeffs_a);
        let scaled_b = scale(&coeffs_b);
        PdfModel { m: m_dim, coeffs_a, coeffs_b, scaled_a, scaled_b }
    }

    /// The subspace dimension M the model was built for.
    pub fn subspace_dim(&self) -> usize {
        self.m
    }

    /// A_{ml} for 1 <= l <= m <= M.
    pub fn coeff_a(&self, m: usize, l: usize) -> &BigRational {
        &self.coeffs_a[m - 1][l - 1]
    }

    /// B_{ml} for 1 <= m <= M−1, 1 <= l <= M−m.
    pub fn coeff_b(&self, m: usize, l: usize) -> &BigRational {
        &self.coeffs_b[m - 1][l - 1]
    }

    /// Total number of stored coefficients; always M².
    pub fn coefficient_count(&self) -> usize {
        self.coeffs_a.iter().map(Vec::len).sum::<usize>()
            + self.coeffs_b.iter().map(Vec::len).sum::<usize>()
    }

    /// Exact prefactor `(T−M)^M ∏_{m=1}^{M−1} (T−m)^m (T−M−m)^{M−m}` of the
    /// assembled density.
    pub fn prefactor(&self, t: usize) -> Result<BigRational> {
        if 2 * self.m > t {
            return Err(Error::InvalidDimensions { t, m: self.m });
        }
        let mut value = BigInt::from((t - self.m) as i64).pow(self.m as u32);
        for m in 1..self.m {
            value *= BigInt::from((t - m) as i64).pow(m as u32);
            value *= BigInt::from((t - self.m - m) as i64).pow((self.m - m) as u32);
        }
        Ok(BigRational::from_integer(value))
    }

    /// A_{ml}·(−1)^{l−1}/(l−1)! rounded to a double-double, ready for the
    /// evaluator's term sum.
    pub(crate) fn scaled_a(&self, m: usize, l: usize) -> Dd {
        self.scaled_a[m - 1][l - 1]
    }

    pub(crate) fn scaled_b(&self, m: usize, l: usize) -> Dd {
        self.scaled_b[m - 1][l - 1]
    }
}

/// (−1)^{l−1}/(l−1)! for the 0-based log power `l0` = l − 1.
fn sign_over_factorial(l0: usize) -> BigRational {
    let mut factorial = BigInt::one();
    for k in 1..=l0 {
        factorial *= BigInt::from(k);
    }
    let sign = if l0 % 2 == 0 { 1 } else { -1 };
    BigRational::new(BigInt::from(sign), factorial)
}

/// Solves (or retrieves from the per-M cache) the coefficient tables for M.
pub fn partial_fraction_coeffs(m: usize) -> Arc<PdfModel> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PdfModel>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("pdf model cache poisoned");
    guard.entry(m).or_insert_with(|| Arc::new(PdfModel::build(m))).clone()
}
