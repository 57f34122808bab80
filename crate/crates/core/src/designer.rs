//! Stochastic code design: hill climbing on the Grassmannian with random
//! restarts, maximizing the minimum pairwise chordal product or minimizing
//! the chordal product energy.
//!
//! The optimizer is an existence witness for the cardinality guarantees, not
//! a state-of-the-art designer: proposals perturb one point along a random
//! tangent direction with a geometrically decaying step and are accepted only
//! on strict improvement.

use crate::grassmann::{
    chordal_product, code_energy, min_pairwise_product, orthonormalize, Code, GrassmannPoint,
};
use crate::rng::{complex_gaussian_matrix, shard_rng, SimRng};
use crate::sampling::sample_uniform;
use crate::{Error, Result};
use rand::Rng;
use rayon::prelude::*;

/// What the optimizer drives toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Maximize the minimum pairwise chordal product.
    MaxMinProduct,
    /// Minimize the chordal product energy at diversity order N.
    MinEnergy { n: u32 },
}

/// A full optimization request: dimensions, cardinality, objective, and
/// search budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignSpec {
    t: usize,
    m: usize,
    k: usize,
    objective: Objective,
    iterations: u32,
    restarts: u32,
    seed: u64,
}

impl DesignSpec {
    pub fn new(
        t: usize,
        m: usize,
        k: usize,
        objective: Objective,
        iterations: u32,
        restarts: u32,
        seed: u64,
    ) -> Result<Self> {
        if m < 1 || 2 * m > t {
            return Err(Error::InvalidDimensions { t, m });
        }
        if k < 2 {
            return Err(Error::InvalidCardinality { k });
        }
        if iterations < 1 {
            return Err(Error::DomainError { what: "iterations", value: iterations as f64 });
        }
        if restarts < 1 {
            return Err(Error::DomainError { what: "restarts", value: restarts as f64 });
        }
        Ok(Self { t, m, k, objective, iterations, restarts, seed })
    }

    pub fn ambient_dim(&self) -> usize {
        self.t
    }

    pub fn subspace_dim(&self) -> usize {
        self.m
    }

    pub fn cardinality(&self) -> usize {
        self.k
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn iterations(&self) -> u32 {
        self.iterations
    }

    pub fn restarts(&self) -> u32 {
        self.restarts
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

const STEP_START: f64 = 0.5;
const STEP_END: f64 = 1e-3;

fn step_size(iteration: u32, iterations: u32) -> f64 {
    if iterations <= 1 {
        return STEP_START;
    }
    let progress = iteration as f64 / (iterations - 1) as f64;
    STEP_START * (STEP_END / STEP_START).powf(progress)
}

/// Pairwise chordal products as a flat k×k symmetric table; the diagonal is
/// unused and left at 1.
fn pair_products(points: &[GrassmannPoint]) -> Vec<f64> {
    let k = points.len();
    let mut table = vec![1.0; k * k];
    for i in 0..k {
        for j in (i + 1)..k {
            let d = chordal_product(&points[i], &points[j]).expect("points share one space");
            table[i * k + j] = d;
            table[j * k + i] = d;
        }
    }
    table
}

/// Score to maximize. Min-product scores are the minimum itself; energy
/// scores are the negated log-sum-exp of the −N·log d terms, so larger score
/// means smaller energy and configurations with an intersecting pair score
/// −∞ and can never be accepted.
fn score_table(objective: Objective, table: &[f64], k: usize) -> f64 {
    match objective {
        Objective::MaxMinProduct => {
            let mut min = f64::INFINITY;
            for i in 0..k {
                for j in (i + 1)..k {
                    min = min.min(table[i * k + j]);
                }
            }
            min
        }
        Objective::MinEnergy { n } => {
            let mut peak = f64::NEG_INFINITY;
            for i in 0..k {
                for j in (i + 1)..k {
                    peak = peak.max(-(n as f64) * table[i * k + j].ln());
                }
            }
            if peak == f64::INFINITY {
                return f64::NEG_INFINITY;
            }
            let mut sum = 0.0;
            for i in 0..k {
                for j in (i + 1)..k {
                    sum += (-(n as f64) * table[i * k + j].ln() - peak).exp();
                }
            }
            -(peak + sum.ln())
        }
    }
}

fn argmin_pair(table: &[f64], k: usize) -> (usize, usize) {
    let mut best = (0, 1);
    let mut min = f64::INFINITY;
    for i in 0..k {
        for j in (i + 1)..k {
            if table[i * k + j] < min {
                min = table[i * k + j];
                best = (i, j);
            }
        }
    }
    best
}

fn replace_row(table: &mut [f64], k: usize, index: usize, row: &[f64]) {
    for j in 0..k {
        table[index * k + j] = row[j];
        table[j * k + index] = row[j];
    }
}

/// One restart of accept-if-better hill climbing. Returns the final points,
/// their score, and the accepted-score trace across iterations.
fn climb(spec: &DesignSpec, restart: u64) -> (Vec<GrassmannPoint>, f64, Vec<f64>) {
    let mut rng = shard_rng(spec.seed, restart);
    let (mut points, mut table, mut score) = loop {
        let points: Vec<GrassmannPoint> = (0..spec.k)
            .map(|_| sample_uniform(spec.t, spec.m, &mut rng).expect("dims validated"))
            .collect();
        let table = pair_products(&points);
        let score = score_table(spec.objective, &table, spec.k);
        // uniform starts have distinct spans almost surely
        if score > f64::NEG_INFINITY && score_table(Objective::MaxMinProduct, &table, spec.k) > 0.0
        {
            break (points, table, score);
        }
    };
    let mut trace = Vec::with_capacity(spec.iterations as usize + 1);
    trace.push(score);
    let mut candidate_row = vec![1.0; spec.k];
    for iteration in 0..spec.iterations {
        let step = step_size(iteration, spec.iterations);
        let target = match spec.objective {
            Objective::MaxMinProduct => {
                let (i, j) = argmin_pair(&table, spec.k);
                if rng.random::<bool>() {
                    i
                } else {
                    j
                }
            }
            Objective::MinEnergy { .. } => rng.random_range(0..spec.k),
        };
        if let Some((point, row, improved)) =
            propose(spec, &points, &table, score, target, step, &mut candidate_row, &mut rng)
        {
            points[target] = point;
            replace_row(&mut table, spec.k, target, &row);
            score = improved;
        }
        trace.push(score);
    }
    (points, score, trace)
}

/// Try a tangent perturbation of `points[target]` in both directions of one
/// random tangent vector; return the first strict improvement.
#[allow(clippy::too_many_arguments)]
fn propose(
    spec: &DesignSpec,
    points: &[GrassmannPoint],
    table: &[f64],
    score: f64,
    target: usize,
    step: f64,
    candidate_row: &mut [f64],
    rng: &mut SimRng,
) -> Option<(GrassmannPoint, Vec<f64>, f64)> {
    let basis = points[target].basis();
    let gaussian = complex_gaussian_matrix(spec.t, spec.m, rng);
    let tangent = &gaussian - basis * (basis.adjoint() * &gaussian);
    let norm = tangent.norm();
    if norm < 1e-12 {
        return None;
    }
    for direction in [step / norm, -step / norm] {
        let Ok(candidate) = orthonormalize(&(basis + tangent.scale(direction))) else {
            continue;
        };
        for (j, other) in points.iter().enumerate() {
            candidate_row[j] = if j == target {
                1.0
            } else {
                chordal_product(&candidate, other).expect("points share one space")
            };
        }
        let mut shadow = table.to_vec();
        replace_row(&mut shadow, spec.k, target, candidate_row);
        let improved = score_table(spec.objective, &shadow, spec.k);
        if improved > score {
            return Some((candidate, candidate_row.to_vec(), improved));
        }
    }
    None
}

/// Best code found over all restarts, together with the achieved objective
/// value: the minimum pairwise chordal product for `MaxMinProduct`, the
/// chordal product energy for `MinEnergy`. Deterministic given the spec;
/// restart ties resolve to the lowest restart index.
pub fn optimize_code(spec: &DesignSpec) -> (Code, f64) {
    let outcomes: Vec<(f64, Vec<GrassmannPoint>)> = (0..spec.restarts as u64)
        .into_par_iter()
        .map(|restart| {
            let (points, score, _) = climb(spec, restart);
            (score, points)
        })
        .collect();
    let mut best = 0;
    for (index, outcome) in outcomes.iter().enumerate().skip(1) {
        if outcome.0 > outcomes[best].0 {
            best = index;
        }
    }
    let code = Code::new(outcomes.into_iter().nth(best).expect("restarts >= 1").1)
        .expect("climb output satisfies code invariants");
    let value = match spec.objective {
        Objective::MaxMinProduct => min_pairwise_product(&code).0,
        Objective::MinEnergy { n } => code_energy(&code, n).as_f64(),
    };
    (code, value)
}
