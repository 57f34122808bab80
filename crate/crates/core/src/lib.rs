//! Statistics of the chordal product determinant on the complex Grassmannian.
//!
//! The chordal product of two M-dimensional subspaces of ℂ^T (given by
//! orthonormal representatives `A`, `B`) is `det(I - AᴴB BᴴA)`, the product of
//! the squared sines of their principal angles. This crate implements, at desk
//! scale, the complete statistical theory of that quantity when one subspace is
//! drawn uniformly at random:
//!
//! * [`grassmann`] — subspace representation, principal angles, chordal
//!   products and the pairwise energy of a code;
//! * [`sampling`] — uniform (rotation-invariant) sampling, the affine-chart
//!   parameterization with its matrix-t density, and exact Grassmannian
//!   volumes;
//! * [`moments`] — exact moments of the chordal product and its
//!   characterization as a product of independent beta variables;
//! * [`density`] — closed-form and general-M probability densities and
//!   distribution functions, with exact-rational partial-fraction coefficients;
//! * [`bounds`] — Gilbert-Varshamov existence bounds, expected energy of
//!   random codes, and the high-SNR union-bound machinery;
//! * [`pep`] — Monte-Carlo simulation of the noncoherent block-fading channel,
//!   maximum-likelihood decoding, and pairwise error probabilities;
//! * [`designer`] — a baseline stochastic optimizer producing codes that meet
//!   the Gilbert-Varshamov threshold;
//! * [`codefile`] — the JSON interchange format for codes.
//!
//! All operations are pure and thread-safe; randomized operations take an
//! explicit generator or seed so that results are reproducible.

pub mod bounds;
pub mod codefile;
pub mod density;
pub mod designer;
mod error;
pub mod grassmann;
pub mod moments;
pub mod pep;
pub mod rng;
pub mod sampling;
mod tolerances;

pub use error::{Error, Result};
pub use tolerances::Tolerances;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
/// Dynamically sized complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
