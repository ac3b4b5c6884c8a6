//! Structured solvers for absolute value equations `A x − |x| = b` with a
//! non-Hermitian Toeplitz coefficient matrix.
//!
//! The coefficient matrix is split into circulant and skew-circulant parts,
//! `A = C + S`. Both parts are diagonalized by (scaled) discrete Fourier
//! transforms, so every shifted solve `(σI + C)⁻¹` and `(σI + S)⁻¹` costs
//! O(n log n). On top of that the crate provides
//!
//! * the Picard-CSCS and nonlinear CSCS-like iterations plus their
//!   residual-updating forms ([`ave`]),
//! * Picard-HSS, HSS-like and generalized-Newton baselines,
//! * iteration-parameter selection ([`params`]),
//! * smoothing-function diagnostics for the local convergence theory ([`smoothing`]),
//! * the two benchmark problem families ([`problems`]) and an experiment runner ([`bench`]).

// `!(x > 0.0)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ave;
pub mod bench;
pub mod dense;
pub mod error;
pub mod linear;
pub mod params;
pub mod problems;
pub mod smoothing;
pub mod spectrum;
pub mod toeplitz;
pub mod vecops;

pub use ave::{AveProblem, IterationReport, Method, SolverConfig};
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use spectrum::{CirculantSpectrum, SkewCirculantSpectrum};
pub use toeplitz::ToeplitzMatrix;

pub use num_complex::Complex64 as C64;
