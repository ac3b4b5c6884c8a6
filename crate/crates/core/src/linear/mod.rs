//! Linear-system engines: the stationary CSCS iteration and Krylov solvers.

mod cscs;
mod gmres;
mod splitting;
mod tfqmr;

pub use cscs::{cscs_solve, iteration_matrix_dense, sweep_affine_dense, DIVERGENCE_FACTOR};
pub use gmres::{gmres_restarted, REORTH_THRESHOLD};
pub use splitting::{AlternatingSplitting, CscsSplitting, HssSplitting};
pub use tfqmr::tfqmr;

use num_complex::Complex64 as C64;

use crate::dense::DenseMatrix;
use crate::toeplitz::ToeplitzMatrix;

/// Matrix-free action `x ↦ A x`.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Vec<C64>;
}

impl LinearOperator for ToeplitzMatrix {
    fn dim(&self) -> usize {
        ToeplitzMatrix::dim(self)
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matvec(x)
            .expect("operator applied to a vector of the wrong length")
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        DenseMatrix::dim(self)
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matvec(x)
    }
}

/// Wraps a closure as a [`LinearOperator`].
pub struct FnOperator<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[C64]) -> Vec<C64>> FnOperator<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnOperator { n, f }
    }
}

impl<F: Fn(&[C64]) -> Vec<C64>> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        (self.f)(x)
    }
}

/// Outcome of a linear solve.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolveReport {
    pub iterations: usize,
    /// `‖b − A x‖₂ / ‖b‖₂` of the returned iterate.
    pub residual: f64,
    pub converged: bool,
}

pub(crate) fn relative_residual<A: LinearOperator + ?Sized>(op: &A, x: &[C64], b: &[C64]) -> f64 {
    let ax = op.apply(x);
    let r: f64 = ax
        .iter()
        .zip(b)
        .map(|(a, b)| (b - a).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let bn = crate::vecops::norm2(b);
    if bn == 0.0 {
        r
    } else {
        r / bn
    }
}
