use num_complex::Complex64 as C64;

use super::{relative_residual, AlternatingSplitting, CscsSplitting, LinearSolveReport};
use crate::dense::{
    check_cap, dense_circulant, dense_skew_circulant, DenseMatrix, DEFAULT_DENSE_CAP,
};
use crate::error::{Error, Result};
use crate::toeplitz::ToeplitzMatrix;
use crate::vecops::norm2;

/// Stationary iterations stop with [`Error::Diverged`] once the residual grows by this factor.
pub const DIVERGENCE_FACTOR: f64 = 1e8;

/// Solve `A x = b` with the CSCS iteration.
pub fn cscs_solve(
    a: &ToeplitzMatrix,
    b: &[C64],
    sigma: f64,
    tol: f64,
    maxit: usize,
    x0: &[C64],
) -> Result<(Vec<C64>, LinearSolveReport)> {
    let split = CscsSplitting::new(a, sigma)?;
    stationary_solve(&split, a, b, tol, maxit, x0)
}

/// Alternating-splitting stationary iteration for `A x = b`.
pub fn stationary_solve<S: AlternatingSplitting>(
    split: &S,
    a: &ToeplitzMatrix,
    b: &[C64],
    tol: f64,
    maxit: usize,
    x0: &[C64],
) -> Result<(Vec<C64>, LinearSolveReport)> {
    let n = a.dim();
    for len in [b.len(), x0.len(), split.dim()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    if norm2(b) == 0.0 {
        let x = vec![C64::new(0.0, 0.0); n];
        return Ok((
            x,
            LinearSolveReport {
                iterations: 0,
                residual: 0.0,
                converged: true,
            },
        ));
    }
    let mut x = x0.to_vec();
    let r0 = relative_residual(a, &x, b);
    let mut res = r0;
    let mut it = 0;
    while res > tol && it < maxit {
        x = split.sweep(&x, b);
        it += 1;
        res = relative_residual(a, &x, b);
        if !res.is_finite() || res > DIVERGENCE_FACTOR * r0.max(f64::MIN_POSITIVE) {
            return Err(Error::Diverged {
                iterations: it,
                residual: res,
            });
        }
    }
    Ok((
        x,
        LinearSolveReport {
            iterations: it,
            residual: res,
            converged: res <= tol,
        },
    ))
}

fn dense_parts(a: &ToeplitzMatrix, cap: usize) -> Result<(DenseMatrix, DenseMatrix)> {
    check_cap(a.dim(), cap)?;
    let (c, s) = a.cscs_split();
    Ok((dense_circulant(&c), dense_skew_circulant(&s)))
}

/// Dense `M(σ) = (σI + S)⁻¹ (σI − C) (σI + C)⁻¹ (σI − S)`.
pub fn iteration_matrix_dense(a: &ToeplitzMatrix, sigma: f64) -> Result<DenseMatrix> {
    Ok(sweep_affine_dense(a, sigma)?.0)
}

/// Dense `(M(σ), G(σ))` with one CSCS sweep equal to `x ↦ M x + G b`,
/// `G(σ) = 2σ (σI + S)⁻¹ (σI + C)⁻¹`.
pub fn sweep_affine_dense(a: &ToeplitzMatrix, sigma: f64) -> Result<(DenseMatrix, DenseMatrix)> {
    if !(sigma > 0.0) {
        return Err(Error::NonPositiveSigma(sigma));
    }
    let (c, s) = dense_parts(a, DEFAULT_DENSE_CAP)?;
    let shift = C64::new(sigma, 0.0);
    let c_plus_inv = c.shifted(shift).inverse()?;
    let s_plus_inv = s.shifted(shift).inverse()?;
    let c_minus = c.scale(C64::new(-1.0, 0.0)).shifted(shift);
    let s_minus = s.scale(C64::new(-1.0, 0.0)).shifted(shift);
    let m = s_plus_inv
        .matmul(&c_minus)
        .matmul(&c_plus_inv)
        .matmul(&s_minus);
    let g = s_plus_inv
        .matmul(&c_plus_inv)
        .scale(C64::new(2.0 * sigma, 0.0));
    Ok((m, g))
}
