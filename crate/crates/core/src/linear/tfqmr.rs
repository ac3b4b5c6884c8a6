use num_complex::Complex64 as C64;

use super::{relative_residual, LinearOperator, LinearSolveReport};
use crate::error::{Error, Result};
use crate::vecops::{axpy, dot, norm2};

/// Transpose-free QMR. One iteration costs two operator applications;
/// `maxit` counts iterations.
///
/// A breakdown (`ρ = 0` or `r̃ᴴv = 0`) ends the solve with `converged = false`.
pub fn tfqmr<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[C64],
    tol: f64,
    maxit: usize,
    x0: &[C64],
) -> Result<(Vec<C64>, LinearSolveReport)> {
    let n = op.dim();
    for len in [b.len(), x0.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    let bnorm = norm2(b);
    let zero = C64::new(0.0, 0.0);
    if bnorm == 0.0 {
        return Ok((
            vec![zero; n],
            LinearSolveReport {
                iterations: 0,
                residual: 0.0,
                converged: true,
            },
        ));
    }

    let mut x = x0.to_vec();
    let ax = op.apply(&x);
    let r: Vec<C64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut res = norm2(&r) / bnorm;
    if res <= tol {
        return Ok((
            x,
            LinearSolveReport {
                iterations: 0,
                residual: res,
                converged: true,
            },
        ));
    }

    let rtilde = r.clone();
    let mut w = r.clone();
    let mut y1 = r.clone();
    let mut y2 = vec![zero; n];
    let mut u1 = op.apply(&y1);
    let mut u2 = vec![zero; n];
    let mut v = u1.clone();
    let mut d = vec![zero; n];
    let mut theta = 0.0f64;
    let mut eta = zero;
    let mut tau = norm2(&r);
    let mut rho = dot(&rtilde, &r);
    let errtol = tol * bnorm;

    let mut k = 0;
    while k < maxit {
        k += 1;
        let sigma = dot(&rtilde, &v);
        if sigma.norm() == 0.0 || rho.norm() == 0.0 {
            break;
        }
        let alpha = rho / sigma;
        for j in 1..=2 {
            if j == 2 {
                y2 = y1.iter().zip(&v).map(|(a, vi)| a - alpha * vi).collect();
                u2 = op.apply(&y2);
            }
            let m = 2 * k - 2 + j;
            let (yj, uj) = if j == 1 { (&y1, &u1) } else { (&y2, &u2) };
            axpy(-alpha, uj, &mut w);
            let coef = theta * theta * eta / alpha;
            for (di, yi) in d.iter_mut().zip(yj) {
                *di = yi + coef * *di;
            }
            theta = norm2(&w) / tau;
            let cth = 1.0 / (1.0 + theta * theta).sqrt();
            tau *= theta * cth;
            eta = C64::new(cth * cth, 0.0) * alpha;
            axpy(eta, &d, &mut x);
            if tau * ((m + 1) as f64).sqrt() <= errtol {
                res = relative_residual(op, &x, b);
                if res <= tol {
                    return Ok((
                        x,
                        LinearSolveReport {
                            iterations: k,
                            residual: res,
                            converged: true,
                        },
                    ));
                }
            }
        }
        let rho_new = dot(&rtilde, &w);
        let beta = rho_new / rho;
        rho = rho_new;
        y1 = w.iter().zip(&y2).map(|(wi, yi)| wi + beta * yi).collect();
        u1 = op.apply(&y1);
        v = u1
            .iter()
            .zip(&u2)
            .zip(&v)
            .map(|((a, b2), vi)| a + beta * (b2 + beta * vi))
            .collect();
    }
    res = relative_residual(op, &x, b);
    Ok((
        x,
        LinearSolveReport {
            iterations: k,
            residual: res,
            converged: res <= tol,
        },
    ))
}
