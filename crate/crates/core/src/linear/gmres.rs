use num_complex::Complex64 as C64;

use super::{relative_residual, LinearOperator, LinearSolveReport};
use crate::error::{Error, Result};
use crate::vecops::{axpy, dot, norm2};

/// Loss of orthogonality that triggers a second Gram-Schmidt pass.
pub const REORTH_THRESHOLD: f64 = 1e-8;

const BREAKDOWN_TOL: f64 = 1e-14;

fn givens(a: C64, b: C64) -> (f64, C64) {
    let an = a.norm();
    let denom = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if denom == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    (an / denom, (a / an) * b.conj() / denom)
}

fn rotate(c: f64, s: C64, x: C64, y: C64) -> (C64, C64) {
    (c * x + s * y, -s.conj() * x + c * y)
}

/// Restarted GMRES(m) with modified Gram-Schmidt Arnoldi.
///
/// `maxit` bounds the total number of Arnoldi steps across restarts.
pub fn gmres_restarted<A: LinearOperator + ?Sized>(
    op: &A,
    b: &[C64],
    m: usize,
    tol: f64,
    maxit: usize,
    x0: &[C64],
) -> Result<(Vec<C64>, LinearSolveReport)> {
    let n = op.dim();
    if m == 0 {
        return Err(Error::InvalidParameter(
            "GMRES restart length must be at least 1".into(),
        ));
    }
    for len in [b.len(), x0.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    let bnorm = norm2(b);
    if bnorm == 0.0 {
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
    let m = m.min(n.max(1));

    let mut x = x0.to_vec();
    let mut res = relative_residual(op, &x, b);
    let mut best = (x.clone(), res);
    let mut total = 0usize;

    while res > tol && total < maxit {
        let ax = op.apply(&x);
        let r: Vec<C64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm2(&r);
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        // column-major Hessenberg: h[j] holds column j (length j + 2)
        let mut h: Vec<Vec<C64>> = Vec::with_capacity(m);
        let mut rot: Vec<(f64, C64)> = Vec::with_capacity(m);
        let mut g = vec![C64::new(0.0, 0.0); m + 1];
        g[0] = C64::new(beta, 0.0);
        let mut k = 0;
        let mut breakdown = false;

        for j in 0..m {
            total += 1;
            let mut w = op.apply(&basis[j]);
            let mut col = vec![C64::new(0.0, 0.0); j + 2];
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(v, &w);
                col[i] = hij;
                axpy(-hij, v, &mut w);
            }
            let mut wn = norm2(&w);
            if wn > 0.0 {
                let loss = basis
                    .iter()
                    .map(|v| dot(v, &w).norm() / wn)
                    .fold(0.0, f64::max);
                if loss > REORTH_THRESHOLD {
                    for (i, v) in basis.iter().enumerate() {
                        let corr = dot(v, &w);
                        col[i] += corr;
                        axpy(-corr, v, &mut w);
                    }
                    wn = norm2(&w);
                }
            }
            col[j + 1] = C64::new(wn, 0.0);
            for (i, &(c, s)) in rot.iter().enumerate() {
                let (p, q) = rotate(c, s, col[i], col[i + 1]);
                col[i] = p;
                col[i + 1] = q;
            }
            let (c, s) = givens(col[j], col[j + 1]);
            let (p, _) = rotate(c, s, col[j], col[j + 1]);
            col[j] = p;
            col[j + 1] = C64::new(0.0, 0.0);
            let (gj, gj1) = rotate(c, s, g[j], g[j + 1]);
            g[j] = gj;
            g[j + 1] = gj1;
            rot.push((c, s));
            h.push(col);
            k = j + 1;

            let est = g[j + 1].norm() / bnorm;
            if wn <= BREAKDOWN_TOL * beta {
                breakdown = true;
                break;
            }
            if est <= tol || total >= maxit {
                break;
            }
            basis.push(w.iter().map(|v| v / wn).collect());
        }

        // back substitution on the k × k triangle
        let mut y = vec![C64::new(0.0, 0.0); k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for jj in (i + 1)..k {
                s -= h[jj][i] * y[jj];
            }
            y[i] = s / h[i][i];
        }
        for (yi, v) in y.iter().zip(&basis) {
            axpy(*yi, v, &mut x);
        }
        res = relative_residual(op, &x, b);
        if res < best.1 {
            best = (x.clone(), res);
        }
        if breakdown && res > tol {
            // invariant subspace reached without solving: the system is singular on it
            break;
        }
    }

    let (x, res) = best;
    Ok((
        x,
        LinearSolveReport {
            iterations: total,
            residual: res,
            converged: res <= tol,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_in_one_step() {
        let id = DenseMatrix::identity(8);
        let b: Vec<C64> = (0..8).map(|k| c(k as f64, 1.0)).collect();
        let (x, rep) = gmres_restarted(&id, &b, 5, 1e-12, 50, &[c(0., 0.); 8]).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterations, 1);
        assert!(x.iter().zip(&b).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn diagonal_exact_within_n_steps() {
        let d: Vec<C64> = (1..=16).map(|k| c(k as f64, 0.)).collect();
        let a = DenseMatrix::from_diagonal(&d);
        let b = vec![c(1., 0.); 16];
        let (x, rep) = gmres_restarted(&a, &b, 16, 1e-12, 16, &vec![c(0., 0.); 16]).unwrap();
        assert!(rep.converged, "{rep:?}");
        assert!(rep.iterations <= 16);
        for (k, v) in x.iter().enumerate() {
            assert!((v - c(1.0 / (k as f64 + 1.0), 0.)).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_restart_rejected() {
        let id = DenseMatrix::identity(2);
        let b = vec![c(1., 0.); 2];
        assert!(gmres_restarted(&id, &b, 0, 1e-8, 10, &b).is_err());
    }
}
