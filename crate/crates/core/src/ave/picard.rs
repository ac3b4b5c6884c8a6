use num_complex::Complex64 as C64;

use super::{AveProblem, IterationReport, Observer, OuterLoop, SolverConfig};
use crate::linear::AlternatingSplitting;
use crate::vecops::norm2;

/// Inexact Picard iteration `A x⁽ᵏ⁺¹⁾ = |x⁽ᵏ⁾| + b` with at most `l_k` splitting sweeps
/// per outer step. The inner loop stops early once
/// `‖r⁽ᵏ⁾ − A s‖₂ ≤ η ‖r⁽ᵏ⁾‖₂` for the correction `s`, `r⁽ᵏ⁾ = |x⁽ᵏ⁾| + b − A x⁽ᵏ⁾`.
///
/// With `residual_form` the sweeps act on the correction directly (starting from 0);
/// otherwise they act on the iterate (starting from `x⁽ᵏ⁾`).
pub(super) fn run<S: AlternatingSplitting>(
    p: &AveProblem,
    split: &S,
    cfg: &SolverConfig,
    x0: &[C64],
    residual_form: bool,
    observer: Observer<'_>,
) -> (Vec<C64>, IterationReport) {
    let a = p.matrix();
    let mut x = x0.to_vec();
    let mut outer = OuterLoop::new(p, cfg, &x);

    while outer.keep_going() {
        let r = p.residual_vector(&x);
        let rnorm = norm2(&r);
        let mut sweeps = 0;
        if rnorm > 0.0 {
            if residual_form {
                let mut s = vec![C64::new(0.0, 0.0); x.len()];
                while sweeps < cfg.inner_maxit {
                    s = split.sweep(&s, &r);
                    sweeps += 1;
                    let as_ = a.matvec(&s).expect("dimension checked");
                    let inner: f64 = r
                        .iter()
                        .zip(&as_)
                        .map(|(ri, ai)| (ri - ai).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    if inner <= cfg.inner_tol * rnorm {
                        break;
                    }
                }
                for (xi, si) in x.iter_mut().zip(&s) {
                    *xi += si;
                }
            } else {
                let rhs: Vec<C64> = x
                    .iter()
                    .zip(p.rhs())
                    .map(|(xi, bi)| xi.norm() + bi)
                    .collect();
                let mut y = x.clone();
                while sweeps < cfg.inner_maxit {
                    y = split.sweep(&y, &rhs);
                    sweeps += 1;
                    let ay = a.matvec(&y).expect("dimension checked");
                    let inner: f64 = rhs
                        .iter()
                        .zip(&ay)
                        .map(|(fi, ai)| (fi - ai).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    if inner <= cfg.inner_tol * rnorm {
                        break;
                    }
                }
                x = y;
            }
        }
        observer(&x);
        outer.record(&x, sweeps);
    }
    (x, outer.finish(true))
}
