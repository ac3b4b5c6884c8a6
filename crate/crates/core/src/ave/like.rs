use num_complex::Complex64 as C64;

use super::{AveProblem, IterationReport, Observer, OuterLoop, SolverConfig};
use crate::linear::AlternatingSplitting;

fn abs_plus(x: &[C64], b: &[C64]) -> Vec<C64> {
    x.iter().zip(b).map(|(xi, bi)| xi.norm() + bi).collect()
}

/// One-step nonlinear splitting iteration: both half-steps refresh `|x|`.
///
/// The residual form computes the same iterates as
/// `x½ = x + (σI + P)⁻¹ (|x| + b − A x)`, `x⁺ = x½ + (σI + Q)⁻¹ (|x½| + b − A x½)`.
pub(super) fn run<S: AlternatingSplitting>(
    p: &AveProblem,
    split: &S,
    cfg: &SolverConfig,
    x0: &[C64],
    residual_form: bool,
    observer: Observer<'_>,
) -> (Vec<C64>, IterationReport) {
    let b = p.rhs();
    let mut x = x0.to_vec();
    let mut outer = OuterLoop::new(p, cfg, &x);

    while outer.keep_going() {
        if residual_form {
            let mut r = p.residual_vector(&x);
            split.solve_first(&mut r);
            let half: Vec<C64> = x.iter().zip(&r).map(|(a, c)| a + c).collect();
            let mut r = p.residual_vector(&half);
            split.solve_second(&mut r);
            x = half.iter().zip(&r).map(|(a, c)| a + c).collect();
        } else {
            let half = split.first_half(&x, &abs_plus(&x, b));
            x = split.second_half(&half, &abs_plus(&half, b));
        }
        observer(&x);
        outer.record(&x, 0);
    }
    (x, outer.finish(false))
}
