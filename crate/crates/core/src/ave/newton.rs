use num_complex::Complex64 as C64;

use super::{AveProblem, IterationReport, Observer, OuterLoop, SolverConfig};
use crate::error::Result;
use crate::linear::{gmres_restarted, tfqmr, LinearOperator};
use crate::toeplitz::ToeplitzMatrix;

/// Moduli at or below this are treated as zero by [`complex_sign`].
pub const SIGN_ZERO_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KrylovMethod {
    Gmres,
    Tfqmr,
}

/// `z / |z|`, or 0 when `|z| ≤ SIGN_ZERO_TOL`.
pub fn complex_sign(z: C64) -> C64 {
    let m = z.norm();
    if m <= SIGN_ZERO_TOL {
        C64::new(0.0, 0.0)
    } else {
        z / m
    }
}

/// `J = A − diag(d)`, applied matrix-free.
struct ToeplitzMinusDiagonal<'a> {
    a: &'a ToeplitzMatrix,
    diag: Vec<C64>,
}

impl LinearOperator for ToeplitzMinusDiagonal<'_> {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = self.a.matvec(x).expect("dimension checked");
        for ((yi, di), xi) in y.iter_mut().zip(&self.diag).zip(x) {
            *yi -= di * xi;
        }
        y
    }
}

/// How each generalized-Newton step is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NewtonStep {
    /// `J x⁽ᵏ⁺¹⁾ = b`, Krylov warm-started at `x⁽ᵏ⁾`, relative tolerance w.r.t. `‖b‖`.
    /// The outer residual cannot fall much below the inner tolerance.
    #[default]
    Direct,
    /// `J s = |x⁽ᵏ⁾| + b − A x⁽ᵏ⁾` from `s = 0`, then `x⁽ᵏ⁺¹⁾ = x⁽ᵏ⁾ + s`
    /// (inexact Newton with a fixed forcing term).
    Correction,
}

/// `x⁽ᵏ⁺¹⁾ = (A − diag(sign(x⁽ᵏ⁾)))⁻¹ b` with Krylov inner solves. Both step forms
/// give the same exact step since `sign(x) x = |x|`.
pub(super) fn run(
    p: &AveProblem,
    cfg: &SolverConfig,
    inner: KrylovMethod,
    x0: &[C64],
    observer: Observer<'_>,
) -> Result<(Vec<C64>, IterationReport)> {
    let mut x = x0.to_vec();
    let zero = vec![C64::new(0.0, 0.0); x.len()];
    let mut outer = OuterLoop::new(p, cfg, &x);
    while outer.keep_going() {
        let op = ToeplitzMinusDiagonal {
            a: p.matrix(),
            diag: x.iter().map(|&v| complex_sign(v)).collect(),
        };
        let (rhs, start) = match cfg.newton_step {
            NewtonStep::Direct => (p.rhs().to_vec(), x.as_slice()),
            NewtonStep::Correction => (p.residual_vector(&x), zero.as_slice()),
        };
        let (y, rep) = match inner {
            KrylovMethod::Gmres => gmres_restarted(
                &op,
                &rhs,
                cfg.gmres_restart,
                cfg.inner_krylov_tol,
                cfg.inner_krylov_maxit,
                start,
            )?,
            KrylovMethod::Tfqmr => tfqmr(
                &op,
                &rhs,
                cfg.inner_krylov_tol,
                cfg.inner_krylov_maxit,
                start,
            )?,
        };
        if !rep.converged {
            log::debug!(
                "generalized Newton inner solve stopped at residual {:e}",
                rep.residual
            );
        }
        match cfg.newton_step {
            NewtonStep::Direct => x = y,
            NewtonStep::Correction => {
                for (xi, si) in x.iter_mut().zip(&y) {
                    *xi += si;
                }
            }
        }
        observer(&x);
        outer.record(&x, rep.iterations);
    }
    Ok((x, outer.finish(true)))
}
