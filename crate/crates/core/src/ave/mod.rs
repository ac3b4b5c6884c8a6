//! Iterative solvers for `A x − |x| = b`.
//!
//! All methods share one outer stopping rule: the relative residual
//! `‖A x − |x| − b‖₂ / ‖b‖₂` drops to `outer_tol`, or `outer_maxit` outer
//! steps have been taken. Failing to converge is reported in the
//! [`IterationReport`], never as an error.

mod like;
mod newton;
mod picard;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linear::{CscsSplitting, HssSplitting};
use crate::toeplitz::ToeplitzMatrix;
use crate::vecops::norm2;

pub use newton::{complex_sign, KrylovMethod, NewtonStep, SIGN_ZERO_TOL};

/// Tolerance for the exact-solution invariant of an [`AveProblem`].
pub const EXACT_SOLUTION_TOL: f64 = 1e-12;

/// `|x|` taken entrywise as the complex modulus.
pub fn abs_vec(x: &[C64]) -> Vec<f64> {
    x.iter().map(|v| v.norm()).collect()
}

/// An absolute value equation `A x − |x| = b`.
#[derive(Clone, Debug)]
pub struct AveProblem {
    a: ToeplitzMatrix,
    b: Vec<C64>,
    exact_solution: Option<Vec<C64>>,
}

impl AveProblem {
    pub fn new(a: ToeplitzMatrix, b: Vec<C64>, exact_solution: Option<Vec<C64>>) -> Result<Self> {
        let n = a.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let p = AveProblem {
            a,
            b,
            exact_solution: None,
        };
        if let Some(xs) = exact_solution {
            if xs.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: xs.len(),
                });
            }
            let res = p.residual_or_absolute(&xs);
            if res > EXACT_SOLUTION_TOL {
                return Err(Error::InvalidParameter(format!(
                    "claimed exact solution leaves residual {res:e}"
                )));
            }
            return Ok(AveProblem {
                exact_solution: Some(xs),
                ..p
            });
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn matrix(&self) -> &ToeplitzMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[C64] {
        &self.b
    }

    pub fn exact_solution(&self) -> Option<&[C64]> {
        self.exact_solution.as_deref()
    }

    /// `|x| + b − A x`
    pub fn residual_vector(&self, x: &[C64]) -> Vec<C64> {
        let ax = self.a.matvec(x).expect("iterate has problem dimension");
        ax.iter()
            .zip(x)
            .zip(&self.b)
            .map(|((axi, xi), bi)| xi.norm() + bi - axi)
            .collect()
    }

    /// Relative residual, or the absolute one when `b = 0`.
    pub(crate) fn residual_or_absolute(&self, x: &[C64]) -> f64 {
        let r = norm2(&self.residual_vector(x));
        let bn = norm2(&self.b);
        if bn > 0.0 {
            r / bn
        } else {
            r
        }
    }
}

/// `‖A x − |x| − b‖₂ / ‖b‖₂`.
pub fn ave_residual(p: &AveProblem, x: &[C64]) -> Result<f64> {
    if x.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: x.len(),
        });
    }
    if norm2(&p.b) == 0.0 {
        return Err(Error::ZeroRhs);
    }
    Ok(p.residual_or_absolute(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    PicardCscs,
    PicardCscsResidualUpdate,
    CscsLike,
    CscsLikeResidualUpdate,
    PicardHss,
    HssLike,
    GnGmres,
    GnTfqmr,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::PicardCscs,
        Method::PicardCscsResidualUpdate,
        Method::CscsLike,
        Method::CscsLikeResidualUpdate,
        Method::PicardHss,
        Method::HssLike,
        Method::GnGmres,
        Method::GnTfqmr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::PicardCscs => "picard_cscs",
            Method::PicardCscsResidualUpdate => "picard_cscs_ru",
            Method::CscsLike => "cscs_like",
            Method::CscsLikeResidualUpdate => "cscs_like_ru",
            Method::PicardHss => "picard_hss",
            Method::HssLike => "hss_like",
            Method::GnGmres => "gn_gmres",
            Method::GnTfqmr => "gn_tfqmr",
        }
    }

    pub fn is_hss(self) -> bool {
        matches!(self, Method::PicardHss | Method::HssLike)
    }

    pub fn is_cscs(self) -> bool {
        matches!(
            self,
            Method::PicardCscs
                | Method::PicardCscsResidualUpdate
                | Method::CscsLike
                | Method::CscsLikeResidualUpdate
        )
    }

    pub fn is_newton(self) -> bool {
        matches!(self, Method::GnGmres | Method::GnTfqmr)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub sigma: f64,
    pub outer_tol: f64,
    pub outer_maxit: usize,
    /// Inner tolerance η of the Picard methods.
    pub inner_tol: f64,
    /// Inner sweep cap `l_k` of the Picard methods.
    pub inner_maxit: usize,
    pub method: Method,
    pub gmres_restart: usize,
    /// Relative tolerance of the Krylov solves inside generalized Newton.
    pub inner_krylov_tol: f64,
    /// Iteration cap of each Krylov solve inside generalized Newton.
    pub inner_krylov_maxit: usize,
    pub newton_step: NewtonStep,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            sigma: 1.0,
            outer_tol: 1e-7,
            outer_maxit: 200,
            inner_tol: 0.01,
            inner_maxit: 15,
            method: Method::CscsLike,
            gmres_restart: 5,
            inner_krylov_tol: 0.01,
            inner_krylov_maxit: 100,
            newton_step: NewtonStep::Direct,
        }
    }
}

impl SolverConfig {
    pub fn with_method(method: Method, sigma: f64) -> Self {
        SolverConfig {
            method,
            sigma,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::NonPositiveSigma(self.sigma));
        }
        for (name, v) in [
            ("outer_tol", self.outer_tol),
            ("inner_tol", self.inner_tol),
            ("inner_krylov_tol", self.inner_krylov_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        for (name, v) in [
            ("outer_maxit", self.outer_maxit),
            ("inner_maxit", self.inner_maxit),
            ("gmres_restart", self.gmres_restart),
            ("inner_krylov_maxit", self.inner_krylov_maxit),
        ] {
            if v == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be at least 1"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationReport {
    pub it_out: usize,
    pub it_inn_mean: f64,
    pub it_total: usize,
    /// Relative residual of the initial guess followed by one entry per outer step.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    pub wall_seconds: f64,
}

impl IterationReport {
    pub fn final_residual(&self) -> f64 {
        *self
            .residual_history
            .last()
            .expect("history is never empty")
    }
}

/// Shared outer-loop bookkeeping.
pub(crate) struct OuterLoop<'p> {
    problem: &'p AveProblem,
    tol: f64,
    maxit: usize,
    history: Vec<f64>,
    inner_total: usize,
    start: Instant,
}

/// Runaway guard: stop once the residual exceeds this multiple of its start value.
const AVE_DIVERGENCE_FACTOR: f64 = 1e8;

impl<'p> OuterLoop<'p> {
    pub(crate) fn new(problem: &'p AveProblem, cfg: &SolverConfig, x0: &[C64]) -> Self {
        let r0 = problem.residual_or_absolute(x0);
        OuterLoop {
            problem,
            tol: cfg.outer_tol,
            maxit: cfg.outer_maxit,
            history: vec![r0],
            inner_total: 0,
            start: Instant::now(),
        }
    }

    fn last(&self) -> f64 {
        *self.history.last().unwrap()
    }

    /// Whether another outer step should run.
    pub(crate) fn keep_going(&self) -> bool {
        let r = self.last();
        let r0 = self.history[0].max(1.0);
        r.is_finite()
            && r > self.tol
            && self.history.len() <= self.maxit
            && r <= AVE_DIVERGENCE_FACTOR * r0
    }

    pub(crate) fn record(&mut self, x: &[C64], inner: usize) {
        self.inner_total += inner;
        self.history.push(self.problem.residual_or_absolute(x));
    }

    pub(crate) fn finish(self, two_level: bool) -> IterationReport {
        let it_out = self.history.len() - 1;
        let last = self.last();
        let (it_inn_mean, it_total) = if two_level {
            let mean = if it_out > 0 {
                self.inner_total as f64 / it_out as f64
            } else {
                0.0
            };
            (mean, self.inner_total)
        } else {
            (0.0, it_out)
        };
        IterationReport {
            it_out,
            it_inn_mean,
            it_total,
            residual_history: self.history,
            converged: last.is_finite() && last <= self.tol,
            wall_seconds: self.start.elapsed().as_secs_f64(),
        }
    }
}

/// Callback receiving each new outer iterate.
pub type Observer<'a> = &'a mut dyn FnMut(&[C64]);

/// Solve with `cfg.method` from the zero initial guess.
pub fn solve(p: &AveProblem, cfg: &SolverConfig) -> Result<(Vec<C64>, IterationReport)> {
    let x0 = vec![C64::new(0.0, 0.0); p.dim()];
    solve_from(p, cfg, &x0, None)
}

/// Solve with `cfg.method` from `x0`, reporting every outer iterate to `observer`.
pub fn solve_from(
    p: &AveProblem,
    cfg: &SolverConfig,
    x0: &[C64],
    observer: Option<Observer<'_>>,
) -> Result<(Vec<C64>, IterationReport)> {
    cfg.validate()?;
    if x0.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: x0.len(),
        });
    }
    let mut noop = |_: &[C64]| {};
    let obs: Observer<'_> = match observer {
        Some(o) => o,
        None => &mut noop,
    };
    match cfg.method {
        Method::PicardCscs | Method::PicardCscsResidualUpdate => {
            let split = CscsSplitting::new(p.matrix(), cfg.sigma)?;
            let ru = cfg.method == Method::PicardCscsResidualUpdate;
            Ok(picard::run(p, &split, cfg, x0, ru, obs))
        }
        Method::CscsLike | Method::CscsLikeResidualUpdate => {
            let split = CscsSplitting::new(p.matrix(), cfg.sigma)?;
            let ru = cfg.method == Method::CscsLikeResidualUpdate;
            Ok(like::run(p, &split, cfg, x0, ru, obs))
        }
        Method::PicardHss => {
            let split = HssSplitting::new(p.matrix(), cfg.sigma)?;
            Ok(picard::run(p, &split, cfg, x0, false, obs))
        }
        Method::HssLike => {
            let split = HssSplitting::new(p.matrix(), cfg.sigma)?;
            Ok(like::run(p, &split, cfg, x0, false, obs))
        }
        Method::GnGmres => newton::run(p, cfg, KrylovMethod::Gmres, x0, obs),
        Method::GnTfqmr => newton::run(p, cfg, KrylovMethod::Tfqmr, x0, obs),
    }
}

fn run_as(
    p: &AveProblem,
    cfg: &SolverConfig,
    method: Method,
) -> Result<(Vec<C64>, IterationReport)> {
    let cfg = SolverConfig {
        method,
        ..cfg.clone()
    };
    solve(p, &cfg)
}

/// Picard outer iteration with CSCS inner sweeps.
pub fn picard_cscs(p: &AveProblem, cfg: &SolverConfig) -> Result<(Vec<C64>, IterationReport)> {
    run_as(p, cfg, Method::PicardCscs)
}

/// Picard-CSCS in correction form, inner sweeps on `A s = |x| + b − A x` from `s = 0`.
pub fn picard_cscs_residual_update(
    p: &AveProblem,
    cfg: &SolverConfig,
) -> Result<(Vec<C64>, IterationReport)> {
    run_as(p, cfg, Method::PicardCscsResidualUpdate)
}

/// Nonlinear CSCS-like iteration.
pub fn cscs_like(p: &AveProblem, cfg: &SolverConfig) -> Result<(Vec<C64>, IterationReport)> {
    run_as(p, cfg, Method::CscsLike)
}

pub fn cscs_like_residual_update(
    p: &AveProblem,
    cfg: &SolverConfig,
) -> Result<(Vec<C64>, IterationReport)> {
    run_as(p, cfg, Method::CscsLikeResidualUpdate)
}

pub fn picard_hss(p: &AveProblem, cfg: &SolverConfig) -> Result<(Vec<C64>, IterationReport)> {
    run_as(p, cfg, Method::PicardHss)
}

pub fn hss_like(p: &AveProblem, cfg: &SolverConfig) -> Result<(Vec<C64>, IterationReport)> {
    run_as(p, cfg, Method::HssLike)
}

/// Generalized Newton with a Krylov inner solver.
pub fn generalized_newton(
    p: &AveProblem,
    cfg: &SolverConfig,
    inner: KrylovMethod,
) -> Result<(Vec<C64>, IterationReport)> {
    let method = match inner {
        KrylovMethod::Gmres => Method::GnGmres,
        KrylovMethod::Tfqmr => Method::GnTfqmr,
    };
    run_as(p, cfg, method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vecops::rel_diff;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn scaled_identity(n: usize, t: f64) -> ToeplitzMatrix {
        ToeplitzMatrix::identity(n).unwrap().scaled(t)
    }

    #[test]
    fn abs_vec_is_modulus() {
        assert_eq!(
            abs_vec(&[c(3.0, 4.0), c(-2.0, 0.0), c(0.0, -1.0)]),
            vec![5.0, 2.0, 1.0]
        );
    }

    #[test]
    fn exact_solution_is_validated() {
        let a = scaled_identity(2, 2.0);
        let xs = vec![c(0.0, -1.0), c(0.0, 1.0)];
        let b = vec![c(-1.0, -2.0), c(-1.0, 2.0)];
        let p = AveProblem::new(a.clone(), b.clone(), Some(xs.clone())).unwrap();
        assert!(ave_residual(&p, &xs).unwrap() <= 1e-15);
        assert!(AveProblem::new(a.clone(), b, Some(vec![c(1.0, 0.0); 2])).is_err());
        let zero = AveProblem::new(a, vec![c(0.0, 0.0); 2], None).unwrap();
        assert_eq!(ave_residual(&zero, &xs), Err(Error::ZeroRhs));
    }

    #[test]
    fn all_methods_solve_scaled_identity() {
        // 3x − |x| = b with x ≥ 0 has x = b/2
        let n = 8;
        let b: Vec<C64> = (0..n).map(|k| c(1.0 + k as f64, 0.0)).collect();
        let xs: Vec<C64> = b.iter().map(|v| v / 2.0).collect();
        let p = AveProblem::new(scaled_identity(n, 3.0), b, Some(xs.clone())).unwrap();
        for m in Method::ALL {
            let (x, rep) = solve(&p, &SolverConfig::with_method(m, 3.0)).unwrap();
            assert!(rep.converged, "{m}");
            assert!(rel_diff(&x, &xs) < 1e-6, "{m}");
            if m.is_newton() {
                assert!(rep.it_out <= 2, "{m}: {}", rep.it_out);
            }
        }
    }

    #[test]
    fn exact_start_stops_immediately() {
        let n = 6;
        let xs: Vec<C64> = (0..n)
            .map(|k| c(0.0, if k % 2 == 0 { -1.0 } else { 1.0 }))
            .collect();
        let a = ToeplitzMatrix::from_real(
            &[4.0, -1.0, 0.0, 0.0, 0.0, 0.0],
            &[4.0, 0.5, 0.0, 0.0, 0.0, 0.0],
        )
        .unwrap();
        let ax = a.matvec(&xs).unwrap();
        let b: Vec<C64> = ax.iter().zip(&xs).map(|(v, x)| v - x.norm()).collect();
        let p = AveProblem::new(a, b, Some(xs.clone())).unwrap();
        for m in [Method::PicardCscs, Method::CscsLike, Method::HssLike] {
            let cfg = SolverConfig::with_method(m, 2.0);
            let (x, rep) = solve_from(&p, &cfg, &xs, None).unwrap();
            assert_eq!(rep.it_out, 0, "{m}");
            assert_eq!(x, xs);
        }
    }

    #[test]
    fn zero_rhs_keeps_zero_fixed_point() {
        let p = AveProblem::new(scaled_identity(4, 3.0), vec![c(0.0, 0.0); 4], None).unwrap();
        let (x, rep) = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(rep.it_out, 0);
        assert!(x.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn newton_step_forms() {
        // tridiagonal, strongly dominant, real positive solution
        let a = ToeplitzMatrix::from_real(&[4.0, -1.0, 0.0, 0.0], &[4.0, 0.5, 0.0, 0.0]).unwrap();
        let xs = vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)];
        let ax = a.matvec(&xs).unwrap();
        let b: Vec<C64> = ax.iter().zip(&xs).map(|(v, x)| v - x.norm()).collect();
        let p = AveProblem::new(a, b, Some(xs.clone())).unwrap();
        for m in [Method::GnGmres, Method::GnTfqmr] {
            let cfg = SolverConfig {
                newton_step: NewtonStep::Correction,
                ..SolverConfig::with_method(m, 1.0)
            };
            let (x, rep) = solve(&p, &cfg).unwrap();
            assert!(rep.converged && rep.it_out <= 10, "{m}");
            assert!(rel_diff(&x, &xs) < 1e-6);
            // warm-started direct solves stop once ‖b − J x‖ ≤ 0.01 ‖b‖
            let (_, rep) = solve(
                &p,
                &SolverConfig {
                    outer_maxit: 20,
                    ..SolverConfig::with_method(m, 1.0)
                },
            )
            .unwrap();
            assert!(!rep.converged, "{m}");
            assert!(rep.final_residual() <= 0.02);
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("GN-GMRES".parse::<Method>().unwrap(), Method::GnGmres);
        assert!("newton".parse::<Method>().is_err());
    }

    #[test]
    fn invalid_config_rejected() {
        let p = AveProblem::new(scaled_identity(2, 3.0), vec![c(1.0, 0.0); 2], None).unwrap();
        let mut cfg = SolverConfig {
            sigma: 0.0,
            ..Default::default()
        };
        assert!(solve(&p, &cfg).is_err());
        cfg.sigma = 1.0;
        cfg.inner_maxit = 0;
        assert!(solve(&p, &cfg).is_err());
    }
}
