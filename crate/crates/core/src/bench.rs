//! Experiment runner: builds problems, picks σ, solves, and writes CSV tables
//! and convergence histories.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;

use crate::ave::{solve, AveProblem, IterationReport, Method, SolverConfig};
use crate::error::{Error, Result};
use crate::params::{sigma_cscs_opt, sigma_hss_opt};
use crate::problems::{example1_problem, example2_problem, Example1Params, Example2Params};
use crate::toeplitz::ToeplitzMatrix;

pub const CSV_HEADER: &str =
    "method,n,sigma,it_out,it_inn_mean,it_total,converged,final_residual,wall_seconds";
pub const HISTORY_HEADER: &str = "k,relative_residual";

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Example1 {
        gamma: f64,
        c: f64,
        d: f64,
    },
    Example2 {
        alpha: f64,
        d_plus: f64,
        d_minus: f64,
    },
    /// Whitespace- or comma-separated file; see [`load_custom`].
    Custom {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SigmaMode {
    Auto,
    /// One value for every size, or one value per size.
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub methods: Vec<Method>,
    /// σ for the CSCS-based methods.
    pub sigma: SigmaMode,
    /// σ for the HSS-based methods.
    pub sigma_hss: SigmaMode,
    /// Tolerances and caps; `sigma` and `method` are overwritten per row.
    pub solver: SolverConfig,
    pub out: Option<PathBuf>,
    pub history_dir: Option<PathBuf>,
    /// Methods whose non-convergence is anticipated and not an error.
    pub expected_fail: Vec<Method>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            family: Family::Example1 {
                gamma: 10.0,
                c: 2.0,
                d: 3.0,
            },
            sizes: vec![128, 256, 512, 1024],
            methods: vec![
                Method::PicardCscs,
                Method::CscsLike,
                Method::PicardHss,
                Method::HssLike,
            ],
            sigma: SigmaMode::Auto,
            sigma_hss: SigmaMode::Auto,
            solver: SolverConfig::default(),
            out: None,
            history_dir: None,
            expected_fail: vec![Method::GnGmres, Method::GnTfqmr],
        }
    }
}

fn validate_sigma(mode: &SigmaMode, sizes: usize, what: &str) -> Result<()> {
    if let SigmaMode::Explicit(v) = mode {
        if v.is_empty() || (v.len() != 1 && v.len() != sizes) {
            return Err(Error::InvalidParameter(format!(
                "{what} needs one value or one per size ({sizes}), got {}",
                v.len()
            )));
        }
        if let Some(bad) = v.iter().find(|s| !(**s > 0.0) || !s.is_finite()) {
            return Err(Error::NonPositiveSigma(*bad));
        }
    }
    Ok(())
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("no methods given".into()));
        }
        if self.sizes.is_empty() && !matches!(self.family, Family::Custom { .. }) {
            return Err(Error::InvalidParameter("no sizes given".into()));
        }
        if self.sizes.contains(&0) {
            return Err(Error::Empty);
        }
        let nsizes = self.sizes.len().max(1);
        validate_sigma(&self.sigma, nsizes, "sigma")?;
        validate_sigma(&self.sigma_hss, nsizes, "sigma_hss")?;
        SolverConfig {
            sigma: 1.0,
            ..self.solver.clone()
        }
        .validate()
    }
}

/// One (size, method) outcome. Construction or solver errors yield a row with
/// `error` set and `converged = false`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub method: Method,
    pub n: usize,
    /// NaN for methods without a splitting parameter.
    pub sigma: f64,
    pub it_out: usize,
    pub it_inn_mean: f64,
    pub it_total: usize,
    pub converged: bool,
    pub final_residual: f64,
    pub wall_seconds: f64,
    pub error: Option<String>,
    pub report: Option<IterationReport>,
}

impl ResultRow {
    fn from_report(method: Method, n: usize, sigma: f64, report: IterationReport) -> Self {
        ResultRow {
            method,
            n,
            sigma,
            it_out: report.it_out,
            it_inn_mean: report.it_inn_mean,
            it_total: report.it_total,
            converged: report.converged,
            final_residual: report.final_residual(),
            wall_seconds: report.wall_seconds,
            error: None,
            report: Some(report),
        }
    }

    fn from_error(method: Method, n: usize, sigma: f64, err: &Error) -> Self {
        ResultRow {
            method,
            n,
            sigma,
            it_out: 0,
            it_inn_mean: 0.0,
            it_total: 0,
            converged: false,
            final_residual: f64::NAN,
            wall_seconds: 0.0,
            error: Some(err.to_string()),
            report: None,
        }
    }

    /// Failed and not listed in `expected_fail`.
    pub fn is_unexpected_failure(&self, spec: &ExperimentSpec) -> bool {
        !self.converged && (self.error.is_some() || !spec.expected_fail.contains(&self.method))
    }
}

/// Reads `n` data lines `col_re col_im row_re row_im b_re b_im` (separated by
/// whitespace or commas; `#` starts a comment). Line `k` holds entry `k` of the
/// first column, first row and right-hand side.
pub fn load_custom(path: &Path) -> Result<AveProblem> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
    let (mut col, mut row, mut b) = (Vec::new(), Vec::new(), Vec::new());
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidParameter(format!("line {}: {e}", lineno + 1)))?;
        if vals.len() != 6 {
            return Err(Error::InvalidParameter(format!(
                "line {}: expected 6 numbers, found {}",
                lineno + 1,
                vals.len()
            )));
        }
        col.push(C64::new(vals[0], vals[1]));
        row.push(C64::new(vals[2], vals[3]));
        b.push(C64::new(vals[4], vals[5]));
    }
    AveProblem::new(ToeplitzMatrix::new(col, row)?, b, None)
}

pub fn build_problem(family: &Family, n: usize) -> Result<AveProblem> {
    match family {
        Family::Example1 { gamma, c, d } => example1_problem(&Example1Params {
            n,
            gamma: *gamma,
            c: *c,
            d: *d,
        }),
        Family::Example2 {
            alpha,
            d_plus,
            d_minus,
        } => example2_problem(&Example2Params::benchmark(n, *alpha, *d_plus, *d_minus)),
        Family::Custom { path } => {
            let p = load_custom(path)?;
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            Ok(p)
        }
    }
}

fn pick(mode: &SigmaMode, idx: usize) -> Option<f64> {
    match mode {
        SigmaMode::Auto => None,
        SigmaMode::Explicit(v) if v.len() == 1 => Some(v[0]),
        SigmaMode::Explicit(v) => Some(v[idx]),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum SigmaKind {
    Cscs,
    Hss,
}

fn resolve_sigma(
    spec: &ExperimentSpec,
    p: &AveProblem,
    idx: usize,
    kind: SigmaKind,
) -> Result<f64> {
    match kind {
        SigmaKind::Cscs => match pick(&spec.sigma, idx) {
            Some(s) => Ok(s),
            None => {
                let (c, s) = p.matrix().cscs_spectra()?;
                sigma_cscs_opt(&c, &s)
            }
        },
        SigmaKind::Hss => match pick(&spec.sigma_hss, idx) {
            Some(s) => Ok(s),
            None => sigma_hss_opt(p.matrix()),
        },
    }
}

/// Runs every (size, method) pair in order from the zero initial guess.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let sizes: Vec<usize> = match (&spec.family, spec.sizes.is_empty()) {
        (Family::Custom { path }, true) => vec![load_custom(path)?.dim()],
        _ => spec.sizes.clone(),
    };
    let mut rows = Vec::with_capacity(sizes.len() * spec.methods.len());
    for (idx, &n) in sizes.iter().enumerate() {
        let problem = build_problem(&spec.family, n);
        let mut sigmas: HashMap<SigmaKind, Result<f64>> = HashMap::new();
        for &method in &spec.methods {
            let p = match &problem {
                Ok(p) => p,
                Err(e) => {
                    log::error!("n = {n}: {e}");
                    rows.push(ResultRow::from_error(method, n, f64::NAN, e));
                    continue;
                }
            };
            let kind = if method.is_hss() {
                Some(SigmaKind::Hss)
            } else if method.is_cscs() {
                Some(SigmaKind::Cscs)
            } else {
                None
            };
            let sigma = match kind {
                Some(k) => match sigmas
                    .entry(k)
                    .or_insert_with(|| resolve_sigma(spec, p, idx, k))
                {
                    Ok(s) => *s,
                    Err(e) => {
                        log::error!("{method}, n = {n}: {e}");
                        rows.push(ResultRow::from_error(method, n, f64::NAN, e));
                        continue;
                    }
                },
                None => f64::NAN,
            };
            let cfg = SolverConfig {
                method,
                sigma: if sigma.is_nan() { 1.0 } else { sigma },
                ..spec.solver.clone()
            };
            log::info!("{method}, n = {n}, sigma = {sigma}");
            rows.push(match solve(p, &cfg) {
                Ok((_, report)) => ResultRow::from_report(method, n, sigma, report),
                Err(e) => {
                    log::error!("{method}, n = {n}: {e}");
                    ResultRow::from_error(method, n, sigma, &e)
                }
            });
        }
    }
    Ok(rows)
}

pub fn format_csv(rows: &[ResultRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{:.5e},{:.6}",
            r.method,
            r.n,
            r.sigma,
            r.it_out,
            r.it_inn_mean,
            r.it_total,
            if r.converged { "ok" } else { "Fail" },
            r.final_residual,
            r.wall_seconds
        )
        .expect("writing to a String");
    }
    s
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    fs::write(path, format_csv(rows)).map_err(|e| io_err(path, e))
}

/// One line per entry of the residual history; `k = 0` is the initial guess.
pub fn emit_history(report: &IterationReport, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut s = String::from(HISTORY_HEADER);
    s.push('\n');
    for (k, r) in report.residual_history.iter().enumerate() {
        writeln!(s, "{k},{r:.5e}").expect("writing to a String");
    }
    f.write_all(s.as_bytes()).map_err(|e| io_err(path, e))
}

/// Writes `{method}_n{n}.csv` for every row that has a report.
pub fn emit_histories(rows: &[ResultRow], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for r in rows {
        if let Some(rep) = &r.report {
            emit_history(rep, &dir.join(format!("{}_n{}.csv", r.method, r.n)))?;
        }
    }
    Ok(())
}

/// Inverse of [`format_csv`] for the numeric fields; `error` and `report` are not stored.
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::InvalidParameter(
            "missing or unexpected CSV header".into(),
        ));
    }
    let bad = |l: &str| Error::InvalidParameter(format!("malformed CSV row '{l}'"));
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 9 {
                return Err(bad(l));
            }
            let num = |i: usize| f[i].parse::<f64>().map_err(|_| bad(l));
            let int = |i: usize| f[i].parse::<usize>().map_err(|_| bad(l));
            Ok(ResultRow {
                method: f[0].parse()?,
                n: int(1)?,
                sigma: num(2)?,
                it_out: int(3)?,
                it_inn_mean: num(4)?,
                it_total: int(5)?,
                converged: match f[6] {
                    "ok" => true,
                    "Fail" => false,
                    _ => return Err(bad(l)),
                },
                final_residual: num(7)?,
                wall_seconds: num(8)?,
                error: None,
                report: None,
            })
        })
        .collect()
}
