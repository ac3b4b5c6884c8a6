//! TOML experiment files and their merge with command-line flags.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use toeplitz_ave::ave::NewtonStep;
use toeplitz_ave::bench::{ExperimentSpec, Family, SigmaMode};
use toeplitz_ave::{Method, SolverConfig};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub problem: ProblemSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub family: Option<String>,
    pub gamma: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub alpha: Option<f64>,
    pub dplus: Option<f64>,
    pub dminus: Option<f64>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SigmaValue {
    Word(String),
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub sizes: Option<Vec<usize>>,
    pub methods: Option<Vec<String>>,
    pub sigma: Option<SigmaValue>,
    pub sigma_hss: Option<SigmaValue>,
    pub expected_fail: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub outer_tol: Option<f64>,
    pub outer_maxit: Option<usize>,
    pub inner_tol: Option<f64>,
    pub inner_maxit: Option<usize>,
    pub gmres_restart: Option<usize>,
    pub inner_krylov_tol: Option<f64>,
    pub inner_krylov_maxit: Option<usize>,
    pub newton_step: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub out: Option<PathBuf>,
    pub history_dir: Option<PathBuf>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    Ok(toml::from_str(text)?)
}

/// `auto`, a single value, or a comma-separated per-size list.
pub fn parse_sigma(s: &str) -> Result<SigmaMode> {
    sigma_from_value(SigmaValue::Word(s.to_string()))
}

fn sigma_from_value(v: SigmaValue) -> Result<SigmaMode> {
    Ok(match v {
        SigmaValue::Word(w) if w.trim().eq_ignore_ascii_case("auto") => SigmaMode::Auto,
        SigmaValue::Word(w) => SigmaMode::Explicit(
            w.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .with_context(|| format!("bad sigma value '{t}'"))
                })
                .collect::<Result<_>>()?,
        ),
        SigmaValue::One(x) => SigmaMode::Explicit(vec![x]),
        SigmaValue::Many(v) => SigmaMode::Explicit(v),
    })
}

pub fn parse_newton_step(s: &str) -> Result<NewtonStep> {
    match s.trim().to_ascii_lowercase().as_str() {
        "direct" => Ok(NewtonStep::Direct),
        "correction" => Ok(NewtonStep::Correction),
        other => bail!("unknown newton step '{other}' (expected direct or correction)"),
    }
}

pub fn parse_methods<S: AsRef<str>>(names: &[S]) -> Result<Vec<Method>> {
    names
        .iter()
        .map(|s| s.as_ref().trim())
        .filter(|s| !s.is_empty())
        .map(|s| Ok(s.parse::<Method>()?))
        .collect()
}

/// Command-line values; every `Some` overrides the file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub family: Option<String>,
    pub gamma: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub alpha: Option<f64>,
    pub dplus: Option<f64>,
    pub dminus: Option<f64>,
    pub path: Option<PathBuf>,
    pub sizes: Option<Vec<usize>>,
    pub methods: Option<Vec<String>>,
    pub sigma: Option<String>,
    pub sigma_hss: Option<String>,
    pub expected_fail: Option<Vec<String>>,
    pub outer_tol: Option<f64>,
    pub outer_maxit: Option<usize>,
    pub inner_tol: Option<f64>,
    pub inner_maxit: Option<usize>,
    pub gmres_restart: Option<usize>,
    pub newton_step: Option<String>,
    pub out: Option<PathBuf>,
    pub history_dir: Option<PathBuf>,
}

pub fn build_spec(file: ConfigFile, o: Overrides) -> Result<ExperimentSpec> {
    let p = file.problem;
    let family_name = o.family.or(p.family).unwrap_or_else(|| "example1".into());
    let family = match family_name.to_ascii_lowercase().as_str() {
        "example1" => Family::Example1 {
            gamma: o.gamma.or(p.gamma).unwrap_or(10.0),
            c: o.c.or(p.c).unwrap_or(2.0),
            d: o.d.or(p.d).unwrap_or(3.0),
        },
        "example2" => Family::Example2 {
            alpha: o.alpha.or(p.alpha).unwrap_or(1.2),
            d_plus: o.dplus.or(p.dplus).unwrap_or(0.5),
            d_minus: o.dminus.or(p.dminus).unwrap_or(0.8),
        },
        "custom" => Family::Custom {
            path: o
                .path
                .or(p.path)
                .context("custom family needs a matrix file path")?,
        },
        other => bail!("unknown family '{other}' (expected example1, example2 or custom)"),
    };

    let defaults = ExperimentSpec::default();
    let run = file.run;
    let sizes = match (o.sizes, run.sizes) {
        (Some(s), _) | (None, Some(s)) => s,
        (None, None) if matches!(family, Family::Custom { .. }) => Vec::new(),
        (None, None) => defaults.sizes,
    };
    let methods = match o.methods.or(run.methods) {
        Some(m) => parse_methods(&m)?,
        None => defaults.methods,
    };
    let sigma = match (o.sigma, run.sigma) {
        (Some(s), _) => parse_sigma(&s)?,
        (None, Some(v)) => sigma_from_value(v)?,
        (None, None) => SigmaMode::Auto,
    };
    let sigma_hss = match (o.sigma_hss, run.sigma_hss) {
        (Some(s), _) => parse_sigma(&s)?,
        (None, Some(v)) => sigma_from_value(v)?,
        (None, None) => SigmaMode::Auto,
    };
    let expected_fail = match o.expected_fail.or(run.expected_fail) {
        Some(m) => parse_methods(&m)?,
        None => defaults.expected_fail,
    };

    let s = file.solver;
    let base = SolverConfig::default();
    let solver = SolverConfig {
        outer_tol: o.outer_tol.or(s.outer_tol).unwrap_or(base.outer_tol),
        outer_maxit: o.outer_maxit.or(s.outer_maxit).unwrap_or(base.outer_maxit),
        inner_tol: o.inner_tol.or(s.inner_tol).unwrap_or(base.inner_tol),
        inner_maxit: o.inner_maxit.or(s.inner_maxit).unwrap_or(base.inner_maxit),
        gmres_restart: o
            .gmres_restart
            .or(s.gmres_restart)
            .unwrap_or(base.gmres_restart),
        inner_krylov_tol: s.inner_krylov_tol.unwrap_or(base.inner_krylov_tol),
        inner_krylov_maxit: s.inner_krylov_maxit.unwrap_or(base.inner_krylov_maxit),
        newton_step: match o.newton_step.or(s.newton_step) {
            Some(v) => parse_newton_step(&v)?,
            None => base.newton_step,
        },
        ..base
    };

    let spec = ExperimentSpec {
        family,
        sizes,
        methods,
        sigma,
        sigma_hss,
        solver,
        out: o.out.or(file.output.out),
        history_dir: o.history_dir.or(file.output.history_dir),
        expected_fail,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = parse_config(
            "[problem]\nfamily = \"example2\"\nalpha = 1.5\n[run]\nsizes = [64]\nsigma = [2.5]\n[solver]\nouter_maxit = 50\n",
        )
        .unwrap();
        let o = Overrides {
            alpha: Some(1.8),
            sigma: Some("auto".into()),
            ..Default::default()
        };
        let spec = build_spec(file, o).unwrap();
        assert_eq!(
            spec.family,
            Family::Example2 {
                alpha: 1.8,
                d_plus: 0.5,
                d_minus: 0.8
            }
        );
        assert_eq!(spec.sizes, vec![64]);
        assert_eq!(spec.sigma, SigmaMode::Auto);
        assert_eq!(spec.solver.outer_maxit, 50);
    }

    #[test]
    fn sigma_forms() {
        assert_eq!(parse_sigma("AUTO").unwrap(), SigmaMode::Auto);
        assert_eq!(parse_sigma("1.5").unwrap(), SigmaMode::Explicit(vec![1.5]));
        assert_eq!(
            parse_sigma("1, 2").unwrap(),
            SigmaMode::Explicit(vec![1.0, 2.0])
        );
        assert!(parse_sigma("fast").is_err());
    }

    #[test]
    fn unknown_keys_and_values_rejected() {
        assert!(parse_config("[run]\nsize = [4]\n").is_err());
        let file = parse_config("[problem]\nfamily = \"example3\"\n").unwrap();
        assert!(build_spec(file, Overrides::default()).is_err());
        let file = parse_config("[run]\nmethods = [\"newton\"]\n").unwrap();
        assert!(build_spec(file, Overrides::default()).is_err());
    }
}
