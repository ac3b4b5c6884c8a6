//! `ave-bench run` builds problems, selects σ, runs the requested solvers and
//! writes a CSV table (plus optional convergence histories).
//!
//! Exit status: 0 when every row converged or was an expected failure, 1 on
//! any unexpected failure, 2 on an invalid experiment description.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use toeplitz_ave::bench::{emit_csv, emit_histories, format_csv, run_experiment, ExperimentSpec};

use config::{build_spec, parse_config, ConfigFile, Overrides};

#[derive(Parser)]
#[command(
    name = "ave-bench",
    version,
    about = "Toeplitz absolute value equation benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its result table.
    Run(RunArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// TOML file with [problem], [run], [solver] and [output] sections.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// example1, example2 or custom.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    dplus: Option<f64>,
    #[arg(long)]
    dminus: Option<f64>,
    /// Matrix file for the custom family.
    #[arg(long, value_name = "PATH")]
    matrix: Option<PathBuf>,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// σ for the CSCS methods: auto, one value, or one value per size.
    #[arg(long)]
    sigma: Option<String>,
    /// σ for the HSS methods, same forms as --sigma.
    #[arg(long)]
    sigma_hss: Option<String>,
    /// Methods whose failure does not affect the exit status.
    #[arg(long, value_delimiter = ',')]
    expected_fail: Option<Vec<String>>,
    #[arg(long)]
    outer_tol: Option<f64>,
    #[arg(long)]
    outer_maxit: Option<usize>,
    #[arg(long)]
    inner_tol: Option<f64>,
    #[arg(long)]
    inner_maxit: Option<usize>,
    #[arg(long)]
    gmres_restart: Option<usize>,
    /// Generalized-Newton step form: direct or correction.
    #[arg(long)]
    newton_step: Option<String>,
    /// Output CSV; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Directory for one history CSV per row.
    #[arg(long, value_name = "PATH")]
    history_dir: Option<PathBuf>,
}

impl RunArgs {
    fn into_spec(self) -> Result<ExperimentSpec> {
        let file = match &self.config {
            Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
            None => ConfigFile::default(),
        };
        let o = Overrides {
            family: self.family,
            gamma: self.gamma,
            c: self.c,
            d: self.d,
            alpha: self.alpha,
            dplus: self.dplus,
            dminus: self.dminus,
            path: self.matrix,
            sizes: self.sizes,
            methods: self.methods,
            sigma: self.sigma,
            sigma_hss: self.sigma_hss,
            expected_fail: self.expected_fail,
            outer_tol: self.outer_tol,
            outer_maxit: self.outer_maxit,
            inner_tol: self.inner_tol,
            inner_maxit: self.inner_maxit,
            gmres_restart: self.gmres_restart,
            newton_step: self.newton_step,
            out: self.out,
            history_dir: self.history_dir,
        };
        build_spec(file, o)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let Command::Run(args) = Cli::parse().command;
    let spec = match args.into_spec() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let rows = match run_experiment(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &spec.out {
        Some(path) => emit_csv(&rows, path),
        None => {
            print!("{}", format_csv(&rows));
            Ok(())
        }
    }
    .and_then(|_| match &spec.history_dir {
        Some(dir) => emit_histories(&rows, dir),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let unexpected: Vec<String> = rows
        .iter()
        .filter(|r| r.is_unexpected_failure(&spec))
        .map(|r| format!("{} n={}", r.method, r.n))
        .collect();
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("unexpected failures: {}", unexpected.join(", "));
        ExitCode::from(1)
    }
}
