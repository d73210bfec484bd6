//! `unsharp`: validate measurement files, report uncertainty bounds, run
//! parameter sweeps and property suites.
//!
//! Exit codes: 0 success, 1 validation or assertion failure, 2 usage or
//! parse error.

mod config;

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use unsharp::bounds::{krishna_bound, min_device_uncertainty, BoundReport};
use unsharp::io::{PovmFile, StateFile, ValidationReport};
use unsharp::sweep::{sweep_damping, sweep_theta, Sweep, SweepConfig, SweepKind};
use unsharp::uncertainty::{
    device_uncertainty, outcome_probs, quantum_uncertainty, shannon_entropy,
};
use unsharp::verify::{run_suite, RngSeed, Suite, SuiteSummary};

use config::{ConfigFile, SweepSection};

/// Slack allowed when checking reported bounds against the entropy sum.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] unsharp::Error),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },

    /// The command ran but its checks failed; details were already printed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_usage() => 2,
            CliError::Core(_) | CliError::Failed(_) => 1,
            CliError::Config(_) | CliError::Output { .. } => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Config(_) => "ConfigError",
            CliError::Output { .. } => "IoError",
            CliError::Failed(_) => "CheckFailed",
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "unsharp",
    version,
    about = "Entropic uncertainty of unsharp quantum measurements"
)]
struct Cli {
    /// Print reports and errors as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// TOML file with defaults for the sweep and verify subcommands.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a file describes a valid measurement; print effect spectra.
    Validate { povm: PathBuf },

    /// Outcome entropy split into device and state parts for one measurement.
    Analyze {
        povm: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },

    /// Every applicable lower bound for a pair of measurements.
    Bounds {
        a: PathBuf,
        b: PathBuf,
        /// Also report H(A) + H(B) for this state and check the bounds against it.
        #[arg(long)]
        state: Option<PathBuf>,
    },

    /// Bounds for a tilted qubit measurement against z, swept over the tilt angle.
    SweepTheta {
        /// Sharpness of the tilted measurement.
        #[arg(long)]
        eta: Option<f64>,
        /// Sharpness of the z measurement.
        #[arg(long)]
        zeta: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },

    /// Bounds for the damped qutrit pair, swept over the transition probability.
    SweepDamping {
        #[command(flatten)]
        grid: GridArgs,
    },

    /// Run a randomized property suite.
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, clap::Args)]
struct GridArgs {
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; standard output when omitted or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GridArgs {
    /// Flags over file values over defaults.
    fn resolve(
        &self,
        kind: SweepKind,
        file: &SweepSection,
        eta: Option<f64>,
        zeta: Option<f64>,
    ) -> (SweepConfig, Option<PathBuf>) {
        let mut cfg = SweepConfig::default_for(kind);
        cfg.grid.start = self.start.or(file.start).unwrap_or(cfg.grid.start);
        cfg.grid.stop = self.stop.or(file.stop).unwrap_or(cfg.grid.stop);
        cfg.grid.steps = self.steps.or(file.steps).unwrap_or(cfg.grid.steps);
        cfg.eta = eta.or(file.eta).unwrap_or(cfg.eta);
        cfg.zeta = zeta.or(file.zeta).unwrap_or(cfg.zeta);
        cfg.seed = self.seed.or(file.seed).map(RngSeed).unwrap_or(cfg.seed);
        let out = self.out.clone().or_else(|| file.out.clone());
        (cfg, out)
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

fn load_povm(path: &Path) -> CliResult<unsharp::Povm> {
    Ok(PovmFile::read(path)?.to_povm()?)
}

fn cmd_validate(path: &Path, json: bool) -> CliResult<()> {
    let report = ValidationReport::of(&PovmFile::read(path)?)?;
    if json {
        print_json(&report);
    } else {
        println!(
            "{}: d = {}, {} outcomes",
            path.display(),
            report.dim,
            report.outcomes
        );
        for (i, spec) in report.spectra.iter().enumerate() {
            match spec {
                Some(vals) => {
                    let vals: Vec<String> = vals.iter().map(|v| format!("{v:.12}")).collect();
                    println!("  effect {i}: eigenvalues [{}]", vals.join(", "));
                }
                None => println!("  effect {i}: not Hermitian"),
            }
        }
        println!(
            "  completeness residual: {:e}",
            report.completeness_residual
        );
        match &report.error {
            None => println!("  valid measurement"),
            Some(e) => println!("  invalid: {e}"),
        }
    }
    if report.valid {
        return Ok(());
    }
    // re-run construction to surface the typed error and its exit code
    PovmFile::read(path)?.to_povm()?;
    Err(CliError::Failed("invalid measurement".into()))
}

#[derive(Debug, Serialize)]
struct AnalyzeReport {
    dim: usize,
    outcomes: usize,
    state: String,
    probabilities: Vec<f64>,
    #[serde(rename = "H")]
    h: f64,
    #[serde(rename = "D")]
    d: f64,
    #[serde(rename = "Q")]
    q: f64,
    krishna: f64,
    #[serde(rename = "minD")]
    min_d: f64,
}

fn cmd_analyze(povm: &Path, state: &Path, format: Format) -> CliResult<()> {
    let a = load_povm(povm)?;
    let file = StateFile::read(state)?;
    let rho = file.to_density()?;
    if rho.dim() != a.dim() {
        return Err(unsharp::Error::DimensionMismatch {
            expected: a.dim(),
            found: rho.dim(),
        }
        .into());
    }
    let probs = outcome_probs(&rho, &a)?;
    let report = AnalyzeReport {
        dim: a.dim(),
        outcomes: a.len(),
        state: file.describe(),
        h: shannon_entropy(&probs),
        d: device_uncertainty(&rho, &a)?,
        q: quantum_uncertainty(&rho, &a)?,
        krishna: krishna_bound(&a),
        min_d: min_device_uncertainty(&a),
        probabilities: probs.probs().to_vec(),
    };
    match format {
        Format::Json => print_json(&report),
        Format::Csv => {
            println!("H,D,Q,krishna,minD");
            println!(
                "{},{},{},{},{}",
                report.h, report.d, report.q, report.krishna, report.min_d
            );
        }
    }
    Ok(())
}

fn cmd_bounds(a_path: &Path, b_path: &Path, state: Option<&Path>) -> CliResult<()> {
    let a = load_povm(a_path)?;
    let b = load_povm(b_path)?;
    let state = match state {
        Some(p) => Some((StateFile::read(p)?.to_density()?, p.display().to_string())),
        None => None,
    };
    let report = BoundReport::for_pair(
        &a,
        &a_path.display().to_string(),
        &b,
        &b_path.display().to_string(),
        state.as_ref().map(|(rho, label)| (rho, label.as_str())),
    )?;
    print_json(&report);
    let non_finite: Vec<&String> = report
        .bounds
        .iter()
        .filter(|(_, v)| !v.is_finite())
        .map(|(k, _)| k)
        .collect();
    if !non_finite.is_empty() {
        return Err(CliError::Failed(format!(
            "non-finite bounds: {non_finite:?}"
        )));
    }
    let violations = report.violations(BOUND_SLACK);
    if !violations.is_empty() {
        return Err(CliError::Failed(format!(
            "bounds exceed the entropy sum: {violations:?}"
        )));
    }
    Ok(())
}

fn open_output(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match out {
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(BufWriter::new(io::stdout()))),
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Output {
                path: p.display().to_string(),
                message: e.to_string(),
            })?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn finish_sweep<R: Serialize>(sweep: &Sweep<R>, out: Option<&Path>) -> CliResult<()> {
    let mut w = open_output(out)?;
    sweep.write_csv(&mut w)?;
    w.flush().map_err(|e| CliError::Output {
        path: out
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "-".into()),
        message: e.to_string(),
    })?;
    if let Some(p) = out.filter(|p| p.as_os_str() != "-") {
        eprintln!("wrote {} rows to {}", sweep.rows.len(), p.display());
        for c in &sweep.crossovers {
            match sweep.config.kind {
                SweepKind::Theta => eprintln!(
                    "crossover {} at theta = {:.4} (|pi/2 - theta| = {:.4})",
                    c.label,
                    c.at,
                    (PI / 2.0 - c.at).abs()
                ),
                SweepKind::Damping => eprintln!("crossover {} at e = {:.4}", c.label, c.at),
            }
        }
    }
    Ok(())
}

fn print_summary(s: &SuiteSummary) {
    println!(
        "{:<13} {} trials={} seed={} checks={} violations={} worst_slack={:.3e}",
        s.suite,
        if s.passed() { "PASS" } else { "FAIL" },
        s.trials,
        s.seed,
        s.checks,
        s.violations,
        s.worst_slack
    );
    for f in &s.failures {
        println!("    {f}");
    }
}

fn cmd_verify(
    suite: Option<String>,
    trials: Option<usize>,
    seed: Option<u64>,
    file: &ConfigFile,
    json: bool,
) -> CliResult<()> {
    let name = suite
        .or_else(|| file.verify.suite.clone())
        .ok_or_else(|| CliError::Config("no suite given (use --suite NAME or `all`)".into()))?;
    let trials = trials.or(file.verify.trials).unwrap_or(100);
    let seed = seed.or(file.verify.seed).map(RngSeed).unwrap_or_default();
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![name.parse::<Suite>()?]
    };
    let summaries = suites
        .iter()
        .map(|&s| run_suite(s, trials, seed))
        .collect::<Result<Vec<_>, _>>()?;
    if json {
        print_json(&summaries);
    } else {
        summaries.iter().for_each(print_summary);
    }
    let failed: Vec<&str> = summaries
        .iter()
        .filter(|s| !s.passed())
        .map(|s| s.suite.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "suites failed: {}",
            failed.join(", ")
        )))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let file = ConfigFile::load(cli.config.as_deref())?;
    match cli.command {
        Command::Validate { povm } => cmd_validate(&povm, cli.json),
        Command::Analyze {
            povm,
            state,
            format,
        } => cmd_analyze(&povm, &state, format),
        Command::Bounds { a, b, state } => cmd_bounds(&a, &b, state.as_deref()),
        Command::SweepTheta { eta, zeta, grid } => {
            let (cfg, out) = grid.resolve(SweepKind::Theta, &file.sweep_theta, eta, zeta);
            finish_sweep(&sweep_theta(&cfg)?, out.as_deref())
        }
        Command::SweepDamping { grid } => {
            let (cfg, out) = grid.resolve(SweepKind::Damping, &file.sweep_damping, None, None);
            finish_sweep(&sweep_damping(&cfg)?, out.as_deref())
        }
        Command::Verify {
            suite,
            trials,
            seed,
        } => cmd_verify(suite, trials, seed, &file, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = err.exit_code();
            if json {
                let body = json!({"error": {"kind": err.kind(), "message": err.to_string(), "exit_code": code}});
                println!(
                    "{}",
                    serde_json::to_string_pretty(&body).expect("error serializes")
                );
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(code)
        }
    }
}
