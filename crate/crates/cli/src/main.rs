use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use su2_reduce::lattice::Metric;
use su2_reduce::scenario::{run_command, ScenarioConfig, Status};
use su2_reduce::Error;

/// Lattice verification of the SU(2) phase-ansatz reduction to spin-½.
#[derive(Parser)]
#[command(name = "su2-reduce", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario config (JSON); built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Points per axis of the main cubic grid.
    #[arg(long, global = true)]
    grid: Option<usize>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory for report.json and CSV traces.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// euclidean | lorentzian
    #[arg(long, global = true)]
    metric: Option<Metric>,

    /// Print the report as JSON on stdout instead of the summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Algebra, field-strength, Lagrangian, covariance, current and residual checks.
    Verify,
    /// Anomalous current and its divergence; writes anomaly.csv.
    Anomaly,
    /// Contraction certificate, Lipschitz sampling, Banach iteration; writes contraction_trace.csv.
    Contract,
    /// Chart collapse through to the reduced spin-½ operator.
    Reduce,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Anomaly => "anomaly",
            Command::Contract => "contract",
            Command::Reduce => "reduce",
        }
    }
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn load(cli: &Cli) -> Result<ScenarioConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(n) = cli.grid {
        cfg.grid.n = n;
        cfg.grid.dims = None;
        cfg.grid.spacing = None;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(metric) = cli.metric {
        cfg.grid.metric = metric;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let out = cfg.out_dir.clone();
    let mut report = match run_command(cli.command.name(), &cfg, out.as_deref()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(dir) = &out {
        report.artifacts.push("report.json".into());
        if let Err(e) = report.write(dir) {
            eprintln!("error: writing report: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    if cli.json {
        println!("{}", report.to_json(true));
    } else {
        for c in &report.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            let measured = c.measured.map(|m| format!("{m:.6e}")).unwrap_or_else(|| "-".into());
            let tol = c.tolerance.map(|t| format!(" (tol {t:e})")).unwrap_or_default();
            println!("{status}  {:<30} {measured}{tol}  {}", c.name, c.notes);
        }
        for e in &report.errata {
            println!("ERRATUM  {}: {}", e.id, e.description);
        }
        if let Some(dir) = &out {
            println!("wrote {}", dir.join("report.json").display());
        }
        println!("{}: {:?}", report.command, report.status);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}
