use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use riglab::cli::{resolve, run, ExperimentConfig, ExperimentKind};

/// Analytic laboratory and Monte Carlo simulator for inhomogeneous random
/// intersection graphs.
#[derive(Parser)]
#[command(name = "riglab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Path to the JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the thread count (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the regime's limit laws and write them as CSV/JSON.
    Analytic(Common),
    /// Run simulation replicas and write empirical histograms.
    Simulate(Common),
    /// Simulate, compare against the analytic laws, and report pass/fail.
    Compare(Common),
    /// Exact enumeration of a tiny instance, optionally cross-checked by
    /// Monte Carlo.
    Oracle(Common),
    /// Evaluate power-law tail predictions.
    Asymptote(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, kind) = match &cli.command {
        Command::Analytic(c) => (c, ExperimentKind::Analytic),
        Command::Simulate(c) => (c, ExperimentKind::Simulate),
        Command::Compare(c) => (c, ExperimentKind::Compare),
        Command::Oracle(c) => (c, ExperimentKind::Oracle),
        Command::Asymptote(c) => (c, ExperimentKind::Asymptote),
    };
    let text = match std::fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!(
                "riglab: cannot read config {}: {e}",
                common.config.display()
            );
            return ExitCode::from(1);
        }
    };
    let mut config: ExperimentConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("riglab: config parse error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(threads) = common.threads {
        config.threads = threads;
    }
    if let Some(out) = &common.out {
        config.out = out.clone();
    }
    let resolved = match resolve(config, Some(kind)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("riglab: {e}");
            return ExitCode::from(1);
        }
    };
    match run(&resolved) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("riglab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
