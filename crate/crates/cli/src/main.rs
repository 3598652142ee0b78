use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qfridge_cli::{execute, output, CliError, Mode, ScenarioConfig};

#[derive(Debug, Parser)]
#[command(name = "qfridge", version, about = "Quantum refrigerator scenarios: steady currents, cooling, sweeps and law audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `[output] dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steady-state currents, COP and entropy production.
    Steady(Common),
    /// Cooling trajectory, exponent fit and unattainability verdict.
    Cool(Common),
    /// Exponent table over a (d, kappa, gas) grid.
    Sweep(Common),
    /// Audit of detailed balance, the first and second law and truncation.
    VerifyLaws(Common),
}

fn run(mode: Mode, args: &Common) -> Result<i32, CliError> {
    if args.threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    let config = ScenarioConfig::load(&args.config, mode)?;
    let dir = args
        .out
        .clone()
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let run = execute(mode, &config, args.threads)?;
    let written = output::write_all(&dir, &run.report, run.trajectory.as_deref(), run.sweep.as_deref())?;
    for p in written {
        println!("wrote {}", p.display());
    }
    for w in &run.report.warnings {
        eprintln!("warning: {w}");
    }
    println!("{}: {}", mode.name(), if run.report.passed { "all checks passed" } else { "checks FAILED" });
    Ok(run.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (mode, args) = match &cli.command {
        Command::Steady(a) => (Mode::Steady, a),
        Command::Cool(a) => (Mode::Cool, a),
        Command::Sweep(a) => (Mode::Sweep, a),
        Command::VerifyLaws(a) => (Mode::VerifyLaws, a),
    };
    match run(mode, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
