use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tline_cli::{cmd_compare, cmd_run, cmd_uq, exit, Options};

/// Aging and failure analysis of overhead transmission-line conductors.
#[derive(Debug, Parser)]
#[command(name = "tline", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory (overrides `output.directory`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for ensembles (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Monte Carlo seed (overrides `stochastic.seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Deterministic run; exits 4 if the temperature limit is crossed.
    Run { config: PathBuf },
    /// Collocation or Monte Carlo ensemble.
    Uq { config: PathBuf },
    /// Ensemble plus relative error against a reference bundle.
    Compare {
        config: PathBuf,
        #[arg(long)]
        reference: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::VALIDATION as u8 } else { 0 });
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn })
        .parse_default_env()
        .init();

    let opts = Options {
        out: cli.out,
        workers: cli.workers,
        seed: cli.seed,
    };
    let result = match &cli.command {
        Command::Run { config } => cmd_run(config, &opts),
        Command::Uq { config } => cmd_uq(config, &opts),
        Command::Compare { config, reference } => cmd_compare(config, reference, &opts).map(|(o, _)| o),
    };
    match result {
        Ok(o) if o.failed => {
            eprintln!("run completed with failure; results in {}", o.out_dir.display());
            ExitCode::from(exit::FAILED as u8)
        }
        Ok(_) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
