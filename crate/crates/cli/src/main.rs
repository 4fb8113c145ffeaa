use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lipbo_cli::{parse_config, run_command, CommandError, Subcommand};

/// Lipschitz-aware Bayesian optimization experiments.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    command: Subcommand,
    /// Configuration file (`key = value` lines).
    config: PathBuf,
    /// Root seed, overriding `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of runs per setting, overriding `n_runs`.
    #[arg(long)]
    runs: Option<usize>,
    /// Output CSV path, overriding `output`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &Args) -> Result<PathBuf, CommandError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CommandError::Io {
        path: args.config.clone(),
        source,
    })?;
    let mut config = parse_config(&text)?;
    if let Some(seed) = args.seed {
        config.root_seed = seed;
    }
    if let Some(runs) = args.runs {
        if runs == 0 {
            return Err(lipbo_cli::ConfigError::Range {
                key: "--runs".into(),
                message: "must be at least 1".into(),
            }
            .into());
        }
        config.n_runs = runs;
    }
    if let Some(out) = &args.out {
        config.output = Some(out.clone());
    }
    run_command(&config, args.command)
}
