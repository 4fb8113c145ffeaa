//! Experiment dispatch.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use lipbo::harness::{
    run_many_with, run_traces, summarize, sweep_exploration, width_sweep, PolicyKind, RegretSummary, SeedStreams,
    SweepOptions,
};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig};
use crate::report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    /// Mean regret per benchmark and policy.
    Table2,
    /// Regret against the number of random exploration steps before EI.
    Fig1,
    /// Regret against the number of exploration steps before NBIS.
    Fig3,
    /// One run per benchmark and policy.
    Single,
    /// Regret against the exploitation kernel width.
    WidthSweep,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Table2 => "table2",
            Subcommand::Fig1 => "fig1",
            Subcommand::Fig3 => "fig3",
            Subcommand::Single => "single",
            Subcommand::WidthSweep => "width-sweep",
        }
    }

    fn default_policies(self) -> Vec<PolicyKind> {
        match self {
            Subcommand::Table2 => vec![
                PolicyKind::Ei,
                PolicyKind::EiM,
                PolicyKind::NbrsThenEi,
                PolicyKind::NbrsThenNbis,
            ],
            Subcommand::Fig1 => vec![PolicyKind::RandomThenEi],
            Subcommand::Fig3 => vec![PolicyKind::NbrsThenNbis, PolicyKind::RandomThenNbis],
            Subcommand::Single => vec![PolicyKind::NbrsThenNbis],
            Subcommand::WidthSweep => vec![PolicyKind::Ei],
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as clap::ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("experiment failed: {0}")]
    Runtime(#[from] lipbo::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

impl CommandError {
    /// Process exit status: 1 for configuration problems, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Config(_) => 1,
            _ => 2,
        }
    }
}

/// Sweep grid used when `widths` is not configured: multiples of the
/// squared box side.
const RELATIVE_WIDTHS: [f64; 7] = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];

/// Runs the experiment and writes its CSV, returning the output path.
pub fn run_command(config: &ExperimentConfig, subcommand: Subcommand) -> Result<PathBuf, CommandError> {
    let csv = render(config, subcommand)?;
    let path = config
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", subcommand.name())));
    std::fs::write(&path, csv).map_err(|source| CommandError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Runs the experiment and returns the CSV text.
pub fn render(config: &ExperimentConfig, subcommand: Subcommand) -> Result<String, CommandError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        builder = builder.num_threads(n);
    }
    builder.build()?.install(|| render_in_pool(config, subcommand))
}

fn render_in_pool(config: &ExperimentConfig, subcommand: Subcommand) -> Result<String, CommandError> {
    let kinds = if config.policies.is_empty() {
        subcommand.default_policies()
    } else {
        config.policies.clone()
    };
    let streams = if config.common_seeds {
        SeedStreams::Common
    } else {
        SeedStreams::PerPolicy
    };
    let seed = config.root_seed;
    let mut table = Vec::new();
    let mut singles = Vec::new();
    let mut widths_out = Vec::new();
    for name in &config.benchmarks {
        let resolved = config.resolve(name)?;
        let bench = &resolved.benchmark;
        for &kind in &kinds {
            let policy = config.policy(kind, &resolved)?;
            log::info!("{} {} on {}", subcommand, kind, bench.name());
            match subcommand {
                Subcommand::Table2 => table.push(run_many_with(bench, &policy, config.n_runs, seed, streams)?),
                Subcommand::Fig1 | Subcommand::Fig3 => {
                    let options = SweepOptions {
                        include_endpoint: config.include_endpoint,
                        streams,
                    };
                    let sweep = sweep_exploration(bench, &policy, resolved.budget, config.n_runs, seed, options)?;
                    table.extend(sweep.into_iter().map(|(_, s)| s));
                }
                Subcommand::Single => {
                    let traces = run_traces(bench, &policy, 1, seed, streams)?;
                    singles.push((summarize(bench, &policy, &traces), traces[0].seed));
                }
                Subcommand::WidthSweep => {
                    let widths = if config.widths.is_empty() {
                        let side = bench.domain().upper()[0] - bench.domain().lower()[0];
                        RELATIVE_WIDTHS.iter().map(|r| r * side * side).collect()
                    } else {
                        config.widths.clone()
                    };
                    widths_out.extend(width_sweep(bench, &policy, &widths, config.n_runs, seed, streams)?);
                }
            }
        }
    }
    Ok(match subcommand {
        Subcommand::Table2 => report::table_csv(&table),
        Subcommand::Fig1 | Subcommand::Fig3 => report::sweep_csv(&table),
        Subcommand::Single => report::single_csv(&singles),
        Subcommand::WidthSweep => {
            log_best_widths(&widths_out);
            report::width_csv(&widths_out)
        }
    })
}

fn log_best_widths(rows: &[(f64, RegretSummary)]) {
    let mut best: Vec<(&str, PolicyKind, f64, f64)> = Vec::new();
    for (w, s) in rows {
        match best.iter_mut().find(|(b, p, _, _)| *b == s.benchmark && *p == s.policy) {
            Some(entry) if s.mean < entry.3 => {
                entry.2 = *w;
                entry.3 = s.mean;
            }
            Some(_) => {}
            None => best.push((&s.benchmark, s.policy, *w, s.mean)),
        }
    }
    for (b, p, w, m) in best {
        log::info!(
            "best width for {p} on {b}: {} (mean regret {})",
            report::format_g(w),
            report::format_g(m)
        );
    }
}
