//! Experiment configuration.
//!
//! One `key = value` pair per line; `#` starts a comment and blank lines are
//! ignored. List-valued keys take comma-separated values. Unknown keys are
//! rejected.
//!
//! | key               | default                          |
//! |-------------------|----------------------------------|
//! | `benchmark`       | (required) built-in name(s)      |
//! | `policy`          | per subcommand                   |
//! | `budget`          | 15 for d <= 3, else 35           |
//! | `n_runs`          | 200                              |
//! | `seed`            | 0                                |
//! | `explore_fraction`| 0.2                              |
//! | `n_explore`       | from `explore_fraction`          |
//! | `lipschitz`       | benchmark constant               |
//! | `max`             | 1                                |
//! | `beta`            | 1.5                              |
//! | `explore_width`   | squared box diagonal             |
//! | `exploit_width`   | benchmark default                |
//! | `widths`          | sweep grid for `width-sweep`     |
//! | `jitter`          | 1e-10                            |
//! | `candidate_count` | 2000 d                           |
//! | `mc_count`        | 2000                             |
//! | `common_seeds`    | true                             |
//! | `include_endpoint`| false                            |
//! | `threads`         | available cores                  |
//! | `output`          | `<subcommand>.csv`               |

use std::path::PathBuf;

use lipbo::benchmarks::Benchmark;
use lipbo::gp::{KernelParams, DEFAULT_JITTER};
use lipbo::harness::{PolicyKind, PolicySpec};
use lipbo::strategy::{plan_budget, LipschitzSpec, StrategyConfig, CANDIDATES_PER_DIM, DEFAULT_BETA, DEFAULT_MC_COUNT};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}`: {message}")]
    Value { line: usize, key: String, message: String },
    #[error("`{key}`: {message}")]
    Range { key: String, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub benchmarks: Vec<String>,
    pub policies: Vec<PolicyKind>,
    pub budget: Option<usize>,
    pub n_runs: usize,
    pub root_seed: u64,
    pub explore_fraction: f64,
    pub n_explore: Option<usize>,
    pub lipschitz: Option<f64>,
    pub max: f64,
    pub beta: f64,
    pub explore_width: Option<f64>,
    pub exploit_width: Option<f64>,
    pub widths: Vec<f64>,
    pub jitter: f64,
    pub candidate_count: Option<usize>,
    pub mc_count: usize,
    pub common_seeds: bool,
    pub include_endpoint: bool,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            benchmarks: Vec::new(),
            policies: Vec::new(),
            budget: None,
            n_runs: 200,
            root_seed: 0,
            explore_fraction: 0.2,
            n_explore: None,
            lipschitz: None,
            max: 1.0,
            beta: DEFAULT_BETA,
            explore_width: None,
            exploit_width: None,
            widths: Vec::new(),
            jitter: DEFAULT_JITTER,
            candidate_count: None,
            mc_count: DEFAULT_MC_COUNT,
            common_seeds: true,
            include_endpoint: false,
            threads: None,
            output: None,
        }
    }
}

/// Settings resolved for one benchmark.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub benchmark: Benchmark<f64>,
    pub budget: usize,
    pub lipschitz: LipschitzSpec<f64>,
    pub strategy: StrategyConfig<f64>,
}

impl ExperimentConfig {
    /// Benchmark-specific values with every default filled in.
    pub fn resolve(&self, name: &str) -> Result<Resolved, ConfigError> {
        let range = |key: &str, e: lipbo::Error| ConfigError::Range {
            key: key.to_string(),
            message: e.to_string(),
        };
        let benchmark = Benchmark::<f64>::builtin(name).map_err(|e| range("benchmark", e))?;
        let budget = self.budget.unwrap_or_else(|| benchmark.default_budget());
        let lipschitz = LipschitzSpec::new(
            self.max,
            self.lipschitz.unwrap_or_else(|| benchmark.default_lipschitz()),
            self.beta,
        )
        .map_err(|e| range("lipschitz", e))?;
        let explore_width = self.explore_width.unwrap_or_else(|| benchmark.domain().diagonal_sq());
        let exploit_width = self.exploit_width.unwrap_or_else(|| benchmark.default_exploit_width());
        let strategy = StrategyConfig::new(
            self.candidate_count.unwrap_or(CANDIDATES_PER_DIM * benchmark.dim()),
            self.mc_count,
            KernelParams::new(explore_width, self.jitter).map_err(|e| range("explore_width", e))?,
            KernelParams::new(exploit_width, self.jitter).map_err(|e| range("exploit_width", e))?,
        )
        .map_err(|e| range("candidate_count", e))?;
        Ok(Resolved {
            benchmark,
            budget,
            lipschitz,
            strategy,
        })
    }

    /// Policy of the given kind for a resolved benchmark. Pure EI kinds
    /// spend one random sample unless `n_explore` is set.
    pub fn policy(&self, kind: PolicyKind, resolved: &Resolved) -> Result<PolicySpec<f64>, ConfigError> {
        let range = |key: &str, e: lipbo::Error| ConfigError::Range {
            key: key.to_string(),
            message: e.to_string(),
        };
        let n_explore = match (self.n_explore, kind) {
            (Some(n), _) => n,
            (None, PolicyKind::Ei | PolicyKind::EiM) => 1,
            (None, _) => {
                plan_budget(resolved.budget, self.explore_fraction)
                    .map_err(|e| range("explore_fraction", e))?
                    .n_explore
            }
        };
        PolicySpec::new(kind, n_explore, resolved.budget, resolved.lipschitz, resolved.strategy)
            .map_err(|e| range("n_explore", e))
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |message: String| ConfigError::Value {
            line,
            key: key.to_string(),
            message,
        };
        if value.is_empty() {
            return Err(bad("missing value".into()));
        }
        match key {
            "benchmark" | "benchmarks" => {
                cfg.benchmarks = list(value)
                    .map(|name| {
                        Benchmark::<f64>::builtin(name)
                            .map(|b| b.name().to_string())
                            .map_err(|e| bad(e.to_string()))
                    })
                    .collect::<Result<_, _>>()?;
            }
            "policy" | "policies" => {
                cfg.policies = list(value)
                    .map(|p| p.parse::<PolicyKind>().map_err(|e| bad(e.to_string())))
                    .collect::<Result<_, _>>()?;
            }
            "budget" => cfg.budget = Some(positive_int(value).map_err(bad)?),
            "n_runs" | "runs" => cfg.n_runs = positive_int(value).map_err(bad)?,
            "seed" => cfg.root_seed = value.parse().map_err(|_| bad(format!("`{value}` is not a u64")))?,
            "explore_fraction" => {
                let f = number(value).map_err(bad)?;
                if !(0.0..1.0).contains(&f) {
                    return Err(bad(format!("{f} outside [0, 1)")));
                }
                cfg.explore_fraction = f;
            }
            "n_explore" => {
                cfg.n_explore = Some(value.parse().map_err(|_| bad(format!("`{value}` is not an integer")))?)
            }
            "lipschitz" | "L" => cfg.lipschitz = Some(positive(value).map_err(bad)?),
            "max" | "M" => cfg.max = number(value).map_err(bad)?,
            "beta" => {
                let b = number(value).map_err(bad)?;
                if b < 0.0 {
                    return Err(bad(format!("{b} is negative")));
                }
                cfg.beta = b;
            }
            "explore_width" => cfg.explore_width = Some(positive(value).map_err(bad)?),
            "exploit_width" => cfg.exploit_width = Some(positive(value).map_err(bad)?),
            "widths" => cfg.widths = list(value).map(positive).collect::<Result<_, _>>().map_err(bad)?,
            "jitter" => {
                let j = number(value).map_err(bad)?;
                if j < 0.0 {
                    return Err(bad(format!("{j} is negative")));
                }
                cfg.jitter = j;
            }
            "candidate_count" => cfg.candidate_count = Some(positive_int(value).map_err(bad)?),
            "mc_count" => cfg.mc_count = positive_int(value).map_err(bad)?,
            "common_seeds" => cfg.common_seeds = boolean(value).map_err(bad)?,
            "include_endpoint" => cfg.include_endpoint = boolean(value).map_err(bad)?,
            "threads" => cfg.threads = Some(positive_int(value).map_err(bad)?),
            "output" => cfg.output = Some(PathBuf::from(value)),
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
    }
    if cfg.benchmarks.is_empty() {
        return Err(ConfigError::Range {
            key: "benchmark".into(),
            message: "at least one benchmark is required".into(),
        });
    }
    if let (Some(n), Some(b)) = (cfg.n_explore, cfg.budget) {
        if n > b {
            return Err(ConfigError::Range {
                key: "n_explore".into(),
                message: format!("{n} exceeds the budget {b}"),
            });
        }
    }
    Ok(cfg)
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn number(value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{value}` is not a finite number"))
}

fn positive(value: &str) -> Result<f64, String> {
    let v = number(value)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be positive"))
    }
}

fn positive_int(value: &str) -> Result<usize, String> {
    match value.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(_) => Err(format!("`{value}` is not a positive integer")),
    }
}

fn boolean(value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("`{value}` is not a boolean")),
    }
}
