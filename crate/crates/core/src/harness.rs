//! Experiment engine: budgeted runs of a policy on a benchmark, repeated over
//! derived seeds and reduced to regret statistics.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::acquisition::{
    argmax_score, bounded_expected_improvement, expected_improvement, AcquisitionInput, BoundedEiForm,
};
use crate::benchmarks::Benchmark;
use crate::domain::ObservationSet;
use crate::error::{Error, Result};
use crate::gp::{KernelParams, PosteriorModel, MAX_JITTER};
use crate::scalar::Scalar;
use crate::seeding::{run_seed, step_rng, StreamRng};
use crate::strategy::{nbis_next, nbrs_next, plan_budget, LipschitzSpec, StrategyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    /// Random start, then expected improvement.
    Ei,
    /// Random start, then improvement truncated at the known maximum.
    EiM,
    RandomThenEi,
    NbrsThenEi,
    RandomThenNbis,
    NbrsThenNbis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Explore {
    Random,
    Nbrs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exploit {
    Ei,
    EiM,
    Nbis,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::Ei,
        PolicyKind::EiM,
        PolicyKind::RandomThenEi,
        PolicyKind::NbrsThenEi,
        PolicyKind::RandomThenNbis,
        PolicyKind::NbrsThenNbis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Ei => "EI",
            PolicyKind::EiM => "EI_M",
            PolicyKind::RandomThenEi => "RANDOM_THEN_EI",
            PolicyKind::NbrsThenEi => "NBRS_THEN_EI",
            PolicyKind::RandomThenNbis => "RANDOM_THEN_NBIS",
            PolicyKind::NbrsThenNbis => "NBRS_THEN_NBIS",
        }
    }

    fn explore(self) -> Explore {
        match self {
            PolicyKind::NbrsThenEi | PolicyKind::NbrsThenNbis => Explore::Nbrs,
            _ => Explore::Random,
        }
    }

    fn exploit(self) -> Exploit {
        match self {
            PolicyKind::EiM => Exploit::EiM,
            PolicyKind::RandomThenNbis | PolicyKind::NbrsThenNbis => Exploit::Nbis,
            _ => Exploit::Ei,
        }
    }

    /// Policies whose selection phase needs at least one prior sample to
    /// define the incumbent.
    pub fn needs_random_start(self) -> bool {
        self.exploit() != Exploit::Nbis
    }

    /// Whether the exploration phase uses the Lipschitz rule.
    pub fn lipschitz_exploration(self) -> bool {
        self.explore() == Explore::Nbrs
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace(['+', '-', ' '], "_");
        let kind = match key.as_str() {
            "EI" => PolicyKind::Ei,
            "EI_M" | "EIM" => PolicyKind::EiM,
            "RANDOM_THEN_EI" | "RANDOM_EI" => PolicyKind::RandomThenEi,
            "NBRS_THEN_EI" | "NBRS_EI" => PolicyKind::NbrsThenEi,
            "RANDOM_THEN_NBIS" | "RANDOM_NBIS" => PolicyKind::RandomThenNbis,
            "NBRS_THEN_NBIS" | "NBRS_NBIS" => PolicyKind::NbrsThenNbis,
            _ => return Err(Error::param("policy", format!("unknown policy `{s}`"))),
        };
        Ok(kind)
    }
}

/// Complete description of how one run chooses its samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicySpec<T> {
    pub kind: PolicyKind,
    /// Exploration steps, counting the initial uniform sample.
    pub n_explore: usize,
    pub budget: usize,
    pub lipschitz: LipschitzSpec<T>,
    pub strategy: StrategyConfig<T>,
    pub bounded_form: BoundedEiForm,
}

impl<T: Scalar> PolicySpec<T> {
    pub fn new(
        kind: PolicyKind,
        n_explore: usize,
        budget: usize,
        lipschitz: LipschitzSpec<T>,
        strategy: StrategyConfig<T>,
    ) -> Result<Self> {
        let spec = Self {
            kind,
            n_explore,
            budget,
            lipschitz,
            strategy,
            bounded_form: BoundedEiForm::Exact,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Policy with the benchmark's defaults: `M = 1`, its Lipschitz
    /// constant, `beta = 1.5`, the default candidate and Monte-Carlo counts
    /// and its exploitation width. The pure EI kinds spend one random
    /// sample; the others explore `explore_fraction` of the budget.
    pub fn for_benchmark(
        kind: PolicyKind,
        benchmark: &Benchmark<T>,
        budget: usize,
        explore_fraction: f64,
    ) -> Result<Self> {
        let n_explore = match kind {
            PolicyKind::Ei | PolicyKind::EiM => 1,
            _ => plan_budget(budget, explore_fraction)?.n_explore,
        };
        Self::new(
            kind,
            n_explore,
            budget,
            LipschitzSpec::with_defaults(T::one(), benchmark.default_lipschitz())?,
            StrategyConfig::for_domain(benchmark.domain(), benchmark.default_exploit_width())?,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::param("budget", "must be at least 1"));
        }
        if self.n_explore > self.budget {
            return Err(Error::param(
                "n_explore",
                format!("{} exceeds the budget {}", self.n_explore, self.budget),
            ));
        }
        if self.kind.needs_random_start() && self.n_explore == 0 {
            return Err(Error::param(
                "n_explore",
                format!("{} needs at least one initial random sample", self.kind),
            ));
        }
        Ok(())
    }

    pub fn with_n_explore(mut self, n_explore: usize) -> Result<Self> {
        self.n_explore = n_explore;
        self.validate()?;
        Ok(self)
    }

    pub fn with_budget(mut self, budget: usize) -> Result<Self> {
        self.budget = budget;
        self.validate()?;
        Ok(self)
    }

    pub fn with_exploit_width(mut self, width: T) -> Result<Self> {
        self.strategy.exploit_kernel = KernelParams::new(width, self.strategy.exploit_kernel.jitter)?;
        Ok(self)
    }

    /// Identifier mixed into run seeds when streams are per policy.
    pub fn stream_id(&self) -> String {
        format!("{}/{}/{}", self.kind.name(), self.n_explore, self.budget)
    }
}

/// Everything one run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace<T> {
    pub seed: u64,
    pub points: Vec<Vec<T>>,
    /// Normalized objective values, in evaluation order.
    pub values: Vec<T>,
    pub best_so_far: Vec<T>,
    /// `1 - max value`: the normalized maximum is 1.
    pub regret: T,
    /// Steps where every candidate was eliminated and the fallback chose.
    pub exhausted_steps: usize,
}

impl<T: Scalar> RunTrace<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Regret after each step.
    pub fn regret_curve(&self) -> Vec<T> {
        self.best_so_far.iter().map(|&b| T::one() - b).collect()
    }
}

/// One budgeted run. Step 0 is uniform in the box; steps `1..n_explore`
/// follow the exploration rule and the rest the selection rule.
pub fn run_once<T: Scalar>(benchmark: &Benchmark<T>, policy: &PolicySpec<T>, seed: u64) -> Result<RunTrace<T>> {
    policy.validate()?;
    let domain = benchmark.domain();
    let mut obs = ObservationSet::new(domain.dim());
    let mut best_so_far = Vec::with_capacity(policy.budget);
    let mut exhausted_steps = 0;

    for step in 0..policy.budget {
        let wrap = |e: Error| Error::Step {
            step,
            source: Box::new(e),
        };
        let mut rng = step_rng(seed, step as u64);
        let x = if step == 0 {
            domain.sample_point(&mut rng)
        } else {
            let (x, exhausted) = next_point(benchmark, policy, &obs, step, &mut rng).map_err(wrap)?;
            exhausted_steps += usize::from(exhausted);
            x
        };
        let y = benchmark.evaluate_normalized(&x).map_err(wrap)?;
        obs.push(x, y).map_err(wrap)?;
        best_so_far.push(obs.y_max().expect("non-empty"));
    }

    let regret = T::one() - *best_so_far.last().expect("budget >= 1");
    let (points, values) = obs.iter().map(|o| (o.x.clone(), o.y)).unzip();
    Ok(RunTrace {
        seed,
        points,
        values,
        best_so_far,
        regret,
        exhausted_steps,
    })
}

fn next_point<T: Scalar>(
    benchmark: &Benchmark<T>,
    policy: &PolicySpec<T>,
    obs: &ObservationSet<T>,
    step: usize,
    rng: &mut StreamRng,
) -> Result<(Vec<T>, bool)> {
    let domain = benchmark.domain();
    let spec = &policy.lipschitz;
    let cfg = &policy.strategy;
    if step < policy.n_explore {
        return match policy.kind.explore() {
            Explore::Random => Ok((domain.sample_point(rng), false)),
            Explore::Nbrs => nbrs_next(domain, obs, spec, cfg, rng).map(|s| (s.point, s.exhausted)),
        };
    }
    match policy.kind.exploit() {
        Exploit::Nbis => nbis_next(domain, obs, spec, cfg, rng).map(|s| (s.point, s.exhausted)),
        rule => {
            let model = PosteriorModel::fit_regularized(obs, cfg.exploit_kernel, T::of(MAX_JITTER))?;
            let y_max = obs.y_max().ok_or(Error::EmptyObservations)?;
            let candidates = domain.sample(rng, cfg.candidate_count);
            let mut scratch = Vec::with_capacity(model.len());
            let mut scores = Vec::with_capacity(candidates.len());
            for c in &candidates {
                let (mu, sigma) = model.predict_with(c, &mut scratch);
                let input = AcquisitionInput::new(mu, sigma, y_max).with_max(spec.max);
                scores.push(match rule {
                    Exploit::EiM => bounded_expected_improvement(&input, policy.bounded_form)?,
                    _ => expected_improvement(&input),
                });
            }
            let best = argmax_score(&scores, |&s| s)?;
            Ok((candidates[best].clone(), false))
        }
    }
}

/// How run seeds are derived across policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedStreams {
    /// Each policy (kind, exploration count, budget) has its own stream.
    #[default]
    PerPolicy,
    /// Run `j` of every policy uses the same seed (common random numbers).
    Common,
}

const COMMON_STREAM: &str = "common";

/// Mean and spread of final regrets over independent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretSummary {
    pub benchmark: String,
    pub policy: PolicyKind,
    pub n_explore: usize,
    pub budget: usize,
    pub n_runs: usize,
    pub mean: f64,
    /// Unbiased sample variance; 0 for a single run.
    pub variance: f64,
    pub std_error: f64,
}

impl RegretSummary {
    pub fn from_regrets(benchmark: &str, policy: PolicyKind, n_explore: usize, budget: usize, regrets: &[f64]) -> Self {
        let n = regrets.len();
        let mean = regrets.iter().sum::<f64>() / n as f64;
        let variance = if n > 1 {
            regrets.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            benchmark: benchmark.to_string(),
            policy,
            n_explore,
            budget,
            n_runs: n,
            mean,
            variance,
            std_error: (variance / n as f64).sqrt(),
        }
    }
}

/// Traces of `n_runs` runs; run `j` uses the seed derived from
/// `(root_seed, benchmark, stream, j)`. Runs execute in parallel and are
/// returned in index order.
pub fn run_traces<T: Scalar>(
    benchmark: &Benchmark<T>,
    policy: &PolicySpec<T>,
    n_runs: usize,
    root_seed: u64,
    streams: SeedStreams,
) -> Result<Vec<RunTrace<T>>> {
    if n_runs == 0 {
        return Err(Error::param("n_runs", "must be at least 1"));
    }
    policy.validate()?;
    let stream = match streams {
        SeedStreams::PerPolicy => policy.stream_id(),
        SeedStreams::Common => COMMON_STREAM.to_string(),
    };
    (0..n_runs as u64)
        .into_par_iter()
        .map(|j| run_once(benchmark, policy, run_seed(root_seed, benchmark.name(), &stream, j)))
        .collect()
}

pub fn summarize<T: Scalar>(benchmark: &Benchmark<T>, policy: &PolicySpec<T>, traces: &[RunTrace<T>]) -> RegretSummary {
    let regrets: Vec<f64> = traces.iter().map(|t| t.regret.as_f64()).collect();
    RegretSummary::from_regrets(benchmark.name(), policy.kind, policy.n_explore, policy.budget, &regrets)
}

/// [`run_traces`] with per-policy streams, reduced to a summary.
pub fn run_many<T: Scalar>(
    benchmark: &Benchmark<T>,
    policy: &PolicySpec<T>,
    n_runs: usize,
    root_seed: u64,
) -> Result<RegretSummary> {
    run_many_with(benchmark, policy, n_runs, root_seed, SeedStreams::PerPolicy)
}

pub fn run_many_with<T: Scalar>(
    benchmark: &Benchmark<T>,
    policy: &PolicySpec<T>,
    n_runs: usize,
    root_seed: u64,
    streams: SeedStreams,
) -> Result<RegretSummary> {
    let traces = run_traces(benchmark, policy, n_runs, root_seed, streams)?;
    Ok(summarize(benchmark, policy, &traces))
}

/// One summary per policy, in the given order.
pub fn compare_policies<T: Scalar>(
    benchmark: &Benchmark<T>,
    policies: &[PolicySpec<T>],
    n_runs: usize,
    root_seed: u64,
    streams: SeedStreams,
) -> Result<Vec<RegretSummary>> {
    if policies.len() < 2 {
        return Err(Error::param("policies", "comparison needs at least two policies"));
    }
    policies
        .iter()
        .map(|p| run_many_with(benchmark, p, n_runs, root_seed, streams))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Also run `k = budget` (no selection steps at all).
    pub include_endpoint: bool,
    pub streams: SeedStreams,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            include_endpoint: false,
            streams: SeedStreams::Common,
        }
    }
}

/// Regret against the number of exploration steps `k = 1 .. budget - 1`
/// (and `budget` with the endpoint option), the rest of the budget going to
/// the policy's selection rule.
pub fn sweep_exploration<T: Scalar>(
    benchmark: &Benchmark<T>,
    base_policy: &PolicySpec<T>,
    budget: usize,
    n_runs: usize,
    root_seed: u64,
    options: SweepOptions,
) -> Result<Vec<(usize, RegretSummary)>> {
    if budget < 2 {
        return Err(Error::param("budget", "a sweep needs a budget of at least 2"));
    }
    let last = if options.include_endpoint { budget } else { budget - 1 };
    (1..=last)
        .map(|k| {
            let policy = base_policy.clone().with_budget(budget)?.with_n_explore(k)?;
            let summary = run_many_with(benchmark, &policy, n_runs, root_seed, options.streams)?;
            Ok((k, summary))
        })
        .collect()
}

/// Regret of `base_policy` under each exploitation kernel width.
pub fn width_sweep<T: Scalar>(
    benchmark: &Benchmark<T>,
    base_policy: &PolicySpec<T>,
    widths: &[T],
    n_runs: usize,
    root_seed: u64,
    streams: SeedStreams,
) -> Result<Vec<(T, RegretSummary)>> {
    widths
        .iter()
        .map(|&w| {
            let policy = base_policy.clone().with_exploit_width(w)?;
            Ok((w, run_many_with(benchmark, &policy, n_runs, root_seed, streams)?))
        })
        .collect()
}
