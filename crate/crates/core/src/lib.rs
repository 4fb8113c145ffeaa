//! Lipschitz-aware Bayesian optimization.
//!
//! A noise-free Gaussian-process surrogate drives two families of selection
//! rules:
//!
//! * the classic expected-improvement baselines (EI and the improvement
//!   truncated at a known maximum, EI_M), and
//! * a two-phase scheme that first picks samples whose confidence spheres
//!   carve the most volume out of the unexplored search space (NBRS) and
//!   then picks samples whose upper-confidence radius to the maximum is
//!   smallest (NBIS).
//!
//! All numerical code is generic over the scalar type through [`Scalar`];
//! the aliases at the crate root fix it to `f64` (or `f32` with the `32`
//! suffix) for everyday use.

// `!(x > 0)` deliberately treats NaN as invalid.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acquisition;
pub mod benchmarks;
pub mod domain;
pub mod error;
pub mod gp;
pub mod harness;
pub mod scalar;
pub mod seeding;
pub mod strategy;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type BoxDomain = domain::BoxDomain<f64>;
pub type BoxDomain32 = domain::BoxDomain<f32>;
pub type ObservationSet = domain::ObservationSet<f64>;
pub type ObservationSet32 = domain::ObservationSet<f32>;
pub type Sphere = domain::Sphere<f64>;
pub type ExclusionRegion = domain::ExclusionRegion<f64>;
pub type KernelParams = gp::KernelParams<f64>;
pub type KernelParams32 = gp::KernelParams<f32>;
pub type PosteriorModel = gp::PosteriorModel<f64>;
pub type PosteriorModel32 = gp::PosteriorModel<f32>;
pub type LipschitzSpec = strategy::LipschitzSpec<f64>;
pub type StrategyConfig = strategy::StrategyConfig<f64>;
pub type Benchmark = benchmarks::Benchmark<f64>;
pub type Benchmark32 = benchmarks::Benchmark<f32>;
pub type PolicySpec = harness::PolicySpec<f64>;
pub type RunTrace = harness::RunTrace<f64>;
