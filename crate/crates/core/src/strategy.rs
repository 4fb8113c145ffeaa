//! Lipschitz-based selection rules.
//!
//! A sample `x` with value `f(x)` rules out the open ball of radius
//! `r_x = (M - f(x)) / L` around it: any point inside would violate the
//! Lipschitz bound against the maximum `M`. Before evaluating, `r_x` is
//! bracketed with the posterior, `(|M - mu| -/+ beta sigma) / L`, each side
//! holding with probability at least `1 - exp(-2 beta^2)`.
//!
//! * **NBRS** (exploration) picks the candidate whose lower-bound ball
//!   removes the most volume from the still unexplored region.
//! * **NBIS** (exploitation) picks the unexplored candidate with the
//!   smallest upper-bound radius, i.e. the point most likely to sit close to
//!   the maximizer.
//!
//! Both rules optimize over a dense uniform candidate set filtered to the
//! unexplored region.

use log::warn;
use rand::Rng;

use crate::domain::{unit_ball_points, BoxDomain, ExclusionRegion, ObservationSet};
use crate::error::{Error, Result};
use crate::gp::{KernelParams, PosteriorModel, MAX_JITTER};
use crate::scalar::{squared_distance, unit_ball_volume, Scalar};

pub const DEFAULT_BETA: f64 = 1.5;
pub const DEFAULT_MC_COUNT: usize = 2000;
pub const CANDIDATES_PER_DIM: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzSpec<T> {
    /// Known (or assumed) maximum of the objective.
    pub max: T,
    pub lipschitz: T,
    /// Confidence multiplier on sigma.
    pub beta: T,
}

impl<T: Scalar> LipschitzSpec<T> {
    pub fn new(max: T, lipschitz: T, beta: T) -> Result<Self> {
        if !(lipschitz > T::zero() && lipschitz.is_finite()) {
            return Err(Error::param("L", format!("must be positive, got {lipschitz}")));
        }
        if !(beta >= T::zero() && beta.is_finite()) {
            return Err(Error::param("beta", format!("must be non-negative, got {beta}")));
        }
        if !max.is_finite() {
            return Err(Error::param("M", "must be finite"));
        }
        Ok(Self { max, lipschitz, beta })
    }

    /// `M` and `L` with the default `beta = 1.5`.
    pub fn with_defaults(max: T, lipschitz: T) -> Result<Self> {
        Self::new(max, lipschitz, T::of(DEFAULT_BETA))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyConfig<T> {
    /// Uniform candidates drawn per selection step.
    pub candidate_count: usize,
    /// Monte-Carlo points per ball in the volume estimate.
    pub mc_count: usize,
    pub explore_kernel: KernelParams<T>,
    pub exploit_kernel: KernelParams<T>,
}

impl<T: Scalar> StrategyConfig<T> {
    pub fn new(
        candidate_count: usize,
        mc_count: usize,
        explore_kernel: KernelParams<T>,
        exploit_kernel: KernelParams<T>,
    ) -> Result<Self> {
        if candidate_count == 0 {
            return Err(Error::param("candidate_count", "must be at least 1"));
        }
        if mc_count == 0 {
            return Err(Error::param("mc_count", "must be at least 1"));
        }
        Ok(Self {
            candidate_count,
            mc_count,
            explore_kernel,
            exploit_kernel,
        })
    }

    /// Defaults for `domain`: `2000 d` candidates, 2000 Monte-Carlo points
    /// and an exploration width equal to the squared box diagonal, so every
    /// sample informs the whole box.
    pub fn for_domain(domain: &BoxDomain<T>, exploit_width: T) -> Result<Self> {
        Self::new(
            CANDIDATES_PER_DIM * domain.dim(),
            DEFAULT_MC_COUNT,
            KernelParams::with_width(domain.diagonal_sq())?,
            KernelParams::with_width(exploit_width)?,
        )
    }
}

/// Split of a run's budget between the two phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhasePlan {
    pub n_explore: usize,
    pub n_exploit: usize,
}

/// `round(fraction * budget)` exploration steps, kept within
/// `[1, budget - 1]` whenever the fraction is positive.
pub fn plan_budget(budget: usize, explore_fraction: f64) -> Result<PhasePlan> {
    if budget == 0 {
        return Err(Error::param("budget", "must be at least 1"));
    }
    if !(0.0..1.0).contains(&explore_fraction) {
        return Err(Error::param(
            "explore_fraction",
            format!("must lie in [0, 1), got {explore_fraction}"),
        ));
    }
    let n_explore = if explore_fraction > 0.0 {
        let raw = (explore_fraction * budget as f64).round() as usize;
        raw.clamp(1, budget.saturating_sub(1).max(1))
    } else {
        0
    };
    Ok(PhasePlan {
        n_explore,
        n_exploit: budget - n_explore,
    })
}

/// `(|M - mu| - beta sigma) / L`; negative for far, uncertain points.
#[inline]
pub fn radius_lower_bound<T: Scalar>(mu: T, sigma: T, spec: &LipschitzSpec<T>) -> T {
    ((spec.max - mu).abs() - spec.beta * sigma) / spec.lipschitz
}

/// `(|M - mu| + beta sigma) / L`, the exploitation objective `h`.
#[inline]
pub fn radius_upper_bound<T: Scalar>(mu: T, sigma: T, spec: &LipschitzSpec<T>) -> T {
    ((spec.max - mu).abs() + spec.beta * sigma) / spec.lipschitz
}

/// Hoeffding tail `exp(-2 beta^2)`: probability that the realized radius
/// falls outside one of the confidence bounds.
pub fn confidence_level<T: Scalar>(beta: T) -> T {
    (-T::of(2.0) * beta * beta).exp()
}

/// Monte-Carlo volume of `region ∩ S(x, radius)`.
///
/// `unit_ball` holds points uniform in the unit ball (flat, `d` coordinates
/// each); they are scaled by `radius` and shifted to `x`. A point counts when
/// it lies in the box and outside every elimination sphere.
pub fn explored_volume_with<T: Scalar>(x: &[T], radius: T, region: &ExclusionRegion<T>, unit_ball: &[T]) -> T {
    let d = x.len();
    if !(radius > T::zero()) || unit_ball.is_empty() || d == 0 {
        return T::zero();
    }
    // spheres that can intersect S(x, radius); a non-positive radius excludes a single point only
    let nearby: Vec<_> = region
        .spheres()
        .iter()
        .filter(|s| s.radius > T::zero() && squared_distance(&s.center, x) < (s.radius + radius) * (s.radius + radius))
        .collect();
    let lower = region.domain().lower();
    let upper = region.domain().upper();
    let mut p = vec![T::zero(); d];
    let total = unit_ball.len() / d;
    let mut hits = 0usize;
    'points: for u in unit_ball.chunks_exact(d) {
        for i in 0..d {
            let v = x[i] + radius * u[i];
            if v < lower[i] || v > upper[i] {
                continue 'points;
            }
            p[i] = v;
        }
        if nearby
            .iter()
            .any(|s| squared_distance(&p, &s.center) < s.radius * s.radius)
        {
            continue;
        }
        hits += 1;
    }
    T::of_usize(hits) / T::of_usize(total) * unit_ball_volume::<T>(d) * radius.powi(d as i32)
}

/// Exploration objective `g(x) = Vol(D_t ∩ S(x, r_lower(x)))`, estimated with
/// `cfg.mc_count` fresh uniform ball points. Zero when the lower-bound radius
/// is not positive.
pub fn explored_volume_gain<T: Scalar, R: Rng + ?Sized>(
    x: &[T],
    region: &ExclusionRegion<T>,
    model: &PosteriorModel<T>,
    spec: &LipschitzSpec<T>,
    cfg: &StrategyConfig<T>,
    rng: &mut R,
) -> Result<T> {
    region.domain().check_dim(x)?;
    let (mu, sigma) = model.predict(x)?;
    let r = radius_lower_bound(mu, sigma, spec);
    if !(r > T::zero()) {
        return Ok(T::zero());
    }
    let unit = unit_ball_points::<T, R>(x.len(), rng, cfg.mc_count);
    Ok(explored_volume_with(x, r, region, &unit))
}

/// Outcome of one selection step.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection<T> {
    pub point: Vec<T>,
    /// Score of the chosen point: `g` for NBRS, `h` for NBIS, the minimum
    /// distance to the data for the exhaustion fallback.
    pub score: T,
    /// Every candidate fell inside an elimination sphere; the point came
    /// from the max-min-distance fallback instead.
    pub exhausted: bool,
}

/// Next exploration sample (NBRS).
pub fn nbrs_next<T: Scalar, R: Rng + ?Sized>(
    domain: &BoxDomain<T>,
    observations: &ObservationSet<T>,
    spec: &LipschitzSpec<T>,
    cfg: &StrategyConfig<T>,
    rng: &mut R,
) -> Result<Selection<T>> {
    let (region, model) = prepare(domain, observations, spec, &cfg.explore_kernel)?;
    let candidates = domain.sample(rng, cfg.candidate_count);
    let survivors: Vec<usize> = (0..candidates.len())
        .filter(|&i| region.is_unexplored(&candidates[i]))
        .collect();
    if survivors.is_empty() {
        return Ok(exhaustion_fallback(candidates, observations, "NBRS"));
    }

    let mut scratch = Vec::with_capacity(model.len());
    let radii: Vec<T> = survivors
        .iter()
        .map(|&i| {
            let (mu, sigma) = model.predict_with(&candidates[i], &mut scratch);
            radius_lower_bound(mu, sigma, spec)
        })
        .collect();
    // one set of ball points per step, shared by every candidate
    let unit = unit_ball_points::<T, R>(domain.dim(), rng, cfg.mc_count);
    let survivor_points: Vec<&[T]> = survivors.iter().map(|&i| candidates[i].as_slice()).collect();
    let (best, gain) = max_volume_candidate(&survivor_points, &radii, &region, &unit);
    let point = candidates[survivors[best]].clone();
    Ok(Selection {
        point,
        score: gain,
        exhausted: false,
    })
}

/// Index and value of the largest explored volume among `candidates`, ties
/// going to the lowest index.
///
/// Candidates are visited by decreasing radius; once the full-ball volume
/// `V_d r^d` of the next radius drops below the best gain found, no later
/// candidate can win and the scan stops. The result equals scoring every
/// candidate.
pub fn max_volume_candidate<T: Scalar>(
    candidates: &[&[T]],
    radii: &[T],
    region: &ExclusionRegion<T>,
    unit_ball: &[T],
) -> (usize, T) {
    debug_assert_eq!(candidates.len(), radii.len());
    let d = region.domain().dim();
    let unit_volume = unit_ball_volume::<T>(d);
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        radii[b]
            .partial_cmp(&radii[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut best = (usize::MAX, T::neg_infinity());
    for &i in &order {
        let r = radii[i];
        let gain = if r > T::zero() {
            let bound = unit_volume * r.powi(d as i32);
            if bound < best.1 {
                break;
            }
            explored_volume_with(candidates[i], r, region, unit_ball)
        } else {
            if best.1 > T::zero() {
                break;
            }
            T::zero()
        };
        if gain > best.1 || (gain == best.1 && i < best.0) {
            best = (i, gain);
        }
    }
    best
}

/// Next exploitation sample (NBIS): the unexplored candidate minimizing
/// `h(x) = (|M - mu| + beta sigma) / L`.
pub fn nbis_next<T: Scalar, R: Rng + ?Sized>(
    domain: &BoxDomain<T>,
    observations: &ObservationSet<T>,
    spec: &LipschitzSpec<T>,
    cfg: &StrategyConfig<T>,
    rng: &mut R,
) -> Result<Selection<T>> {
    let (region, model) = prepare(domain, observations, spec, &cfg.exploit_kernel)?;
    let candidates = domain.sample(rng, cfg.candidate_count);
    let mut scratch = Vec::with_capacity(model.len());
    let mut best: Option<(usize, T)> = None;
    for (i, c) in candidates.iter().enumerate() {
        if !region.is_unexplored(c) {
            continue;
        }
        let (mu, sigma) = model.predict_with(c, &mut scratch);
        let h = radius_upper_bound(mu, sigma, spec);
        match best {
            Some((_, b)) if !(h < b) => {}
            _ => best = Some((i, h)),
        }
    }
    match best {
        Some((i, h)) => Ok(Selection {
            point: candidates[i].clone(),
            score: h,
            exhausted: false,
        }),
        None => Ok(exhaustion_fallback(candidates, observations, "NBIS")),
    }
}

fn prepare<T: Scalar>(
    domain: &BoxDomain<T>,
    observations: &ObservationSet<T>,
    spec: &LipschitzSpec<T>,
    kernel: &KernelParams<T>,
) -> Result<(ExclusionRegion<T>, PosteriorModel<T>)> {
    if observations.is_empty() {
        return Err(Error::EmptyObservations);
    }
    if observations.dim() != domain.dim() {
        return Err(Error::dims(domain.dim(), observations.dim()));
    }
    let region = ExclusionRegion::from_observations(domain.clone(), observations, spec.max, spec.lipschitz)?;
    let model = PosteriorModel::fit_regularized(observations, *kernel, T::of(MAX_JITTER))?;
    Ok((region, model))
}

/// Candidate farthest from its nearest observation.
fn exhaustion_fallback<T: Scalar>(
    candidates: Vec<Vec<T>>,
    observations: &ObservationSet<T>,
    rule: &str,
) -> Selection<T> {
    warn!(
        "{rule}: all {} candidates lie in eliminated spheres; falling back to max-min distance",
        candidates.len()
    );
    let mut best = (0usize, T::neg_infinity());
    for (i, c) in candidates.iter().enumerate() {
        let nearest = observations
            .iter()
            .map(|o| squared_distance(c, &o.x))
            .fold(T::infinity(), T::min);
        if nearest > best.1 {
            best = (i, nearest);
        }
    }
    let (i, d2) = best;
    let mut candidates = candidates;
    Selection {
        point: candidates.swap_remove(i),
        score: d2.sqrt(),
        exhausted: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Sphere;
    use crate::seeding::StreamRng;
    use rand::SeedableRng;

    fn spec(max: f64, l: f64) -> LipschitzSpec<f64> {
        LipschitzSpec::with_defaults(max, l).unwrap()
    }

    #[test]
    fn lower_bound_values() {
        assert!((radius_lower_bound(0.7, 0.06, &spec(1.0, 3.0)) - 0.07).abs() < 1e-15);
        assert_eq!(radius_lower_bound(1.0, 0.0, &spec(1.0, 3.0)), 0.0);
        let r = radius_lower_bound(0.9, 0.2, &spec(1.0, 3.0));
        assert!((r + 0.2 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn upper_bound_values() {
        let s = spec(1.0, 3.0);
        assert!((radius_upper_bound(0.9, 0.02, &s) - 0.13 / 3.0).abs() < 1e-15);
        assert_eq!(radius_upper_bound(1.0, 0.0, &s), 0.0);
        assert_eq!(radius_upper_bound(0.4, 0.0, &s), radius_lower_bound(0.4, 0.0, &s));
        assert!(radius_upper_bound(0.4, 0.1, &s) > radius_lower_bound(0.4, 0.1, &s));
    }

    #[test]
    fn hoeffding_levels() {
        assert!((confidence_level(1.5_f64) - (-4.5_f64).exp()).abs() < 1e-18);
        assert_eq!(confidence_level(0.0_f64), 1.0);
        assert!((confidence_level(2.0_f64) - 3.354_626_279_025_119e-4).abs() < 1e-16);
    }

    #[test]
    fn spec_validation() {
        assert!(LipschitzSpec::new(1.0, 0.0, 1.5).is_err());
        assert!(LipschitzSpec::new(1.0, 3.0, -0.1).is_err());
        assert!(LipschitzSpec::new(f64::NAN, 3.0, 1.5).is_err());
    }

    #[test]
    fn budget_plans() {
        let p = |b, f| plan_budget(b, f).unwrap();
        assert_eq!(
            p(15, 0.2),
            PhasePlan {
                n_explore: 3,
                n_exploit: 12
            }
        );
        assert_eq!(
            p(35, 0.2),
            PhasePlan {
                n_explore: 7,
                n_exploit: 28
            }
        );
        assert_eq!(
            p(10, 0.0),
            PhasePlan {
                n_explore: 0,
                n_exploit: 10
            }
        );
        assert_eq!(
            p(3, 0.01),
            PhasePlan {
                n_explore: 1,
                n_exploit: 2
            }
        );
        assert_eq!(
            p(4, 0.99),
            PhasePlan {
                n_explore: 3,
                n_exploit: 1
            }
        );
        assert_eq!(
            p(1, 0.5),
            PhasePlan {
                n_explore: 1,
                n_exploit: 0
            }
        );
        assert!(plan_budget(0, 0.2).is_err());
        assert!(plan_budget(10, 1.0).is_err());
        assert!(plan_budget(10, -0.1).is_err());
    }

    #[test]
    fn volume_of_covered_ball_is_zero() {
        let mut region = ExclusionRegion::new(BoxDomain::cube(2, 0.0, 1.0).unwrap());
        region.push(Sphere::new(vec![0.5, 0.5], 0.2)).unwrap();
        let unit = unit_ball_points::<f64, _>(2, &mut StreamRng::seed_from_u64(3), 5000);
        assert_eq!(explored_volume_with(&[0.5, 0.5], 0.2, &region, &unit), 0.0);
        assert_eq!(explored_volume_with(&[0.5, 0.5], -0.2, &region, &unit), 0.0);
    }

    #[test]
    fn pruned_scan_matches_exhaustive_scoring() {
        let domain = BoxDomain::cube(2, 0.0, 1.0).unwrap();
        let mut region = ExclusionRegion::new(domain.clone());
        region.push(Sphere::new(vec![0.2, 0.3], 0.25)).unwrap();
        region.push(Sphere::new(vec![0.7, 0.8], 0.15)).unwrap();
        let mut rng = StreamRng::seed_from_u64(17);
        let cands = domain.sample(&mut rng, 300);
        let radii: Vec<f64> = (0..300).map(|_| rng.random::<f64>() * 0.3 - 0.05).collect();
        let unit = unit_ball_points::<f64, _>(2, &mut rng, 500);
        let refs: Vec<&[f64]> = cands.iter().map(|c| c.as_slice()).collect();

        let gains: Vec<f64> = refs
            .iter()
            .zip(&radii)
            .map(|(c, &r)| explored_volume_with(c, r, &region, &unit))
            .collect();
        let brute = crate::acquisition::argmax_score(&gains, |&g| g).unwrap();
        let (best, gain) = max_volume_candidate(&refs, &radii, &region, &unit);
        assert_eq!(best, brute);
        assert_eq!(gain, gains[brute]);
        // rescaling by the unit-ball constant cannot move the argmax
        let vd = unit_ball_volume::<f64>(2);
        let scaled = crate::acquisition::argmax_score(&gains, |&g| g / vd).unwrap();
        assert_eq!(scaled, best);
    }

    #[test]
    fn all_nonpositive_radii_pick_first() {
        let domain = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        let region = ExclusionRegion::new(domain);
        let pts = [[0.1], [0.5], [0.9]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let unit = [0.5, -0.5];
        let (best, gain) = max_volume_candidate(&refs, &[-0.1, -0.2, 0.0], &region, &unit);
        assert_eq!((best, gain), (0, 0.0));
    }

    #[test]
    fn exhaustion_falls_back_to_farthest_candidate() {
        let domain = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        let mut obs = ObservationSet::new(1);
        obs.push(vec![0.5], 0.0).unwrap();
        // radius (1 - 0)/1 = 1 covers the whole segment
        let s = spec(1.0, 1.0);
        let k = KernelParams::with_width(1.0).unwrap();
        let cfg = StrategyConfig::new(50, 10, k, k).unwrap();
        for sel in [
            nbrs_next(&domain, &obs, &s, &cfg, &mut StreamRng::seed_from_u64(1)).unwrap(),
            nbis_next(&domain, &obs, &s, &cfg, &mut StreamRng::seed_from_u64(1)).unwrap(),
        ] {
            assert!(sel.exhausted);
            assert!(domain.contains(&sel.point).unwrap());
            assert!((sel.point[0] - 0.5).abs() > 0.4);
        }
    }

    #[test]
    fn empty_observations_rejected() {
        let domain = BoxDomain::cube(1, 0.0, 1.0).unwrap();
        let obs = ObservationSet::new(1);
        let k = KernelParams::with_width(1.0).unwrap();
        let cfg = StrategyConfig::new(5, 5, k, k).unwrap();
        let mut rng = StreamRng::seed_from_u64(0);
        assert_eq!(
            nbrs_next(&domain, &obs, &spec(1.0, 1.0), &cfg, &mut rng),
            Err(Error::EmptyObservations)
        );
        assert_eq!(
            nbis_next(&domain, &obs, &spec(1.0, 1.0), &cfg, &mut rng),
            Err(Error::EmptyObservations)
        );
    }
}
