//! Closed-form acquisition scores under a Gaussian posterior and the dense
//! candidate maximizer used by the EI baselines.

use crate::error::{Error, Result};
use crate::scalar::{normal_cdf, normal_pdf, Scalar};

/// Posterior summary at one point plus the reference levels the scores use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcquisitionInput<T> {
    pub mu: T,
    pub sigma: T,
    pub y_max: T,
    /// Known maximum of the objective; only the bounded score reads it.
    pub max: T,
}

impl<T: Scalar> AcquisitionInput<T> {
    pub fn new(mu: T, sigma: T, y_max: T) -> Self {
        Self {
            mu,
            sigma,
            y_max,
            max: T::infinity(),
        }
    }

    pub fn with_max(mut self, max: T) -> Self {
        self.max = max;
        self
    }
}

/// Which closed form [`bounded_expected_improvement`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundedEiForm {
    /// `sigma (phi(u1) - phi(u2) - u1 Phi(u2) + u1 Phi(u1))`, the exact
    /// truncated expectation.
    #[default]
    Exact,
    /// `sigma (phi(u1) - u1 Phi(u2) + u1 Phi(u1))`: the same expression
    /// without the `-sigma phi(u2)` term from the upper integration limit.
    /// Kept for comparing against results computed with that form; it does
    /// not vanish at `M = y_max`.
    OmitUpperBoundaryTerm,
}

/// `E[(f - y_max)^+]` for `f ~ N(mu, sigma^2)`.
///
/// At `sigma = 0` this is `max(mu - y_max, 0)`.
pub fn expected_improvement<T: Scalar>(input: &AcquisitionInput<T>) -> T {
    let AcquisitionInput { mu, sigma, y_max, .. } = *input;
    let gap = mu - y_max;
    if !(sigma > T::zero()) {
        return gap.max(T::zero());
    }
    let z = gap / sigma;
    (gap * normal_cdf(z) + sigma * normal_pdf(z)).max(T::zero())
}

/// `E[(f - y_max) 1{0 <= f - y_max <= M - y_max}]` for `f ~ N(mu, sigma^2)`.
///
/// With `u1 = (y_max - mu)/sigma` and `u2 = (M - mu)/sigma` the exact value is
/// `sigma (phi(u1) - phi(u2) - u1 Phi(u2) + u1 Phi(u1))`. At `sigma = 0` the
/// improvement is deterministic and counts only inside `[0, M - y_max]`.
pub fn bounded_expected_improvement<T: Scalar>(input: &AcquisitionInput<T>, form: BoundedEiForm) -> Result<T> {
    let AcquisitionInput { mu, sigma, y_max, max } = *input;
    if max < y_max || max.is_nan() {
        return Err(Error::param(
            "M",
            format!("known maximum {max} is below the incumbent {y_max}"),
        ));
    }
    if !(sigma > T::zero()) {
        let gap = mu - y_max;
        let inside = gap >= T::zero() && gap <= max - y_max;
        return Ok(if inside { gap } else { T::zero() });
    }
    let u1 = (y_max - mu) / sigma;
    let u2 = (max - mu) / sigma;
    // Phi(u2) - Phi(u1) without cancellation when both sit in the upper tail
    let mass = if u1 > T::zero() {
        normal_cdf(-u1) - normal_cdf(-u2)
    } else {
        normal_cdf(u2) - normal_cdf(u1)
    };
    let upper_pdf = if u2.is_finite() { normal_pdf(u2) } else { T::zero() };
    let value = match form {
        BoundedEiForm::Exact => sigma * (normal_pdf(u1) - upper_pdf - u1 * mass),
        BoundedEiForm::OmitUpperBoundaryTerm => sigma * (normal_pdf(u1) - u1 * mass),
    };
    Ok(match form {
        BoundedEiForm::Exact => value.max(T::zero()),
        BoundedEiForm::OmitUpperBoundaryTerm => value,
    })
}

/// Index of the highest-scoring candidate; ties keep the lowest index and
/// NaN scores never win.
pub fn argmax_score<P, T, F>(candidates: &[P], mut score: F) -> Result<usize>
where
    T: PartialOrd + Copy,
    F: FnMut(&P) -> T,
{
    let mut best: Option<(usize, T)> = None;
    for (i, c) in candidates.iter().enumerate() {
        let s = score(c);
        if s.partial_cmp(&s).is_none() {
            continue;
        }
        match best {
            Some((_, b)) if !(s > b) => {}
            _ => best = Some((i, s)),
        }
    }
    match best {
        Some((i, _)) => Ok(i),
        None if candidates.is_empty() => Err(Error::EmptyCandidates),
        None => Ok(0),
    }
}
