//! Search-space geometry: boxes, observations, elimination spheres and the
//! uniform samplers everything else is built on.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{squared_distance, Scalar};

/// Axis-aligned box `[a_1, b_1] x ... x [a_d, b_d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain<T> {
    lower: Vec<T>,
    upper: Vec<T>,
}

impl<T: Scalar> BoxDomain<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidDomain("dimension must be at least 1".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::InvalidDomain(format!(
                "lower has {} coordinates, upper has {}",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (&a, &b)) in lower.iter().zip(&upper).enumerate() {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidDomain(format!(
                    "coordinate {i}: need finite a < b, got [{a}, {b}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The cube `[a, b]^d`.
    pub fn cube(d: usize, a: T, b: T) -> Result<Self> {
        Self::new(vec![a; d], vec![b; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    /// `sum_i (b_i - a_i)^2`, the squared length of the box diagonal.
    pub fn diagonal_sq(&self) -> T {
        squared_distance(&self.lower, &self.upper)
    }

    pub fn volume(&self) -> T {
        self.lower
            .iter()
            .zip(&self.upper)
            .fold(T::one(), |v, (&a, &b)| v * (b - a))
    }

    /// Inclusive membership test.
    pub fn contains(&self, x: &[T]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.contains_unchecked(x))
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, x: &[T]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&a, &b))| a <= v && v <= b)
    }

    pub fn check_dim(&self, x: &[T]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::dims(self.dim(), x.len()))
        }
    }

    /// One point drawn uniformly from the box.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<T> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&a, &b)| {
                let u = T::of(rng.random::<f64>());
                // u < 1 keeps the draw inside [a, b) up to rounding; clamp the rest
                (a + (b - a) * u).min(b)
            })
            .collect()
    }

    /// `count` points drawn uniformly from the box.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<Vec<T>> {
        (0..count).map(|_| self.sample_point(rng)).collect()
    }
}

/// A sampled point and its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<T> {
    pub x: Vec<T>,
    pub y: T,
}

/// Ordered samples together with the running maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet<T> {
    dim: usize,
    items: Vec<Observation<T>>,
    best: Option<usize>,
}

impl<T: Scalar> ObservationSet<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            items: Vec::new(),
            best: None,
        }
    }

    /// Appends a sample. Duplicate locations and non-finite values are
    /// rejected: a repeated `x` makes the noise-free Gram matrix singular.
    pub fn push(&mut self, x: Vec<T>, y: T) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::dims(self.dim, x.len()));
        }
        if !y.is_finite() {
            return Err(Error::param("y", format!("objective value {y} is not finite")));
        }
        if self.items.iter().any(|o| o.x == x) {
            return Err(Error::DuplicateObservation(x.iter().map(|v| v.as_f64()).collect()));
        }
        let idx = self.items.len();
        match self.best {
            Some(b) if self.items[b].y >= y => {}
            _ => self.best = Some(idx),
        }
        self.items.push(Observation { x, y });
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Observation<T>] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Observation<T>> {
        self.items.iter()
    }

    /// Largest observed value, `None` while empty.
    pub fn y_max(&self) -> Option<T> {
        self.best.map(|b| self.items[b].y)
    }

    /// Observation holding `y_max` (the earliest one on ties).
    pub fn best(&self) -> Option<&Observation<T>> {
        self.best.map(|b| &self.items[b])
    }
}

/// Closed ball `S(center, radius)`; with `radius <= 0` it is the single
/// point `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere<T> {
    pub center: Vec<T>,
    pub radius: T,
}

impl<T: Scalar> Sphere<T> {
    pub fn new(center: Vec<T>, radius: T) -> Self {
        Self { center, radius }
    }

    /// Open-interior membership: the boundary itself is not contained.
    pub fn contains(&self, x: &[T]) -> Result<bool> {
        if x.len() != self.center.len() {
            return Err(Error::dims(self.center.len(), x.len()));
        }
        Ok(self.contains_unchecked(x))
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, x: &[T]) -> bool {
        if self.radius <= T::zero() {
            return x == self.center.as_slice();
        }
        squared_distance(x, &self.center) < self.radius * self.radius
    }
}

/// Elimination radius `(M - y) / L` of a sample with value `y`.
pub fn realized_radius<T: Scalar>(max: T, lipschitz: T, y: T) -> Result<T> {
    if !(lipschitz > T::zero()) {
        return Err(Error::param("L", format!("must be positive, got {lipschitz}")));
    }
    Ok((max - y) / lipschitz)
}

/// The box minus a union of elimination spheres.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionRegion<T> {
    domain: BoxDomain<T>,
    spheres: Vec<Sphere<T>>,
}

impl<T: Scalar> ExclusionRegion<T> {
    pub fn new(domain: BoxDomain<T>) -> Self {
        Self {
            domain,
            spheres: Vec::new(),
        }
    }

    /// Region left after eliminating `S(x_i, (M - f(x_i)) / L)` for every
    /// observation.
    pub fn from_observations(
        domain: BoxDomain<T>,
        observations: &ObservationSet<T>,
        max: T,
        lipschitz: T,
    ) -> Result<Self> {
        let mut region = Self::new(domain);
        for o in observations.iter() {
            region.push(Sphere::new(o.x.clone(), realized_radius(max, lipschitz, o.y)?))?;
        }
        Ok(region)
    }

    pub fn push(&mut self, sphere: Sphere<T>) -> Result<()> {
        self.domain.check_dim(&sphere.center)?;
        self.spheres.push(sphere);
        Ok(())
    }

    pub fn domain(&self) -> &BoxDomain<T> {
        &self.domain
    }

    pub fn spheres(&self) -> &[Sphere<T>] {
        &self.spheres
    }

    /// Inside the box and outside every sphere. Points of the wrong
    /// dimension are never unexplored.
    pub fn is_unexplored(&self, x: &[T]) -> bool {
        x.len() == self.domain.dim()
            && self.domain.contains_unchecked(x)
            && !self.spheres.iter().any(|s| s.contains_unchecked(x))
    }
}

/// `count` points uniform in the unit ball of dimension `d`, stored flat
/// (`count * d` coordinates).
///
/// Direction comes from a normalized Gaussian vector and the radius from
/// `U^(1/d)`.
pub fn unit_ball_points<T: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R, count: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(count * d);
    let mut dir = vec![0.0_f64; d];
    let inv_d = 1.0 / d as f64;
    for _ in 0..count {
        let norm = loop {
            for v in dir.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 0.0 {
                break n;
            }
        };
        let radial = rng.random::<f64>().powf(inv_d);
        out.extend(dir.iter().map(|v| T::of(v / norm * radial)));
    }
    out
}

/// `count` points uniform in the ball of the given center and radius.
pub fn uniform_ball_sample<T: Scalar, R: Rng + ?Sized>(
    center: &[T],
    radius: T,
    rng: &mut R,
    count: usize,
) -> Result<Vec<Vec<T>>> {
    if !(radius > T::zero()) {
        return Err(Error::param("radius", format!("must be positive, got {radius}")));
    }
    let d = center.len();
    if d == 0 {
        return Err(Error::dims(1, 0));
    }
    let unit = unit_ball_points::<T, R>(d, rng, count);
    Ok(unit
        .chunks_exact(d)
        .map(|u| center.iter().zip(u).map(|(&c, &v)| c + radius * v).collect())
        .collect())
}
