//! Synthetic objectives with known maxima, normalized so the maximum is 1.

mod functions;
pub mod tables;

use std::fmt;
use std::sync::Arc;

use crate::domain::BoxDomain;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use functions::{Cosines, Hartman, Michalewicz, Rosenbrock, Shekel};

pub const HARTMAN3_TABLE: &str = include_str!("../../data/hartman3.txt");
pub const HARTMAN6_TABLE: &str = include_str!("../../data/hartman6.txt");
pub const SHEKEL_TABLE: &str = include_str!("../../data/shekel.txt");
pub const MICHALEWICZ_TABLE: &str = include_str!("../../data/michalewicz.txt");

/// Names accepted by [`Benchmark::builtin`], in reporting order.
pub const BUILTIN_NAMES: [&str; 6] = ["cosines", "rosenbrock", "hartman3", "shekel", "michalewicz", "hartman6"];

/// A black-box objective to be maximized.
pub trait Objective<T>: Send + Sync {
    fn evaluate(&self, x: &[T]) -> T;
}

impl<T, F> Objective<T> for F
where
    F: Fn(&[T]) -> T + Send + Sync,
{
    fn evaluate(&self, x: &[T]) -> T {
        self(x)
    }
}

/// Affine map sending the domain maximum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization<T> {
    /// `raw / max`, for a positive maximum.
    Scale { max: T },
    /// `(raw - min) / (max - min)`.
    Affine { min: T, max: T },
}

impl<T: Scalar> Normalization<T> {
    /// Division by the maximum whenever it is positive; otherwise the affine
    /// map over `[min, max]`, which needs an estimate of the minimum.
    pub fn for_range(max: T, min: Option<T>) -> Result<Self> {
        if max > T::zero() {
            return Ok(Normalization::Scale { max });
        }
        match min {
            Some(min) if min < max => Ok(Normalization::Affine { min, max }),
            _ => Err(Error::param(
                "raw_min",
                "a non-positive maximum needs a lower range estimate below it",
            )),
        }
    }

    #[inline]
    pub fn apply(&self, raw: T) -> T {
        match *self {
            Normalization::Scale { max } => raw / max,
            Normalization::Affine { min, max } => (raw - min) / (max - min),
        }
    }
}

/// Objective plus everything the experiments need to know about it.
#[derive(Clone)]
pub struct Benchmark<T> {
    name: String,
    domain: BoxDomain<T>,
    objective: Arc<dyn Objective<T>>,
    raw_max: T,
    raw_argmax: Vec<T>,
    lipschitz: T,
    range_m: Option<T>,
    exploit_width: T,
    normalization: Normalization<T>,
}

impl<T> fmt::Debug for Benchmark<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Benchmark")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("raw_max", &self.raw_max)
            .field("raw_argmax", &self.raw_argmax)
            .field("lipschitz", &self.lipschitz)
            .field("exploit_width", &self.exploit_width)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> Benchmark<T> {
    /// User-supplied objective with a known maximizer.
    ///
    /// `raw_min` is only consulted when `raw_max <= 0`.
    pub fn custom(
        name: impl Into<String>,
        domain: BoxDomain<T>,
        objective: impl Objective<T> + 'static,
        raw_argmax: Vec<T>,
        lipschitz: T,
        exploit_width: T,
        raw_min: Option<T>,
    ) -> Result<Self> {
        if !domain.contains(&raw_argmax)? {
            return Err(Error::OutOfDomain(raw_argmax.iter().map(|v| v.as_f64()).collect()));
        }
        if !(lipschitz > T::zero()) {
            return Err(Error::param("L", format!("must be positive, got {lipschitz}")));
        }
        if !(exploit_width > T::zero()) {
            return Err(Error::param("width", format!("must be positive, got {exploit_width}")));
        }
        let raw_max = objective.evaluate(&raw_argmax);
        let normalization = Normalization::for_range(raw_max, raw_min)?;
        Ok(Self {
            name: name.into(),
            domain,
            objective: Arc::new(objective),
            raw_max,
            raw_argmax,
            lipschitz,
            range_m: raw_min,
            exploit_width,
            normalization,
        })
    }

    /// One of the six built-in benchmarks, by (case-insensitive) name.
    ///
    /// Exploitation widths are the ones with the lowest mean EI regret in a
    /// `width-sweep` (200 runs up to three dimensions, 100 above).
    pub fn builtin(name: &str) -> Result<Self> {
        let key = name.trim().to_ascii_lowercase();
        let c = T::of;
        let b = match key.as_str() {
            "cosines" => Self::custom(
                "cosines",
                BoxDomain::cube(2, c(0.0), c(1.0))?,
                Cosines,
                vec![c(0.3125), c(0.3125)],
                c(6.0),
                c(0.02),
                Some(c(-1.773_214)),
            ),
            "rosenbrock" | "rosen" => Self::custom(
                "rosenbrock",
                BoxDomain::cube(2, c(0.0), c(1.0))?,
                Rosenbrock,
                vec![c(1.0), c(1.0)],
                c(45.0),
                c(0.2),
                Some(c(-91.0)),
            ),
            "hartman3" | "hart3" => {
                let (f, argmax) = Hartman::from_table(HARTMAN3_TABLE, 3)?;
                Self::custom(
                    "hartman3",
                    BoxDomain::cube(3, c(0.0), c(1.0))?,
                    f,
                    argmax,
                    c(3.0),
                    c(0.07),
                    Some(c(0.0)),
                )
            }
            "hartman6" | "hart6" => {
                let (f, argmax) = Hartman::from_table(HARTMAN6_TABLE, 6)?;
                Self::custom(
                    "hartman6",
                    BoxDomain::cube(6, c(0.0), c(1.0))?,
                    f,
                    argmax,
                    c(3.0),
                    c(0.07),
                    Some(c(0.0)),
                )
            }
            "shekel" => {
                let (f, argmax) = Shekel::from_table(SHEKEL_TABLE)?;
                Self::custom(
                    "shekel",
                    BoxDomain::cube(4, c(3.0), c(6.0))?,
                    f,
                    argmax,
                    c(3.0),
                    c(0.2),
                    Some(c(0.408_6)),
                )
            }
            "michalewicz" | "michal" => {
                let argmax = functions::table_argmax(MICHALEWICZ_TABLE, 5)?;
                Self::custom(
                    "michalewicz",
                    BoxDomain::cube(5, c(0.0), T::PI())?,
                    Michalewicz,
                    argmax,
                    c(6.0),
                    c(0.1),
                    Some(c(0.0)),
                )
            }
            _ => return Err(Error::UnknownBenchmark(name.to_string())),
        }?;
        Ok(b)
    }

    /// All six built-ins in reporting order.
    pub fn all_builtin() -> Vec<Self> {
        BUILTIN_NAMES
            .iter()
            .map(|n| Self::builtin(n).expect("built-in tables are valid"))
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &BoxDomain<T> {
        &self.domain
    }

    pub fn evaluate_raw(&self, x: &[T]) -> Result<T> {
        if !self.domain.contains(x)? {
            return Err(Error::OutOfDomain(x.iter().map(|v| v.as_f64()).collect()));
        }
        Ok(self.objective.evaluate(x))
    }

    /// Raw value mapped so that the domain maximum is exactly 1.
    pub fn evaluate_normalized(&self, x: &[T]) -> Result<T> {
        self.evaluate_raw(x).map(|v| self.normalization.apply(v))
    }

    /// `(argmax, max)` of the raw objective.
    pub fn known_optimum(&self) -> (&[T], T) {
        (&self.raw_argmax, self.raw_max)
    }

    /// Lipschitz constant of the normalized objective used by default.
    pub fn default_lipschitz(&self) -> T {
        self.lipschitz
    }

    /// Lower end of the raw range, where known. Informational only.
    pub fn range_min(&self) -> Option<T> {
        self.range_m
    }

    /// Exploitation kernel width used when none is configured.
    pub fn default_exploit_width(&self) -> T {
        self.exploit_width
    }

    pub fn with_exploit_width(mut self, width: T) -> Self {
        self.exploit_width = width;
        self
    }

    pub fn normalization(&self) -> Normalization<T> {
        self.normalization
    }

    /// Default budget: 15 evaluations up to three dimensions, 35 above.
    pub fn default_budget(&self) -> usize {
        if self.dim() <= 3 {
            15
        } else {
            35
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn rosenbrock_values() {
        let b = Benchmark::<f64>::builtin("rosenbrock").unwrap();
        assert_eq!(b.evaluate_raw(&[1.0, 1.0]).unwrap(), 10.0);
        assert_eq!(b.evaluate_raw(&[0.0, 0.0]).unwrap(), 9.0);
        assert!(close(b.evaluate_normalized(&[0.0, 0.0]).unwrap(), 0.9, 1e-15));
        let (x, m) = b.known_optimum();
        assert_eq!((x, m), (&[1.0, 1.0][..], 10.0));
    }

    #[test]
    fn cosines_values() {
        let b = Benchmark::<f64>::builtin("cosines").unwrap();
        assert!(close(b.evaluate_raw(&[0.3125, 0.3125]).unwrap(), 1.6, 1e-15));
        assert!(close(b.evaluate_raw(&[0.5, 0.5]).unwrap(), 0.249_366, 1e-6));
        assert!(close(b.evaluate_normalized(&[0.5, 0.5]).unwrap(), 0.155_854, 1e-6));
        assert!(close(b.evaluate_normalized(&[0.3125, 0.3125]).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn lipschitz_defaults() {
        let l = |n| Benchmark::<f64>::builtin(n).unwrap().default_lipschitz();
        assert_eq!(l("cosines"), 6.0);
        assert_eq!(l("rosenbrock"), 45.0);
        assert_eq!(l("shekel"), 3.0);
        assert_eq!(l("hartman3"), 3.0);
        assert_eq!(l("hartman6"), 3.0);
        assert_eq!(l("michalewicz"), 6.0);
    }

    #[test]
    fn optimum_is_consistent() {
        for b in Benchmark::<f64>::all_builtin() {
            let (x, m) = b.known_optimum();
            assert!(close(b.evaluate_raw(x).unwrap(), m, 1e-9), "{}", b.name());
            assert!(close(b.evaluate_normalized(x).unwrap(), 1.0, 1e-12), "{}", b.name());
        }
    }

    #[test]
    fn literature_maxima() {
        let m = |n| Benchmark::<f64>::builtin(n).unwrap().known_optimum().1;
        assert!(close(m("hartman3"), 3.86278, 1e-5));
        assert!(close(m("hartman6"), 3.32237, 1e-5));
        assert!(close(m("shekel"), 10.5364, 1e-4));
        assert!(close(m("michalewicz"), 4.687658, 1e-6));
    }

    #[test]
    fn shekel_near_four() {
        let b = Benchmark::<f64>::builtin("shekel").unwrap();
        assert!(close(b.evaluate_raw(&[4.0, 4.0, 4.0, 4.0]).unwrap(), 10.5364, 1e-3));
    }

    #[test]
    fn out_of_domain_rejected() {
        let b = Benchmark::<f64>::builtin("shekel").unwrap();
        assert!(matches!(
            b.evaluate_raw(&[1.0, 4.0, 4.0, 4.0]),
            Err(Error::OutOfDomain(_))
        ));
        assert!(b.evaluate_raw(&[4.0, 4.0]).is_err());
        assert!(Benchmark::<f64>::builtin("hydrogen").is_err());
    }

    #[test]
    fn aliases_and_case() {
        assert_eq!(Benchmark::<f64>::builtin("Hart6").unwrap().name(), "hartman6");
        assert_eq!(Benchmark::<f64>::builtin(" MICHAL ").unwrap().name(), "michalewicz");
    }

    #[test]
    fn affine_normalization_for_negative_maximum() {
        let d = BoxDomain::cube(1, -1.0, 1.0).unwrap();
        let b = Benchmark::custom(
            "neg",
            d,
            |x: &[f64]| -1.0 - x[0] * x[0],
            vec![0.0],
            2.0,
            0.1,
            Some(-2.0),
        )
        .unwrap();
        assert_eq!(b.evaluate_normalized(&[0.0]).unwrap(), 1.0);
        assert_eq!(b.evaluate_normalized(&[1.0]).unwrap(), 0.0);
        let d = BoxDomain::cube(1, -1.0, 1.0).unwrap();
        assert!(Benchmark::custom("neg", d, |x: &[f64]| -1.0 - x[0], vec![0.0], 2.0, 0.1, None).is_err());
    }

    #[test]
    fn f32_builtins_evaluate() {
        let b = Benchmark::<f32>::builtin("hartman3").unwrap();
        let (x, _) = b.known_optimum();
        let x = x.to_vec();
        assert!((b.evaluate_normalized(&x).unwrap() - 1.0).abs() < 1e-5);
    }
}
