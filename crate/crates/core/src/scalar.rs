//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type the optimizer can run on: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Never fails for the implemented types.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Standard normal density.
#[inline]
pub fn normal_pdf<T: Scalar>(z: T) -> T {
    let half = T::of(0.5);
    (-half * z * z).exp() / (T::PI() + T::PI()).sqrt()
}

/// Standard normal CDF through the complementary error function, accurate
/// to a few ulps in the tails where `1 + erf` would cancel.
#[inline]
pub fn normal_cdf<T: Scalar>(z: T) -> T {
    T::of(0.5 * libm::erfc(-z.as_f64() / std::f64::consts::SQRT_2))
}

/// Squared Euclidean distance. Slices must have equal length.
#[inline]
pub fn squared_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&p, &q)| (p - q) * (p - q))
        .fold(T::zero(), |acc, v| acc + v)
}

/// Volume of the unit ball in `d` dimensions, `pi^(d/2) / Gamma(d/2 + 1)`.
pub fn unit_ball_volume<T: Scalar>(d: usize) -> T {
    // V_0 = 1, V_1 = 2, V_d = (2 pi / d) V_{d-2}
    let two_pi = T::PI() + T::PI();
    let mut v = if d.is_multiple_of(2) { T::one() } else { T::of(2.0) };
    let mut k = if d.is_multiple_of(2) { 2 } else { 3 };
    while k <= d {
        v = v * two_pi / T::of_usize(k);
        k += 2;
    }
    v
}
