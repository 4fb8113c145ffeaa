use crate::error::Result;
use crate::scalar::Scalar;

use super::tables::ConstantTable;
use super::Objective;

/// `1 - (u^2 + v^2 - 0.3 cos(3 pi u) - 0.3 cos(3 pi v))` with
/// `u = 1.6 x - 0.5`, `v = 1.6 y - 0.5`.
#[derive(Debug, Clone, Copy)]
pub struct Cosines;

impl<T: Scalar> Objective<T> for Cosines {
    fn evaluate(&self, x: &[T]) -> T {
        let c = T::of;
        let three_pi = c(3.0) * T::PI();
        let term = |t: T| {
            let s = c(1.6) * t - c(0.5);
            s * s - c(0.3) * (three_pi * s).cos()
        };
        T::one() - (term(x[0]) + term(x[1]))
    }
}

/// `10 - 100 (y - x^2)^2 - (1 - x)^2`.
#[derive(Debug, Clone, Copy)]
pub struct Rosenbrock;

impl<T: Scalar> Objective<T> for Rosenbrock {
    fn evaluate(&self, x: &[T]) -> T {
        let c = T::of;
        let (a, b) = (x[0], x[1]);
        let valley = b - a * a;
        let off = T::one() - a;
        c(10.0) - c(100.0) * valley * valley - off * off
    }
}

/// `sum_i omega_i exp(-sum_j A_ij (x_j - P_ij)^2)`.
#[derive(Debug, Clone)]
pub struct Hartman<T> {
    omega: Vec<T>,
    a: Vec<T>,
    p: Vec<T>,
    dim: usize,
}

impl<T: Scalar> Hartman<T> {
    /// Builds from a table with blocks `omega 1x4`, `A 4xd`, `P 4xd`,
    /// `argmax 1xd`; returns the objective and its maximizer.
    pub fn from_table(text: &str, dim: usize) -> Result<(Self, Vec<T>)> {
        let t = ConstantTable::parse(text)?;
        let conv = |v: &[f64]| v.iter().map(|&x| T::of(x)).collect::<Vec<T>>();
        let f = Self {
            omega: conv(&t.require("omega", 1, 4)?.data),
            a: conv(&t.require("A", 4, dim)?.data),
            p: conv(&t.require("P", 4, dim)?.data),
            dim,
        };
        let argmax = conv(&t.require("argmax", 1, dim)?.data);
        Ok((f, argmax))
    }
}

impl<T: Scalar> Objective<T> for Hartman<T> {
    fn evaluate(&self, x: &[T]) -> T {
        let d = self.dim;
        self.omega
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let inner = (0..d).fold(T::zero(), |acc, j| {
                    let diff = x[j] - self.p[i * d + j];
                    acc + self.a[i * d + j] * diff * diff
                });
                w * (-inner).exp()
            })
            .fold(T::zero(), |acc, v| acc + v)
    }
}

/// `sum_i 1 / (omega_i + sum_j (x_j - B_ji)^2)` in four dimensions.
#[derive(Debug, Clone)]
pub struct Shekel<T> {
    omega: Vec<T>,
    /// 4 x m, row-major.
    b: Vec<T>,
}

impl<T: Scalar> Shekel<T> {
    pub fn from_table(text: &str) -> Result<(Self, Vec<T>)> {
        let t = ConstantTable::parse(text)?;
        let conv = |v: &[f64]| v.iter().map(|&x| T::of(x)).collect::<Vec<T>>();
        let m = t.get("omega").map_or(0, |o| o.cols);
        let f = Self {
            omega: conv(&t.require("omega", 1, m)?.data),
            b: conv(&t.require("B", 4, m)?.data),
        };
        Ok((f, conv(&t.require("argmax", 1, 4)?.data)))
    }
}

impl<T: Scalar> Objective<T> for Shekel<T> {
    fn evaluate(&self, x: &[T]) -> T {
        let m = self.omega.len();
        self.omega
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let dist = (0..4).fold(T::zero(), |acc, j| {
                    let diff = x[j] - self.b[j * m + i];
                    acc + diff * diff
                });
                T::one() / (w + dist)
            })
            .fold(T::zero(), |acc, v| acc + v)
    }
}

/// `sum_i sin(x_i) sin(i x_i^2 / pi)^20`, maximized (values are >= 0 on
/// `[0, pi]^d`).
#[derive(Debug, Clone, Copy)]
pub struct Michalewicz;

impl<T: Scalar> Objective<T> for Michalewicz {
    fn evaluate(&self, x: &[T]) -> T {
        x.iter()
            .enumerate()
            .map(|(i, &v)| v.sin() * (T::of_usize(i + 1) * v * v / T::PI()).sin().powi(20))
            .fold(T::zero(), |acc, v| acc + v)
    }
}

pub(crate) fn table_argmax<T: Scalar>(text: &str, dim: usize) -> Result<Vec<T>> {
    let t = ConstantTable::parse(text)?;
    Ok(t.require("argmax", 1, dim)?.data.iter().map(|&x| T::of(x)).collect())
}
