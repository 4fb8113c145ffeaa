//! Noise-free Gaussian-process regression with the Gaussian kernel
//! `k(x1, x2) = exp(-|x1 - x2|^2 / width)`.
//!
//! The prior has zero mean and unit signal variance, so `k(x, x) = 1` and a
//! query far from every sample falls back to `(mu, sigma) = (0, 1)`.

use log::debug;

use crate::domain::ObservationSet;
use crate::error::{Error, Result};
use crate::scalar::{squared_distance, Scalar};

pub const DEFAULT_JITTER: f64 = 1e-10;

/// Largest jitter [`PosteriorModel::fit_regularized`] escalates to.
pub const MAX_JITTER: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams<T> {
    /// Divisor of the squared distance inside the exponential.
    pub width: T,
    /// Added to the Gram diagonal before factorization.
    pub jitter: T,
}

impl<T: Scalar> KernelParams<T> {
    pub fn new(width: T, jitter: T) -> Result<Self> {
        if !(width > T::zero() && width.is_finite()) {
            return Err(Error::param("width", format!("must be positive, got {width}")));
        }
        if !(jitter >= T::zero() && jitter.is_finite()) {
            return Err(Error::param("jitter", format!("must be non-negative, got {jitter}")));
        }
        Ok(Self { width, jitter })
    }

    /// Kernel of the given width with the default jitter.
    pub fn with_width(width: T) -> Result<Self> {
        Self::new(width, T::of(DEFAULT_JITTER))
    }

    #[inline]
    pub(crate) fn eval(&self, x1: &[T], x2: &[T]) -> T {
        (-squared_distance(x1, x2) / self.width).exp()
    }
}

pub fn gaussian_kernel<T: Scalar>(x1: &[T], x2: &[T], params: &KernelParams<T>) -> Result<T> {
    if x1.len() != x2.len() {
        return Err(Error::dims(x1.len(), x2.len()));
    }
    Ok(params.eval(x1, x2))
}

/// Fitted posterior. Immutable once built.
#[derive(Debug, Clone)]
pub struct PosteriorModel<T> {
    train_x: Vec<Vec<T>>,
    train_y: Vec<T>,
    params: KernelParams<T>,
    /// Row-major lower Cholesky factor of `K + jitter I`.
    chol: Vec<T>,
    /// `(K + jitter I)^-1 y`
    weights: Vec<T>,
}

impl<T: Scalar> PosteriorModel<T> {
    pub fn fit(observations: &ObservationSet<T>, params: KernelParams<T>) -> Result<Self> {
        let xs = observations.iter().map(|o| o.x.clone()).collect();
        let ys = observations.iter().map(|o| o.y).collect();
        Self::fit_points(xs, ys, params)
    }

    /// Fits from raw training data. Repeated points are rejected.
    pub fn fit_points(train_x: Vec<Vec<T>>, train_y: Vec<T>, params: KernelParams<T>) -> Result<Self> {
        let n = train_x.len();
        if n == 0 {
            return Err(Error::EmptyObservations);
        }
        if train_y.len() != n {
            return Err(Error::dims(n, train_y.len()));
        }
        let d = train_x[0].len();
        for (i, x) in train_x.iter().enumerate() {
            if x.len() != d {
                return Err(Error::dims(d, x.len()));
            }
            if train_x[..i].iter().any(|p| p == x) {
                return Err(Error::DuplicateObservation(x.iter().map(|v| v.as_f64()).collect()));
            }
        }

        let mut gram = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..i {
                let k = params.eval(&train_x[i], &train_x[j]);
                gram[i * n + j] = k;
                gram[j * n + i] = k;
            }
            gram[i * n + i] = T::one() + params.jitter;
        }
        let chol = cholesky(&gram, n).map_err(|pivot| Error::NotPositiveDefinite {
            pivot,
            jitter: params.jitter.as_f64(),
        })?;
        let mut weights = train_y.clone();
        solve_lower(&chol, n, &mut weights);
        solve_lower_transposed(&chol, n, &mut weights);

        Ok(Self {
            train_x,
            train_y,
            params,
            chol,
            weights,
        })
    }

    /// Like [`fit`](Self::fit) but retries with ten times the jitter while
    /// the factorization fails, up to `max_jitter`.
    ///
    /// Wide kernels over clustered samples produce Gram matrices whose
    /// condition number exceeds what the default jitter can absorb.
    pub fn fit_regularized(observations: &ObservationSet<T>, params: KernelParams<T>, max_jitter: T) -> Result<Self> {
        let mut p = params;
        loop {
            match Self::fit(observations, p) {
                Err(Error::NotPositiveDefinite { .. }) if p.jitter < max_jitter => {
                    let next = if p.jitter > T::zero() {
                        p.jitter * T::of(10.0)
                    } else {
                        T::of(DEFAULT_JITTER)
                    };
                    debug!(
                        "Gram factorization failed at jitter {}, retrying with {}",
                        p.jitter, next
                    );
                    p.jitter = next.min(max_jitter);
                }
                other => return other,
            }
        }
    }

    pub fn params(&self) -> &KernelParams<T> {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.train_y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.train_y.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.train_x[0].len()
    }

    pub fn train_x(&self) -> &[Vec<T>] {
        &self.train_x
    }

    pub fn train_y(&self) -> &[T] {
        &self.train_y
    }

    /// Lower Cholesky factor, row-major `n x n`.
    pub fn factor(&self) -> &[T] {
        &self.chol
    }

    /// Posterior `(mu, sigma)` at `x`.
    pub fn predict(&self, x: &[T]) -> Result<(T, T)> {
        if x.len() != self.dim() {
            return Err(Error::dims(self.dim(), x.len()));
        }
        let mut scratch = Vec::with_capacity(self.len());
        Ok(self.predict_with(x, &mut scratch))
    }

    /// Allocation-free prediction for hot loops; `x` must have the model's
    /// dimension.
    pub fn predict_with(&self, x: &[T], scratch: &mut Vec<T>) -> (T, T) {
        let n = self.len();
        scratch.clear();
        scratch.extend(self.train_x.iter().map(|xi| self.params.eval(x, xi)));
        let mu = scratch
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&k, &w)| acc + k * w);
        solve_lower(&self.chol, n, scratch);
        let explained = scratch.iter().fold(T::zero(), |acc, &v| acc + v * v);
        let var = T::one() - explained;
        (mu, var.max(T::zero()).sqrt())
    }
}

/// Lower Cholesky factor of the symmetric row-major matrix `a`. Returns the
/// failing pivot index when `a` is not numerically positive definite.
fn cholesky<T: Scalar>(a: &[T], n: usize) -> std::result::Result<Vec<T>, usize> {
    let mut l = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > T::zero()) || !s.is_finite() {
                    return Err(i);
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// In place `b <- L^-1 b`.
fn solve_lower<T: Scalar>(l: &[T], n: usize, b: &mut [T]) {
    for i in 0..n {
        let mut s = b[i];
        let row = &l[i * n..i * n + i];
        for (k, &lik) in row.iter().enumerate() {
            s -= lik * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// In place `b <- L^-T b`.
fn solve_lower_transposed<T: Scalar>(l: &[T], n: usize, b: &mut [T]) {
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}
