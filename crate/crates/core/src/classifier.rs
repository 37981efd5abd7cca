//! L2-regularized logistic regression.
//!
//! The objective is the mean logistic loss plus `(λ/2)‖w‖²`, with the bias
//! left unpenalized. It is minimized by full-batch Newton iterations with a
//! backtracking line search, which is deterministic and converges to tight
//! gradient tolerances on the handful of columns used here.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{seed, Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |i| self.get(i, j))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Copy of the first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Matrix {
        let k = k.min(self.cols);
        let mut data = Vec::with_capacity(self.rows * k);
        for i in 0..self.rows {
            data.extend_from_slice(&self.row(i)[..k]);
        }
        Matrix { rows: self.rows, cols: k, data }
    }

    /// Copy of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Matrix { rows: rows.len(), cols: self.cols, data }
    }
}

/// Per-column `(mean, stddev)` learned from training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub stddevs: Vec<f64>,
}

impl Standardization {
    /// The identity transform for `cols` columns.
    pub fn identity(cols: usize) -> Self {
        Self { means: vec![0.0; cols], stddevs: vec![1.0; cols] }
    }

    /// Column statistics of `x`; constant columns map to the identity.
    pub fn fit(x: &Matrix) -> Result<Self> {
        if x.rows() == 0 {
            return Err(Error::InvalidArgument("cannot standardize an empty matrix".into()));
        }
        let n = x.rows() as f64;
        let mut out = Self::identity(x.cols());
        for j in 0..x.cols() {
            let mean = x.column(j).sum::<f64>() / n;
            let var = x.column(j).map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let sd = libm::sqrt(var);
            if sd > 0.0 && sd.is_finite() {
                out.means[j] = mean;
                out.stddevs[j] = sd;
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.means.len() {
            return Err(Error::DimensionMismatch { expected: self.means.len(), got: x.cols() });
        }
        let cols = x.cols();
        let data = x
            .as_slice()
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let j = k % cols;
                (v - self.means[j]) / self.stddevs[j]
            })
            .collect();
        Ok(Matrix { rows: x.rows(), cols, data })
    }

    fn apply_row(&self, row: &[f64], out: &mut [f64]) {
        for (j, (o, &v)) in out.iter_mut().zip(row).enumerate() {
            *o = (v - self.means[j]) / self.stddevs[j];
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogRegConfig {
    pub l2_strength: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub standardize: bool,
    /// Start from a random point drawn with this seed instead of zero.
    pub init_seed: Option<u64>,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self { l2_strength: 1.0, tol: 1e-8, max_iter: 10_000, standardize: true, init_seed: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub l2_strength: f64,
    pub standardization: Standardization,
    pub converged: bool,
    pub iterations: usize,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + libm::exp(-z))
    } else {
        let e = libm::exp(z);
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + libm::log1p(libm::exp(-z))
    } else {
        libm::log1p(libm::exp(z))
    }
}

struct Problem<'a> {
    x: &'a Matrix,
    y: &'a [f64],
    lambda: f64,
}

impl Problem<'_> {
    fn dim(&self) -> usize {
        self.x.cols() + 1
    }

    fn margin(&self, theta: &[f64], i: usize) -> f64 {
        let d = self.x.cols();
        self.x.row(i).iter().zip(&theta[..d]).map(|(a, b)| a * b).sum::<f64>() + theta[d]
    }

    fn objective(&self, theta: &[f64]) -> f64 {
        let n = self.x.rows() as f64;
        let d = self.x.cols();
        let loss: f64 =
            (0..self.x.rows()).map(|i| softplus(self.margin(theta, i)) - self.y[i] * self.margin(theta, i)).sum();
        let penalty: f64 = theta[..d].iter().map(|w| w * w).sum();
        loss / n + 0.5 * self.lambda * penalty
    }

    /// Gradient and Hessian (row-major, `dim × dim`) at `theta`.
    fn derivatives(&self, theta: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let p = self.dim();
        let d = p - 1;
        let n = self.x.rows() as f64;
        let mut grad = vec![0.0; p];
        let mut hess = vec![0.0; p * p];
        let mut xt = vec![0.0; p];
        for i in 0..self.x.rows() {
            xt[..d].copy_from_slice(self.x.row(i));
            xt[d] = 1.0;
            let mu = sigmoid(self.margin(theta, i));
            let r = mu - self.y[i];
            let s = mu * (1.0 - mu);
            for a in 0..p {
                grad[a] += r * xt[a];
                for b in 0..=a {
                    hess[a * p + b] += s * xt[a] * xt[b];
                }
            }
        }
        for a in 0..p {
            grad[a] /= n;
            for b in 0..=a {
                hess[a * p + b] /= n;
                hess[b * p + a] = hess[a * p + b];
            }
        }
        for j in 0..d {
            grad[j] += self.lambda * theta[j];
            hess[j * p + j] += self.lambda;
        }
        (grad, hess)
    }
}

/// Solves `A x = b` for symmetric positive definite `A` by Cholesky.
fn cholesky_solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let p = b.len();
    let mut l = vec![0.0; p * p];
    for i in 0..p {
        for j in 0..=i {
            let mut sum = a[i * p + j];
            for k in 0..j {
                sum -= l[i * p + k] * l[j * p + k];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[i * p + i] = libm::sqrt(sum);
            } else {
                l[i * p + j] = sum / l[j * p + j];
            }
        }
    }
    let mut z = vec![0.0; p];
    for i in 0..p {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i * p + k] * z[k];
        }
        z[i] = sum / l[i * p + i];
    }
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let mut sum = z[i];
        for k in i + 1..p {
            sum -= l[k * p + i] * x[k];
        }
        x[i] = sum / l[i * p + i];
    }
    Some(x)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Fits the model to `x` with binary labels `y`.
///
/// Non-convergence within `max_iter` is reported through
/// [`LogRegModel::converged`] rather than as an error.
pub fn train_logreg(x: &Matrix, y: &[u8], cfg: &LogRegConfig) -> Result<LogRegModel> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.rows(), got: y.len() });
    }
    if x.rows() == 0 {
        return Err(Error::InvalidArgument("no training rows".into()));
    }
    if cfg.l2_strength.is_nan() || cfg.l2_strength <= 0.0 {
        return Err(Error::InvalidArgument("l2_strength must be positive".into()));
    }
    if y.iter().any(|&v| v > 1) {
        return Err(Error::InvalidArgument("labels must be 0 or 1".into()));
    }
    if x.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("feature matrix contains non-finite values".into()));
    }
    let standardization = if cfg.standardize { Standardization::fit(x)? } else { Standardization::identity(x.cols()) };
    let xs = standardization.apply(x)?;
    let yf: Vec<f64> = y.iter().map(|&v| f64::from(v)).collect();
    let problem = Problem { x: &xs, y: &yf, lambda: cfg.l2_strength };

    let p = problem.dim();
    let mut theta = vec![0.0; p];
    if let Some(s) = cfg.init_seed {
        let mut rng = seed::rng(s);
        for t in theta.iter_mut() {
            *t = rng.random_range(-2.0..2.0);
        }
    }

    let mut f = problem.objective(&theta);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        let (grad, hess) = problem.derivatives(&theta);
        if max_abs(&grad) < cfg.tol {
            converged = true;
            break;
        }
        iterations += 1;
        // steepest descent if the Hessian is numerically singular
        let step = cholesky_solve(&hess, &grad).unwrap_or_else(|| grad.clone());
        let slope: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
        let mut t = 1.0;
        let mut candidate = vec![0.0; p];
        loop {
            for k in 0..p {
                candidate[k] = theta[k] - t * step[k];
            }
            let fc = problem.objective(&candidate);
            if fc <= f - 1e-4 * t * slope || t < 1e-12 {
                if fc <= f {
                    theta.copy_from_slice(&candidate);
                    f = fc;
                }
                break;
            }
            t *= 0.5;
        }
        if t < 1e-12 {
            // no further decrease is representable
            let (grad, _) = problem.derivatives(&theta);
            converged = max_abs(&grad) < cfg.tol;
            break;
        }
    }

    let d = x.cols();
    Ok(LogRegModel {
        weights: theta[..d].to_vec(),
        bias: theta[d],
        l2_strength: cfg.l2_strength,
        standardization,
        converged,
        iterations,
    })
}

impl LogRegModel {
    /// Regularized training objective at this model's parameters, on
    /// standardized inputs; exposed for convergence checks.
    pub fn objective(&self, x: &Matrix, y: &[u8]) -> Result<f64> {
        let xs = self.standardization.apply(x)?;
        let yf: Vec<f64> = y.iter().map(|&v| f64::from(v)).collect();
        let mut theta = self.weights.clone();
        theta.push(self.bias);
        Ok(Problem { x: &xs, y: &yf, lambda: self.l2_strength }.objective(&theta))
    }
}

/// Probability of the positive class for every row of `x`.
pub fn predict_scores(model: &LogRegModel, x: &Matrix) -> Result<Vec<f64>> {
    if x.cols() != model.weights.len() {
        return Err(Error::DimensionMismatch { expected: model.weights.len(), got: x.cols() });
    }
    let mut buf = vec![0.0; x.cols()];
    Ok((0..x.rows())
        .map(|i| {
            model.standardization.apply_row(x.row(i), &mut buf);
            let z: f64 = buf.iter().zip(&model.weights).map(|(a, b)| a * b).sum::<f64>() + model.bias;
            sigmoid(z)
        })
        .collect())
}
