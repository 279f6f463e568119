use super::linalg::solve_spd;
use super::spec::{LinearParams, LogisticParams};
use super::LearnError;
use crate::matrix::{dot, sigmoid, Matrix};

/// Ridge added to the normal equations so exactly collinear or constant
/// columns still solve; far below anything that moves a real fit.
const NORMAL_EQ_RIDGE: f64 = 1e-10;

/// Weights plus intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn decision(&self, row: &[f64]) -> f64 {
        dot(&self.weights, row) + self.intercept
    }
}

/// `[X 1]ᵀ[X 1]` and `[X 1]ᵀ v`, intercept last.
fn gram(x: &Matrix, diag: impl Fn(usize) -> f64, v: impl Fn(usize) -> f64) -> (Vec<f64>, Vec<f64>) {
    let p = x.cols() + 1;
    let mut a = vec![0.0; p * p];
    let mut b = vec![0.0; p];
    let mut aug = vec![1.0; p];
    for (i, row) in x.iter_rows().enumerate() {
        aug[..p - 1].copy_from_slice(row);
        let w = diag(i);
        let vi = v(i);
        for r in 0..p {
            let wr = w * aug[r];
            b[r] += aug[r] * vi;
            for c in 0..=r {
                a[r * p + c] += wr * aug[c];
            }
        }
    }
    for r in 0..p {
        for c in 0..r {
            a[c * p + r] = a[r * p + c];
        }
    }
    (a, b)
}

/// Ordinary least squares of `y` on `x` with an intercept.
pub fn fit_linear(_params: &LinearParams, x: &Matrix, y: &[u8]) -> Result<LinearModel, LearnError> {
    let p = x.cols() + 1;
    let (mut a, b) = gram(x, |_| 1.0, |i| f64::from(y[i]));
    for j in 0..p {
        a[j * p + j] += NORMAL_EQ_RIDGE * (1.0 + a[j * p + j]);
    }
    let beta = solve_spd(&a, &b).ok_or_else(|| LearnError::Numerical("least squares system is singular".into()))?;
    Ok(LinearModel {
        weights: beta[..p - 1].to_vec(),
        intercept: beta[p - 1],
    })
}

/// L2-regularized logistic regression by damped Newton iterations.
///
/// Minimizes `mean log-loss + λ/2 ‖w‖²` with `λ = 1/(C·N)`; the intercept is
/// not penalized. Stops when the largest gradient component or the largest
/// Newton step falls below `tol`.
pub fn fit_logistic(params: &LogisticParams, x: &Matrix, y: &[u8]) -> Result<LinearModel, LearnError> {
    let n = x.rows() as f64;
    let f = x.cols();
    let p = f + 1;
    let lambda = 1.0 / (params.c * n);
    let objective = |beta: &[f64]| {
        let mut loss = 0.0;
        for (row, &yi) in x.iter_rows().zip(y) {
            let z = dot(&beta[..f], row) + beta[f];
            // log(1 + e^z) - y z
            let softplus = if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() };
            loss += softplus - f64::from(yi) * z;
        }
        loss / n + 0.5 * lambda * dot(&beta[..f], &beta[..f])
    };

    let mut beta = vec![0.0; p];
    let mut current = objective(&beta);
    for _ in 0..params.max_iter {
        let probs: Vec<f64> = x.iter_rows().map(|r| sigmoid(dot(&beta[..f], r) + beta[f])).collect();
        let (mut h, g) = gram(x, |i| probs[i] * (1.0 - probs[i]) / n, |i| (probs[i] - f64::from(y[i])) / n);
        let mut grad = g;
        for j in 0..f {
            grad[j] += lambda * beta[j];
            h[j * p + j] += lambda;
        }
        h[f * p + f] += 1e-12;
        if grad.iter().all(|g| g.abs() < params.tol) {
            break;
        }
        let step = solve_spd(&h, &grad).ok_or_else(|| LearnError::Numerical("logistic Hessian is singular".into()))?;
        let mut t = 1.0;
        let mut next = beta.clone();
        loop {
            for j in 0..p {
                next[j] = beta[j] - t * step[j];
            }
            let obj = objective(&next);
            if obj <= current || t < 1e-8 {
                current = obj;
                break;
            }
            t *= 0.5;
        }
        let max_step = step.iter().map(|s| (t * s).abs()).fold(0.0, f64::max);
        beta.copy_from_slice(&next);
        if max_step < params.tol {
            break;
        }
    }
    Ok(LinearModel {
        weights: beta[..f].to_vec(),
        intercept: beta[f],
    })
}
