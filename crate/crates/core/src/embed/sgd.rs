//! The negative-sampling update for one (input, target) pair.
//!
//! Loss: `-[label·ln s + (1-label)·ln(1-s)]` with `s = σ(input·target)`.
//! With `g = alpha·(label - s)` the step is `target += g·input` and
//! `input += g·target_old`, i.e. plain gradient descent on both vectors.

use crate::matrix::{axpy, dot, sigmoid};

/// Loss of one pair. `positive` is the label.
pub fn pair_loss(input: &[f64], target: &[f64], positive: bool) -> f64 {
    let s = sigmoid(dot(input, target));
    let p = if positive { s } else { 1.0 - s };
    -p.max(f64::MIN_POSITIVE).ln()
}

/// Gradient of [`pair_loss`] with respect to `(input, target)`.
pub fn pair_gradient(input: &[f64], target: &[f64], positive: bool) -> (Vec<f64>, Vec<f64>) {
    let s = sigmoid(dot(input, target));
    let d = s - if positive { 1.0 } else { 0.0 };
    (target.iter().map(|t| d * t).collect(), input.iter().map(|x| d * x).collect())
}

/// One SGD step on both vectors. Returns the loss before the step.
pub fn sgd_step_pair(input: &mut [f64], target: &mut [f64], positive: bool, alpha: f64) -> f64 {
    debug_assert_eq!(input.len(), target.len());
    let mut grad = vec![0.0; input.len()];
    let loss = accumulate_pair(input, target, &mut grad, positive, alpha);
    for (x, g) in input.iter_mut().zip(&grad) {
        *x += g;
    }
    loss
}

/// Updates `target` immediately and adds the input-side step to `input_step`
/// instead of applying it, so several pairs sharing one input see the same
/// input value. Returns the pair's loss before the update.
pub(crate) fn accumulate_pair(input: &[f64], target: &mut [f64], input_step: &mut [f64], positive: bool, alpha: f64) -> f64 {
    let s = sigmoid(dot(input, target));
    let label = if positive { 1.0 } else { 0.0 };
    let g = alpha * (label - s);
    axpy(g, target, input_step);
    axpy(g, input, target);
    let p = if positive { s } else { 1.0 - s };
    -p.max(f64::MIN_POSITIVE).ln()
}
