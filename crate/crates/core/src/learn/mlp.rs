//! Feed-forward network: ReLU hidden layers, a single sigmoid output unit,
//! binary cross-entropy loss, AdaGrad updates.

use rand::seq::SliceRandom;
use rand::Rng;

use super::spec::MlpParams;
use crate::eval::f_score_from_labels;
use crate::matrix::{dot, sigmoid, Matrix};
use crate::seed;

const ADAGRAD_INITIAL_ACCUMULATOR: f64 = 0.1;
const ADAGRAD_EPSILON: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    /// `out × in`
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub layers: Vec<Layer>,
}

/// Gradients shaped like the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<Layer>,
}

impl Network {
    /// Glorot-uniform weights, zero biases. `sizes` runs input → output.
    pub fn new<R: Rng>(sizes: &[usize], rng: &mut R) -> Self {
        let layers = sizes
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                let data = (0..fan_in * fan_out).map(|_| rng.gen_range(-limit..limit)).collect();
                Layer {
                    weights: Matrix::from_vec(fan_out, fan_in, data),
                    bias: vec![0.0; fan_out],
                }
            })
            .collect();
        Network { layers }
    }

    fn zeros_like(&self) -> Vec<Layer> {
        self.layers
            .iter()
            .map(|l| Layer {
                weights: Matrix::zeros(l.weights.rows(), l.weights.cols()),
                bias: vec![0.0; l.bias.len()],
            })
            .collect()
    }

    /// Activations of every layer for one row; the last entry holds the
    /// output logit.
    fn forward(&self, row: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = vec![row.to_vec()];
        let last = self.layers.len() - 1;
        for (li, layer) in self.layers.iter().enumerate() {
            let input = acts.last().expect("input present");
            let out: Vec<f64> = layer
                .weights
                .iter_rows()
                .zip(&layer.bias)
                .map(|(w, b)| {
                    let z = dot(w, input) + b;
                    if li < last {
                        z.max(0.0)
                    } else {
                        z
                    }
                })
                .collect();
            acts.push(out);
        }
        acts
    }

    pub fn logit(&self, row: &[f64]) -> f64 {
        self.forward(row).last().expect("output")[0]
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        sigmoid(self.logit(row))
    }

    /// Mean binary cross-entropy over `rows` plus `l2 · Σ w²`, and its
    /// gradient.
    pub fn loss_and_grad(&self, x: &Matrix, y: &[u8], rows: &[usize], l2: f64) -> (f64, Gradients) {
        let mut grads = self.zeros_like();
        let mut loss = 0.0;
        let m = rows.len() as f64;
        let last = self.layers.len() - 1;
        for &r in rows {
            let acts = self.forward(x.row(r));
            let z = acts[last + 1][0];
            let t = f64::from(y[r]);
            // log(1 + e^z) - t z
            loss += if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() } - t * z;
            let mut delta = vec![(sigmoid(z) - t) / m];
            for li in (0..=last).rev() {
                let input = &acts[li];
                let g = &mut grads[li];
                for (o, &d) in delta.iter().enumerate() {
                    g.bias[o] += d;
                    for (gw, a) in g.weights.row_mut(o).iter_mut().zip(input) {
                        *gw += d * a;
                    }
                }
                if li == 0 {
                    break;
                }
                let w = &self.layers[li].weights;
                let mut back = vec![0.0; input.len()];
                for (o, &d) in delta.iter().enumerate() {
                    for (b, wv) in back.iter_mut().zip(w.row(o)) {
                        *b += d * wv;
                    }
                }
                // ReLU derivative, taken as 0 at 0
                for (b, &a) in back.iter_mut().zip(input) {
                    if a <= 0.0 {
                        *b = 0.0;
                    }
                }
                delta = back;
            }
        }
        loss /= m;
        if l2 > 0.0 {
            for (layer, g) in self.layers.iter().zip(grads.iter_mut()) {
                for (gw, w) in g.weights.as_mut_slice().iter_mut().zip(layer.weights.as_slice()) {
                    *gw += 2.0 * l2 * w;
                }
                loss += l2 * layer.weights.as_slice().iter().map(|w| w * w).sum::<f64>();
            }
        }
        (loss, Gradients { layers: grads })
    }

    /// All parameters flattened, layer by layer, weights before biases.
    pub fn params(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.as_slice().iter().chain(&l.bias).copied())
            .collect()
    }

    pub fn set_params(&mut self, p: &[f64]) {
        let mut i = 0;
        for l in &mut self.layers {
            let n = l.weights.rows() * l.weights.cols();
            let (rows, cols) = (l.weights.rows(), l.weights.cols());
            l.weights = Matrix::from_vec(rows, cols, p[i..i + n].to_vec());
            i += n;
            let b = l.bias.len();
            l.bias.copy_from_slice(&p[i..i + b]);
            i += b;
        }
    }
}

impl Gradients {
    pub fn flatten(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.as_slice().iter().chain(&l.bias).copied())
            .collect()
    }
}

struct AdaGrad {
    accum: Vec<f64>,
    lr: f64,
}

impl AdaGrad {
    fn step(&mut self, net: &mut Network, grads: &Gradients) {
        let mut params = net.params();
        let g = grads.flatten();
        for ((p, a), gi) in params.iter_mut().zip(&mut self.accum).zip(&g) {
            *a += gi * gi;
            *p -= self.lr * gi / (a.sqrt() + ADAGRAD_EPSILON);
        }
        net.set_params(&params);
    }
}

/// Trains a network on all rows of `x`. With early stopping configured, a
/// seeded share of the rows is held out and the weights with the best
/// held-out F-score are kept.
pub fn fit_mlp(params: &MlpParams, x: &Matrix, y: &[u8], seed: u64) -> Network {
    let mut rng = seed::rng(seed);
    let mut sizes = vec![x.cols()];
    sizes.extend(&params.hidden);
    sizes.push(1);
    let mut net = Network::new(&sizes, &mut rng);

    let mut train: Vec<usize> = (0..x.rows()).collect();
    let mut holdout = Vec::new();
    if let Some(es) = &params.early_stopping {
        train.shuffle(&mut rng);
        let k = (es.holdout * x.rows() as f64).round() as usize;
        if k >= 1 && k < x.rows() {
            holdout = train.split_off(x.rows() - k);
            train.sort_unstable();
        }
    }

    let mut opt = AdaGrad {
        accum: vec![ADAGRAD_INITIAL_ACCUMULATOR; net.params().len()],
        lr: params.learning_rate,
    };
    let mut best: Option<(f64, Network)> = None;
    let mut since_best = 0;
    for _ in 0..params.epochs {
        train.shuffle(&mut rng);
        for batch in train.chunks(params.batch_size) {
            let (_, g) = net.loss_and_grad(x, y, batch, params.l2);
            opt.step(&mut net, &g);
        }
        if let (Some(es), false) = (&params.early_stopping, holdout.is_empty()) {
            let pred: Vec<u8> = holdout.iter().map(|&r| u8::from(net.score(x.row(r)) >= 0.5)).collect();
            let truth: Vec<u8> = holdout.iter().map(|&r| y[r]).collect();
            let f = f_score_from_labels(&truth, &pred).f_score;
            if best.as_ref().is_none_or(|(bf, _)| f > *bf) {
                best = Some((f, net.clone()));
                since_best = 0;
            } else {
                since_best += 1;
                if since_best >= es.patience {
                    break;
                }
            }
        }
    }
    best.map(|(_, n)| n).unwrap_or(net)
}
