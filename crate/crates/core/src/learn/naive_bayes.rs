use super::spec::NaiveBayesParams;
use crate::matrix::Matrix;

/// Gaussian naive Bayes with per-class feature means and variances.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    log_prior: [f64; 2],
    mean: [Vec<f64>; 2],
    var: [Vec<f64>; 2],
}

impl GaussianNb {
    pub fn fit(params: &NaiveBayesParams, x: &Matrix, y: &[u8]) -> Self {
        let f = x.cols();
        let mut count = [0usize; 2];
        let mut mean = [vec![0.0; f], vec![0.0; f]];
        for (row, &c) in x.iter_rows().zip(y) {
            let c = c as usize;
            count[c] += 1;
            for (m, v) in mean[c].iter_mut().zip(row) {
                *m += v;
            }
        }
        for c in 0..2 {
            mean[c].iter_mut().for_each(|m| *m /= count[c].max(1) as f64);
        }
        let mut var = [vec![0.0; f], vec![0.0; f]];
        for (row, &c) in x.iter_rows().zip(y) {
            let c = c as usize;
            for j in 0..f {
                let d = row[j] - mean[c][j];
                var[c][j] += d * d;
            }
        }
        // Floor every variance by a share of the widest overall feature variance.
        let n = y.len() as f64;
        let overall_max = (0..f)
            .map(|j| {
                let mu = x.iter_rows().map(|r| r[j]).sum::<f64>() / n;
                x.iter_rows().map(|r| (r[j] - mu).powi(2)).sum::<f64>() / n
            })
            .fold(0.0, f64::max);
        let eps = (params.var_smoothing * overall_max).max(1e-12);
        for c in 0..2 {
            var[c].iter_mut().for_each(|v| *v = *v / count[c].max(1) as f64 + eps);
        }
        let log_prior = [
            (count[0] as f64 / n).max(f64::MIN_POSITIVE).ln(),
            (count[1] as f64 / n).max(f64::MIN_POSITIVE).ln(),
        ];
        GaussianNb { log_prior, mean, var }
    }

    fn log_joint(&self, row: &[f64], c: usize) -> f64 {
        let mut lp = self.log_prior[c];
        for ((x, m), &v) in row.iter().zip(&self.mean[c]).zip(&self.var[c]) {
            let d = x - m;
            lp -= 0.5 * ((2.0 * std::f64::consts::PI * v).ln() + d * d / v);
        }
        lp
    }

    /// Posterior probability of class 1.
    pub fn score(&self, row: &[f64]) -> f64 {
        let (a, b) = (self.log_joint(row, 0), self.log_joint(row, 1));
        crate::matrix::sigmoid(b - a)
    }
}
