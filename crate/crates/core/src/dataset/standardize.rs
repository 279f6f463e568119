use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;

/// Per-column centering and scaling, fitted on training rows only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    /// Population standard deviation, as fitted.
    pub std: Vec<f64>,
    /// Columns that were constant on the fit rows; they map to 0.
    pub constant: Vec<bool>,
}

impl Standardizer {
    pub fn fit(features: &Matrix) -> Self {
        let all: Vec<usize> = (0..features.rows()).collect();
        Self::fit_rows(features, &all)
    }

    /// Fits on the listed rows of `features`. No other rows are read.
    pub fn fit_rows(features: &Matrix, rows: &[usize]) -> Self {
        let cols = features.cols();
        let n = rows.len().max(1) as f64;
        let mut mean = vec![0.0; cols];
        for &r in rows {
            for (m, x) in mean.iter_mut().zip(features.row(r)) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; cols];
        let mut constant = vec![true; cols];
        let first = rows.first().map(|&r| features.row(r));
        for &r in rows {
            let row = features.row(r);
            for j in 0..cols {
                let d = row[j] - mean[j];
                var[j] += d * d;
                if let Some(f) = first {
                    if row[j] != f[j] {
                        constant[j] = false;
                    }
                }
            }
        }
        let std = var.into_iter().map(|v| (v / n).sqrt()).collect::<Vec<_>>();
        let constant = constant.into_iter().zip(&std).map(|(c, &s)| c || s == 0.0).collect();
        Standardizer { mean, std, constant }
    }

    pub fn apply(&self, features: &Matrix) -> Matrix {
        assert_eq!(features.cols(), self.mean.len(), "standardizer width mismatch");
        let mut out = features.clone();
        for i in 0..out.rows() {
            for (j, x) in out.row_mut(i).iter_mut().enumerate() {
                *x = if self.constant[j] { 0.0 } else { (*x - self.mean[j]) / self.std[j] };
            }
        }
        out
    }
}

pub fn fit_standardizer(features: &Matrix) -> Standardizer {
    Standardizer::fit(features)
}

pub fn apply_standardizer(s: &Standardizer, features: &Matrix) -> Matrix {
    s.apply(features)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[f64]) -> Matrix {
        Matrix::from_vec(v.len(), 1, v.to_vec())
    }

    #[test]
    fn population_sigma() {
        let m = col(&[1.0, 2.0, 3.0]);
        let s = fit_standardizer(&m);
        assert_eq!(s.mean, [2.0]);
        assert!((s.std[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let z = apply_standardizer(&s, &m);
        assert!((z.get(0, 0) + 1.224_744_871).abs() < 1e-9);
        assert_eq!(z.get(1, 0), 0.0);
        assert!((z.get(2, 0) - 1.224_744_871).abs() < 1e-9);
    }

    #[test]
    fn constant_column_maps_to_zero() {
        let m = col(&[5.0, 5.0, 5.0]);
        let s = fit_standardizer(&m);
        assert!(s.constant[0]);
        assert_eq!(s.std[0], 0.0);
        assert_eq!(apply_standardizer(&s, &m).as_slice(), &[0.0, 0.0, 0.0]);
        // 0.1 does not sum exactly, but the column is still constant
        let m = col(&[0.1; 7]);
        let s = fit_standardizer(&m);
        assert!(s.constant[0]);
        assert!(apply_standardizer(&s, &m).as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fit_data_is_centered() {
        let m = Matrix::from_rows(&[[1.0, 10.0], [4.0, -3.0], [2.5, 7.0], [0.3, 0.0]], 2);
        let z = fit_standardizer(&m).apply(&m);
        for j in 0..2 {
            let mean: f64 = (0..4).map(|i| z.get(i, j)).sum::<f64>() / 4.0;
            assert!(mean.abs() < 1e-9);
        }
    }

    #[test]
    fn only_fit_rows_matter() {
        let m = Matrix::from_rows(&[[1.0], [2.0], [3.0], [100.0]], 1);
        let a = Standardizer::fit_rows(&m, &[0, 1, 2]);
        let b = Standardizer::fit_rows(&m, &[0, 1, 3]);
        assert_eq!(a.mean, [2.0]);
        let test = Matrix::from_rows(&[[2.5]], 1);
        assert_ne!(a.apply(&test), b.apply(&test));
    }
}
