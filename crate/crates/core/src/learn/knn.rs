use crate::matrix::Matrix;

/// k-nearest neighbours by Euclidean distance with uniform votes.
#[derive(Debug, Clone, PartialEq)]
pub struct Knn {
    k: usize,
    x: Matrix,
    y: Vec<u8>,
}

impl Knn {
    pub fn fit(k: usize, x: &Matrix, y: &[u8]) -> Self {
        Knn {
            k,
            x: x.clone(),
            y: y.to_vec(),
        }
    }

    /// `(positive votes, neighbours consulted)`. Equal distances are broken
    /// by training row order.
    pub fn votes(&self, row: &[f64]) -> (usize, usize) {
        let mut dist: Vec<(f64, usize)> = self
            .x
            .iter_rows()
            .enumerate()
            .map(|(i, r)| (r.iter().zip(row).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), i))
            .collect();
        let k = self.k.min(dist.len());
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < dist.len() {
            dist.select_nth_unstable_by(k - 1, cmp);
        }
        let pos = dist[..k].iter().filter(|&&(_, i)| self.y[i] == 1).count();
        (pos, k)
    }

    pub fn score(&self, row: &[f64]) -> f64 {
        let (pos, k) = self.votes(row);
        pos as f64 / k as f64
    }

    /// Majority vote; an even split goes to label 0.
    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let (pos, k) = self.votes(row);
        u8::from(2 * pos > k)
    }
}
