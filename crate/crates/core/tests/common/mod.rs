#![allow(dead_code)]

use bugvec::dataset::{FeatureMode, FeatureTable, MetricsRecord, MetricsTable};
use bugvec::Matrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Two unit-σ Gaussian blobs whose centres sit `gap` σ apart on every axis.
/// Rows alternate between the classes.
pub fn two_clusters(n_per: usize, dims: usize, gap: f64, seed: u64) -> (Matrix, Vec<u8>) {
    let mut rng = bugvec::seed::rng(seed);
    let mut data = Vec::with_capacity(2 * n_per * dims);
    let mut y = Vec::with_capacity(2 * n_per);
    for i in 0..2 * n_per {
        let label = (i % 2) as u8;
        let centre = if label == 1 { gap / 2.0 } else { -gap / 2.0 };
        for _ in 0..dims {
            data.push(centre + normal(&mut rng));
        }
        y.push(label);
    }
    (Matrix::from_vec(2 * n_per, dims, data), y)
}

pub fn table_from(x: Matrix, y: Vec<u8>) -> FeatureTable {
    let n = x.rows();
    let names = (0..x.cols()).map(|j| format!("f{j}")).collect();
    FeatureTable::new((0..n).map(|i| format!("row{i:05}")).collect(), x, y, names, FeatureMode::Metrics).unwrap()
}

pub fn metrics_table(ids: &[String], names: &[&str], rows: &[Vec<f64>]) -> MetricsTable {
    MetricsTable {
        names: names.iter().map(|s| s.to_string()).collect(),
        records: ids
            .iter()
            .zip(rows)
            .map(|(id, v)| MetricsRecord {
                doc_id: id.clone(),
                values: v.clone(),
            })
            .collect(),
    }
}
