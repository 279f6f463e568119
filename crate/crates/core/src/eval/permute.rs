use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::cv::cross_validate;
use super::report::EvalReport;
use super::EvalError;
use crate::dataset::FeatureTable;
use crate::learn::ClassifierSpec;
use crate::seed;

/// A seeded shuffle of `0..n`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut seed::rng(seed));
    p
}

/// Seed of permutation `i` under master seed `seed`.
pub fn permutation_seed(seed: u64, i: usize) -> u64 {
    seed::derive(seed::derive_str(seed, "permute"), i as u64)
}

/// Cross-validates `table` with row `r` relabelled as row `perm[r]`.
/// Features, fold seed and every other input stay as they are.
pub fn cross_validate_permuted(
    table: &FeatureTable,
    spec: &ClassifierSpec,
    perm: &[usize],
    k: usize,
    seed: u64,
    upsample_ratio: f64,
) -> Result<EvalReport, EvalError> {
    let labels: Vec<u8> = perm.iter().map(|&r| table.labels()[r]).collect();
    let permuted = table.with_labels(labels)?;
    cross_validate(&permuted, spec, k, seed, upsample_ratio)
}

/// Runs `n_permutations` label permutations (indices `1..=n`) in parallel.
/// Reports come back in permutation order.
pub fn permutation_test(
    table: &FeatureTable,
    spec: &ClassifierSpec,
    n_permutations: usize,
    k: usize,
    seed: u64,
    upsample_ratio: f64,
) -> Result<Vec<EvalReport>, EvalError> {
    if n_permutations == 0 {
        return Err(EvalError::Config("permutation count must be >= 1".into()));
    }
    (1..=n_permutations)
        .into_par_iter()
        .map(|i| {
            let perm = permutation(table.len(), permutation_seed(seed, i));
            let mut r = cross_validate_permuted(table, spec, &perm, k, seed, upsample_ratio)?;
            r.descriptor.permutation = Some(i);
            Ok(r)
        })
        .collect()
}
