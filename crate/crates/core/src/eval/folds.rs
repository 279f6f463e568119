use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::seed;

/// Fold index of every row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub assignment: Vec<usize>,
}

impl FoldPlan {
    pub fn test_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == fold).collect()
    }

    pub fn train_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] != fold).collect()
    }
}

/// Shuffles each class separately, then deals rows round-robin into `k`
/// folds. Negatives continue dealing where positives stopped, so fold sizes
/// also differ by at most one.
pub fn stratified_folds(labels: &[u8], k: usize, seed: u64) -> Result<FoldPlan, EvalError> {
    if k < 2 {
        return Err(EvalError::Folds(format!("need k >= 2, got {k}")));
    }
    let mut rng = seed::rng(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in [1u8, 0] {
        let mut rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if rows.len() < k {
            return Err(EvalError::Folds(format!(
                "class {class} has {} rows, fewer than {k} folds",
                rows.len()
            )));
        }
        rows.shuffle(&mut rng);
        for r in rows {
            assignment[r] = next % k;
            next += 1;
        }
    }
    Ok(FoldPlan { k, seed, assignment })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn positives_per_fold(plan: &FoldPlan, labels: &[u8]) -> Vec<usize> {
        let mut c = vec![0; plan.k];
        for (i, &f) in plan.assignment.iter().enumerate() {
            c[f] += labels[i] as usize;
        }
        c
    }

    #[test]
    fn large_imbalanced_counts() {
        let labels: Vec<u8> = (0..48719).map(|i| u8::from(i < 8242)).collect();
        let plan = stratified_folds(&labels, 10, 3).unwrap();
        let mut c = positives_per_fold(&plan, &labels);
        c.sort_unstable();
        assert_eq!(c, [824, 824, 824, 824, 824, 824, 824, 824, 825, 825]);
    }

    #[test]
    fn small_even_split() {
        let labels = [1, 0, 1, 0, 1, 0, 1, 0, 1, 0];
        let plan = stratified_folds(&labels, 5, 0).unwrap();
        for f in 0..5 {
            let rows = plan.test_rows(f);
            assert_eq!(rows.len(), 2);
            assert_eq!(rows.iter().map(|&r| labels[r] as usize).sum::<usize>(), 1);
        }
        assert_eq!(plan, stratified_folds(&labels, 5, 0).unwrap());
    }

    #[test]
    fn rejects_thin_classes() {
        assert!(stratified_folds(&[0; 20], 10, 0).is_err());
        assert!(stratified_folds(&[1, 0, 0, 0], 2, 0).is_err());
        assert!(stratified_folds(&[1, 0], 1, 0).is_err());
    }
}
