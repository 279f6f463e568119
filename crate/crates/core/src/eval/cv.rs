use super::folds::stratified_folds;
use super::report::{Descriptor, EvalReport, FoldReport};
use super::score::{confusion, f_score};
use super::EvalError;
use crate::dataset::{upsample_draws, FeatureTable, Standardizer};
use crate::learn::{self, ClassifierSpec};
use crate::seed;

/// Hooks into each fold of [`cross_validate_with`]. Row indices refer to the
/// input table.
pub trait CvProbe {
    /// Rows the standardizer was fitted on, and the fitted statistics.
    fn standardizer(&mut self, _fold: usize, _rows: &[usize], _fitted: &Standardizer) {}
    /// Rows the upsampler drew duplicates from, and the rows it drew.
    fn upsample(&mut self, _fold: usize, _pool: &[usize], _draws: &[usize]) {}
    /// Rows the classifier was fitted on, duplicates included.
    fn fit(&mut self, _fold: usize, _rows: &[usize]) {}
    /// Rows scored.
    fn test(&mut self, _fold: usize, _rows: &[usize]) {}
}

impl CvProbe for () {}

/// Stratified k-fold cross-validation. Per fold: fit the standardizer on the
/// training rows, transform both sides, upsample the training side, fit,
/// and score the test fold.
pub fn cross_validate(
    table: &FeatureTable,
    spec: &ClassifierSpec,
    k: usize,
    seed: u64,
    upsample_ratio: f64,
) -> Result<EvalReport, EvalError> {
    cross_validate_with(table, spec, k, seed, upsample_ratio, &mut ())
}

pub fn cross_validate_with(
    table: &FeatureTable,
    spec: &ClassifierSpec,
    k: usize,
    seed: u64,
    upsample_ratio: f64,
    probe: &mut dyn CvProbe,
) -> Result<EvalReport, EvalError> {
    spec.validate()?;
    let labels = table.labels();
    let plan = stratified_folds(labels, k, seed::derive_str(seed, "folds"))?;
    let up_seed = seed::derive_str(seed, "upsample");
    let fit_seed = seed::derive_str(seed, "fit");
    let mut folds = Vec::with_capacity(k);
    for fold in 0..k {
        let train = plan.train_rows(fold);
        let test = plan.test_rows(fold);

        // The standardizer only ever sees a copy of the training rows.
        let train_x = table.features().select_rows(&train);
        let standardizer = Standardizer::fit(&train_x);
        probe.standardizer(fold, &train, &standardizer);
        let train_x = standardizer.apply(&train_x);
        let test_x = standardizer.apply(&table.features().select_rows(&test));

        let train_y: Vec<u8> = train.iter().map(|&r| labels[r]).collect();
        let draws = upsample_draws(&train_y, upsample_ratio, seed::derive(up_seed, fold as u64))?;
        let drawn_rows: Vec<usize> = draws.iter().map(|&i| train[i]).collect();
        probe.upsample(fold, &train, &drawn_rows);
        let local: Vec<usize> = (0..train.len()).chain(draws).collect();
        let fit_x = train_x.select_rows(&local);
        let fit_y: Vec<u8> = local.iter().map(|&i| train_y[i]).collect();
        probe.fit(fold, &local.iter().map(|&i| train[i]).collect::<Vec<_>>());

        let model = learn::fit(spec, &fit_x, &fit_y, seed::derive(fit_seed, fold as u64))
            .map_err(|source| EvalError::Fold { fold, source })?;
        probe.test(fold, &test);
        let pred = model.predict(&test_x).map_err(|source| EvalError::Fold { fold, source })?;
        let truth: Vec<u8> = test.iter().map(|&r| labels[r]).collect();
        let (tp, fp, fn_) = confusion(&truth, &pred);
        let s = f_score(tp, fp, fn_);
        folds.push(FoldReport {
            fold,
            train_rows: train.len(),
            fit_rows: local.len(),
            test_rows: test.len(),
            tp,
            fp,
            fn_,
            precision: s.precision,
            recall: s.recall,
            f_score: s.f_score,
        });
    }
    let descriptor = Descriptor {
        mode: table.mode(),
        n_features: table.n_features(),
        doc2vec: None,
        classifier: spec.clone(),
        k,
        upsample_ratio,
        seed,
        permutation: None,
    };
    Ok(EvalReport::from_folds(descriptor, folds))
}
