//! Classifier roster behind one fit/predict contract.
//!
//! Every family produces a score in `[0, 1]` for label 1. `predict` is
//! `score >= 0.5`, except k-nearest neighbours, where an even vote goes to 0.

mod knn;
mod linalg;
mod linear;
pub mod mlp;
mod naive_bayes;
mod spec;
mod tree;

use thiserror::Error;

pub use knn::Knn;
pub use linear::{fit_linear, fit_logistic, LinearModel};
pub use mlp::{fit_mlp, Network};
pub use naive_bayes::GaussianNb;
pub use spec::{
    ClassifierSpec, Criterion, EarlyStopping, Family, ForestParams, KnnParams, LinearParams, LogisticParams, MaxFeatures,
    MlpParams, NaiveBayesParams, TreeParams, ROSTER,
};
pub use tree::{DecisionTree, RandomForest};

use crate::matrix::Matrix;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("invalid classifier parameters: {0}")]
    InvalidParams(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("features contain non-finite values")]
    NonFinite,
    #[error("need at least 2 training rows, got {0}")]
    TooFewRows(usize),
    #[error("model was fitted on {expected} features, input has {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("{rows} feature rows but {labels} labels")]
    LengthMismatch { rows: usize, labels: usize },
    #[error("labels must be 0 or 1, found {0}")]
    BadLabel(u8),
}

#[derive(Debug, Clone, PartialEq)]
enum Fitted {
    NaiveBayes(GaussianNb),
    Linear(LinearModel),
    Logistic(LinearModel),
    Tree(DecisionTree),
    Forest(RandomForest),
    Knn(Knn),
    Mlp(Network),
}

/// A fitted classifier plus the width it was fitted on.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    family: Family,
    n_features: usize,
    inner: Fitted,
}

impl TrainedModel {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    fn score_row(&self, row: &[f64]) -> f64 {
        match &self.inner {
            Fitted::NaiveBayes(m) => m.score(row),
            Fitted::Linear(m) => m.decision(row).clamp(0.0, 1.0),
            Fitted::Logistic(m) => crate::matrix::sigmoid(m.decision(row)),
            Fitted::Tree(m) => m.score(row),
            Fitted::Forest(m) => m.score(row),
            Fitted::Knn(m) => m.score(row),
            Fitted::Mlp(m) => m.score(row),
        }
    }

    fn predict_row(&self, row: &[f64]) -> u8 {
        match &self.inner {
            Fitted::Knn(m) => m.predict_row(row),
            _ => u8::from(self.score_row(row) >= 0.5),
        }
    }

    fn check_width(&self, x: &Matrix) -> Result<(), LearnError> {
        if x.cols() != self.n_features {
            return Err(LearnError::WidthMismatch {
                expected: self.n_features,
                found: x.cols(),
            });
        }
        Ok(())
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<u8>, LearnError> {
        self.check_width(x)?;
        Ok(x.iter_rows().map(|r| self.predict_row(r)).collect())
    }

    /// Scores in `[0, 1]`; linear regression outputs are clamped.
    pub fn predict_score(&self, x: &Matrix) -> Result<Vec<f64>, LearnError> {
        self.check_width(x)?;
        Ok(x.iter_rows().map(|r| self.score_row(r)).collect())
    }
}

/// Fits `spec` on `x`/`y`. `seed` drives every random choice the family makes.
pub fn fit(spec: &ClassifierSpec, x: &Matrix, y: &[u8], seed: u64) -> Result<TrainedModel, LearnError> {
    spec.validate()?;
    if x.rows() != y.len() {
        return Err(LearnError::LengthMismatch {
            rows: x.rows(),
            labels: y.len(),
        });
    }
    if x.rows() < 2 {
        return Err(LearnError::TooFewRows(x.rows()));
    }
    if let Some(&b) = y.iter().find(|&&v| v > 1) {
        return Err(LearnError::BadLabel(b));
    }
    if !x.all_finite() {
        return Err(LearnError::NonFinite);
    }
    let positives = y.iter().filter(|&&v| v == 1).count();
    let single = positives == 0 || positives == y.len();
    if single && !matches!(spec, ClassifierSpec::Knn(_)) {
        return Err(LearnError::SingleClass);
    }
    let inner = match spec {
        ClassifierSpec::NaiveBayes(p) => Fitted::NaiveBayes(GaussianNb::fit(p, x, y)),
        ClassifierSpec::Linear(p) => Fitted::Linear(fit_linear(p, x, y)?),
        ClassifierSpec::Logistic(p) => Fitted::Logistic(fit_logistic(p, x, y)?),
        ClassifierSpec::Tree(p) => Fitted::Tree(DecisionTree::fit(p, x, y, seed)),
        ClassifierSpec::Forest(p) => Fitted::Forest(RandomForest::fit(p, x, y, seed)),
        ClassifierSpec::Knn(p) => Fitted::Knn(Knn::fit(p.k, x, y)),
        ClassifierSpec::Mlp(p) => Fitted::Mlp(fit_mlp(p, x, y, seed)),
    };
    Ok(TrainedModel {
        family: spec.family(),
        n_features: x.cols(),
        inner,
    })
}
