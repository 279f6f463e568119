use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LearnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Gini,
    Entropy,
}

/// Features examined per split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    All,
    /// `max(1, floor(sqrt(F)))`
    Sqrt,
}

impl MaxFeatures {
    pub fn resolve(self, n_features: usize) -> usize {
        match self {
            MaxFeatures::All => n_features,
            MaxFeatures::Sqrt => ((n_features as f64).sqrt().floor() as usize).max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesParams {
    /// Fraction of the largest feature variance added to every variance.
    pub var_smoothing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearParams {
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    /// Inverse regularization strength; the L2 term is `‖w‖² / (2·C·N)` on
    /// the mean log-loss.
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub criterion: Criterion,
    pub max_features: MaxFeatures,
    pub min_samples_split: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub criterion: Criterion,
    pub max_features: MaxFeatures,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EarlyStopping {
    /// Share of the training rows held out for validation.
    pub holdout: f64,
    pub patience: usize,
}

/// Feed-forward network: ReLU hidden layers, one sigmoid output, binary
/// cross-entropy, AdaGrad.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub preset: String,
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    /// Epoch count, or the epoch cap when early stopping is on.
    pub epochs: usize,
    pub batch_size: usize,
    /// Coefficient of `Σ w²` added to the loss (weights only, not biases).
    pub l2: f64,
    pub early_stopping: Option<EarlyStopping>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    NaiveBayes,
    Linear,
    Logistic,
    Tree,
    Forest,
    Knn,
    Mlp,
}

/// A classifier family with its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ClassifierSpec {
    NaiveBayes(NaiveBayesParams),
    Linear(LinearParams),
    Logistic(LogisticParams),
    Tree(TreeParams),
    Forest(ForestParams),
    Knn(KnnParams),
    Mlp(MlpParams),
}

/// Every roster name accepted by [`ClassifierSpec::from_str`].
pub const ROSTER: [&str; 8] = ["naive_bayes", "linear", "logistic", "tree", "forest", "knn", "sdnnc", "cdnnc"];

impl ClassifierSpec {
    pub fn naive_bayes() -> Self {
        ClassifierSpec::NaiveBayes(NaiveBayesParams { var_smoothing: 1e-9 })
    }

    pub fn linear() -> Self {
        ClassifierSpec::Linear(LinearParams { threshold: 0.5 })
    }

    pub fn logistic() -> Self {
        ClassifierSpec::Logistic(LogisticParams {
            c: 2.0,
            tol: 1e-4,
            max_iter: 100,
        })
    }

    pub fn tree() -> Self {
        ClassifierSpec::Tree(TreeParams {
            max_depth: 10,
            criterion: Criterion::Gini,
            max_features: MaxFeatures::All,
            min_samples_split: 2,
        })
    }

    pub fn forest() -> Self {
        ClassifierSpec::Forest(ForestParams {
            n_trees: 100,
            max_depth: 10,
            criterion: Criterion::Entropy,
            max_features: MaxFeatures::Sqrt,
        })
    }

    pub fn knn() -> Self {
        ClassifierSpec::Knn(KnnParams { k: 18 })
    }

    /// Five hidden layers of 200, learning rate 0.05, 10 epochs, batch 100.
    pub fn sdnnc() -> Self {
        ClassifierSpec::Mlp(MlpParams {
            preset: "sdnnc".into(),
            hidden: vec![200; 5],
            learning_rate: 0.05,
            epochs: 10,
            batch_size: 100,
            l2: 0.0,
            early_stopping: None,
        })
    }

    /// Five hidden layers of 250, L2 0.0005, validation-F early stopping
    /// (10% holdout, patience 5, at most 50 epochs).
    pub fn cdnnc() -> Self {
        ClassifierSpec::Mlp(MlpParams {
            preset: "cdnnc".into(),
            hidden: vec![250; 5],
            learning_rate: 0.05,
            epochs: 50,
            batch_size: 100,
            l2: 0.0005,
            early_stopping: Some(EarlyStopping {
                holdout: 0.1,
                patience: 5,
            }),
        })
    }

    /// Default hyperparameters for a family; `Mlp` yields the SDNNC preset.
    pub fn defaults(family: Family) -> Self {
        match family {
            Family::NaiveBayes => Self::naive_bayes(),
            Family::Linear => Self::linear(),
            Family::Logistic => Self::logistic(),
            Family::Tree => Self::tree(),
            Family::Forest => Self::forest(),
            Family::Knn => Self::knn(),
            Family::Mlp => Self::sdnnc(),
        }
    }

    /// The full roster in reporting order.
    pub fn roster() -> Vec<Self> {
        ROSTER.iter().map(|n| n.parse().expect("roster names parse")).collect()
    }

    pub fn family(&self) -> Family {
        match self {
            ClassifierSpec::NaiveBayes(_) => Family::NaiveBayes,
            ClassifierSpec::Linear(_) => Family::Linear,
            ClassifierSpec::Logistic(_) => Family::Logistic,
            ClassifierSpec::Tree(_) => Family::Tree,
            ClassifierSpec::Forest(_) => Family::Forest,
            ClassifierSpec::Knn(_) => Family::Knn,
            ClassifierSpec::Mlp(_) => Family::Mlp,
        }
    }

    /// Short name used in reports and on the command line.
    pub fn name(&self) -> &str {
        match self {
            ClassifierSpec::NaiveBayes(_) => "naive_bayes",
            ClassifierSpec::Linear(_) => "linear",
            ClassifierSpec::Logistic(_) => "logistic",
            ClassifierSpec::Tree(_) => "tree",
            ClassifierSpec::Forest(_) => "forest",
            ClassifierSpec::Knn(_) => "knn",
            ClassifierSpec::Mlp(p) => &p.preset,
        }
    }

    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |m: &str| Err(LearnError::InvalidParams(m.to_owned()));
        match self {
            ClassifierSpec::NaiveBayes(p) if !(p.var_smoothing >= 0.0) => bad("var_smoothing must be >= 0"),
            ClassifierSpec::Logistic(p) if !(p.c > 0.0 && p.tol > 0.0 && p.max_iter > 0) => {
                bad("logistic needs C > 0, tol > 0, max_iter > 0")
            }
            ClassifierSpec::Tree(p) if p.max_depth == 0 || p.min_samples_split < 2 => {
                bad("tree needs max_depth >= 1 and min_samples_split >= 2")
            }
            ClassifierSpec::Forest(p) if p.n_trees == 0 || p.max_depth == 0 => bad("forest needs trees >= 1 and max_depth >= 1"),
            ClassifierSpec::Knn(p) if p.k == 0 => bad("knn needs k >= 1"),
            ClassifierSpec::Mlp(p)
                if p.hidden.is_empty()
                    || p.hidden.contains(&0)
                    || !(p.learning_rate > 0.0)
                    || p.epochs == 0
                    || p.batch_size == 0
                    || !(p.l2 >= 0.0) =>
            {
                bad("mlp needs non-empty hidden layers, positive rate, epochs and batch size")
            }
            ClassifierSpec::Mlp(MlpParams {
                early_stopping: Some(es), ..
            }) if !(es.holdout > 0.0 && es.holdout < 1.0) || es.patience == 0 => bad("early stopping needs holdout in (0,1) and patience >= 1"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ClassifierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassifierSpec {
    type Err = LearnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "naive_bayes" | "bayes" | "nb" => Self::naive_bayes(),
            "linear" => Self::linear(),
            "logistic" => Self::logistic(),
            "tree" => Self::tree(),
            "forest" => Self::forest(),
            "knn" => Self::knn(),
            "sdnnc" | "mlp" => Self::sdnnc(),
            "cdnnc" => Self::cdnnc(),
            _ => {
                return Err(LearnError::InvalidParams(format!(
                    "unknown classifier {s:?} (expected one of {})",
                    ROSTER.join(", ")
                )))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_defaults() {
        let ClassifierSpec::Tree(t) = ClassifierSpec::defaults(Family::Tree) else { panic!() };
        assert_eq!((t.max_depth, t.criterion), (10, Criterion::Gini));
        let ClassifierSpec::Forest(f) = ClassifierSpec::defaults(Family::Forest) else { panic!() };
        assert_eq!((f.n_trees, f.max_depth, f.criterion), (100, 10, Criterion::Entropy));
        let ClassifierSpec::Knn(k) = ClassifierSpec::defaults(Family::Knn) else { panic!() };
        assert_eq!(k.k, 18);
        let ClassifierSpec::Logistic(l) = ClassifierSpec::defaults(Family::Logistic) else { panic!() };
        assert_eq!((l.c, l.tol), (2.0, 1e-4));
        let ClassifierSpec::Linear(l) = ClassifierSpec::defaults(Family::Linear) else { panic!() };
        assert_eq!(l.threshold, 0.5);
        let ClassifierSpec::Mlp(s) = ClassifierSpec::sdnnc() else { panic!() };
        assert_eq!(s.hidden, vec![200; 5]);
        assert_eq!((s.learning_rate, s.epochs, s.batch_size), (0.05, 10, 100));
        let ClassifierSpec::Mlp(c) = ClassifierSpec::cdnnc() else { panic!() };
        assert_eq!(c.hidden, vec![250; 5]);
        assert_eq!(c.l2, 0.0005);
        assert!(c.early_stopping.is_some());
    }

    #[test]
    fn names_round_trip() {
        for spec in ClassifierSpec::roster() {
            assert!(spec.validate().is_ok());
            assert_eq!(spec.name().parse::<ClassifierSpec>().unwrap(), spec);
        }
        assert!("svm".parse::<ClassifierSpec>().is_err());
    }

    #[test]
    fn sqrt_features() {
        assert_eq!(MaxFeatures::Sqrt.resolve(85), 9);
        assert_eq!(MaxFeatures::Sqrt.resolve(1), 1);
        assert_eq!(MaxFeatures::All.resolve(7), 7);
    }
}
