use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::score::harmonic;
use crate::dataset::FeatureMode;
use crate::embed::Doc2VecHyper;
use crate::learn::ClassifierSpec;

/// What was run: features, embedding configuration, classifier and seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Descriptor {
    pub mode: FeatureMode,
    /// Feature columns in the evaluated table.
    pub n_features: usize,
    pub doc2vec: Option<Doc2VecHyper>,
    pub classifier: ClassifierSpec,
    pub k: usize,
    pub upsample_ratio: f64,
    /// Master seed of the cross-validation run.
    pub seed: u64,
    /// Index of the label permutation, for permutation runs.
    pub permutation: Option<usize>,
}

impl Descriptor {
    /// Canonical identifier; sorting by it groups runs by embedding
    /// configuration, then mode, classifier and permutation.
    pub fn key(&self) -> String {
        let mut s = String::new();
        match &self.doc2vec {
            Some(h) => write!(s, "{}/d{:04}/w{:03}/e{:04}/n{:02}", h.method, h.dim, h.window, h.epochs, h.negatives),
            None => write!(s, "none"),
        }
        .expect("write to string");
        write!(s, "/{}/{}", self.mode, self.classifier.name()).expect("write to string");
        if let Some(p) = self.permutation {
            write!(s, "/p{p:04}").expect("write to string");
        }
        s
    }

    /// Short file-name-safe form of [`Descriptor::key`].
    pub fn file_stem(&self) -> String {
        self.key().replace('/', "_")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub train_rows: usize,
    /// Training rows after upsampling.
    pub fit_rows: usize,
    pub test_rows: usize,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

/// Per-fold scores plus their means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub descriptor: Descriptor,
    pub folds: Vec<FoldReport>,
    pub precision: f64,
    pub recall: f64,
    /// Mean of the per-fold F-scores.
    pub f_score: f64,
}

impl EvalReport {
    pub fn from_folds(descriptor: Descriptor, folds: Vec<FoldReport>) -> Self {
        let n = folds.len().max(1) as f64;
        let mean = |f: fn(&FoldReport) -> f64| folds.iter().map(f).sum::<f64>() / n;
        EvalReport {
            precision: mean(|f| f.precision),
            recall: mean(|f| f.recall),
            f_score: mean(|f| f.f_score),
            descriptor,
            folds,
        }
    }

    /// Every fold's F equals the harmonic mean of its stored precision and
    /// recall.
    pub fn is_consistent(&self) -> bool {
        self.folds.iter().all(|f| harmonic(f.precision, f.recall) == f.f_score)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut s = self.to_json();
        s.push('\n');
        std::fs::write(path, s)
    }
}
