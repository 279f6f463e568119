use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::labels::Labels;
use super::metrics::MetricsTable;
use super::vectors::EmbeddingTable;
use super::DataError;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    Embedding,
    Metrics,
    Combined,
}

impl FeatureMode {
    pub const ALL: [FeatureMode; 3] = [FeatureMode::Embedding, FeatureMode::Metrics, FeatureMode::Combined];

    pub fn uses_embedding(self) -> bool {
        self != FeatureMode::Metrics
    }

    pub fn uses_metrics(self) -> bool {
        self != FeatureMode::Embedding
    }
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureMode::Embedding => "embedding",
            FeatureMode::Metrics => "metrics",
            FeatureMode::Combined => "combined",
        })
    }
}

impl FromStr for FeatureMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "embedding" => Ok(FeatureMode::Embedding),
            "metrics" => Ok(FeatureMode::Metrics),
            "combined" => Ok(FeatureMode::Combined),
            _ => Err(format!("unknown feature mode {s:?} (expected embedding, metrics or combined)")),
        }
    }
}

/// Rows of (doc id, features, binary label), aligned.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    doc_ids: Vec<String>,
    features: Matrix,
    labels: Vec<u8>,
    feature_names: Vec<String>,
    mode: FeatureMode,
}

impl FeatureTable {
    pub fn new(
        doc_ids: Vec<String>,
        features: Matrix,
        labels: Vec<u8>,
        feature_names: Vec<String>,
        mode: FeatureMode,
    ) -> Result<Self, DataError> {
        if doc_ids.len() != features.rows() || labels.len() != features.rows() {
            return Err(DataError::Shape(format!(
                "{} ids, {} feature rows, {} labels",
                doc_ids.len(),
                features.rows(),
                labels.len()
            )));
        }
        if feature_names.len() != features.cols() {
            return Err(DataError::Shape(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                features.cols()
            )));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(DataError::Shape("labels must be 0 or 1".into()));
        }
        Ok(FeatureTable {
            doc_ids,
            features,
            labels,
            feature_names,
            mode,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn mode(&self) -> FeatureMode {
        self.mode
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    /// Table of the listed rows, in order. Repeats are allowed.
    pub fn select_rows(&self, idx: &[usize]) -> FeatureTable {
        FeatureTable {
            doc_ids: idx.iter().map(|&i| self.doc_ids[i].clone()).collect(),
            features: self.features.select_rows(idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
            mode: self.mode,
        }
    }

    /// Same rows with the features swapped out (same shape required).
    pub fn with_features(&self, features: Matrix) -> Result<FeatureTable, DataError> {
        FeatureTable::new(
            self.doc_ids.clone(),
            features,
            self.labels.clone(),
            self.feature_names.clone(),
            self.mode,
        )
    }

    pub fn with_labels(&self, labels: Vec<u8>) -> Result<FeatureTable, DataError> {
        FeatureTable::new(
            self.doc_ids.clone(),
            self.features.clone(),
            labels,
            self.feature_names.clone(),
            self.mode,
        )
    }
}

/// Row counts behind an inner join.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JoinReport {
    pub label_rows: usize,
    pub vector_rows: Option<usize>,
    pub metric_rows: Option<usize>,
    pub joined: usize,
}

impl JoinReport {
    pub fn dropped_labels(&self) -> usize {
        self.label_rows - self.joined
    }
}

impl fmt::Display for JoinReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "labels {} rows", self.label_rows)?;
        if let Some(v) = self.vector_rows {
            write!(f, ", vectors {v} rows")?;
        }
        if let Some(m) = self.metric_rows {
            write!(f, ", metrics {m} rows")?;
        }
        write!(f, "; joined {} rows", self.joined)
    }
}

/// Inner join of the sources `mode` needs, on doc id, sorted by doc id.
/// Combined rows put embedding columns first, then metric columns.
pub fn assemble(
    mode: FeatureMode,
    vectors: Option<&EmbeddingTable>,
    metrics: Option<&MetricsTable>,
    labels: &Labels,
) -> Result<(FeatureTable, JoinReport), DataError> {
    let vectors = if mode.uses_embedding() {
        Some(vectors.ok_or(DataError::MissingSource { mode, input: "vectors" })?)
    } else {
        None
    };
    let metrics = if mode.uses_metrics() {
        Some(metrics.ok_or(DataError::MissingSource { mode, input: "metrics" })?)
    } else {
        None
    };
    let vec_index: Option<HashMap<&str, usize>> =
        vectors.map(|v| v.doc_ids.iter().enumerate().map(|(i, d)| (d.as_str(), i)).collect());
    let met_index: Option<HashMap<&str, usize>> =
        metrics.map(|m| m.records.iter().enumerate().map(|(i, r)| (r.doc_id.as_str(), i)).collect());

    let mut names = Vec::new();
    if let Some(v) = vectors {
        names.extend((0..v.dim()).map(|i| format!("v{i}")));
    }
    if let Some(m) = metrics {
        names.extend(m.names.iter().cloned());
    }

    let mut ids = Vec::new();
    let mut data = Vec::new();
    let mut ys = Vec::new();
    // Labels is a BTreeMap, so this walk is already in doc-id order.
    for (id, &label) in labels {
        let vi = match &vec_index {
            Some(ix) => match ix.get(id.as_str()) {
                Some(&i) => Some(i),
                None => continue,
            },
            None => None,
        };
        let mi = match &met_index {
            Some(ix) => match ix.get(id.as_str()) {
                Some(&i) => Some(i),
                None => continue,
            },
            None => None,
        };
        if let (Some(i), Some(v)) = (vi, vectors) {
            data.extend_from_slice(v.vectors.row(i));
        }
        if let (Some(i), Some(m)) = (mi, metrics) {
            data.extend_from_slice(&m.records[i].values);
        }
        ids.push(id.clone());
        ys.push(label);
    }
    let report = JoinReport {
        label_rows: labels.len(),
        vector_rows: vectors.map(|v| v.doc_ids.len()),
        metric_rows: metrics.map(|m| m.records.len()),
        joined: ids.len(),
    };
    if ids.is_empty() {
        return Err(DataError::EmptyJoin(report));
    }
    let features = Matrix::from_vec(ids.len(), names.len(), data);
    let table = FeatureTable::new(ids, features, ys, names, mode)?;
    Ok((table, report))
}
