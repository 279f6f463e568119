use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::vocab::Vocabulary;
use super::EmbedError;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "pvdm")]
    PvDm,
    #[serde(rename = "pvdbow")]
    PvDbow,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::PvDm => "pvdm",
            Method::PvDbow => "pvdbow",
        })
    }
}

impl FromStr for Method {
    type Err = EmbedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "pvdm" | "dm" => Ok(Method::PvDm),
            "pvdbow" | "dbow" => Ok(Method::PvDbow),
            _ => Err(EmbedError::InvalidHyper(format!("unknown method {s:?} (expected pvdm or pvdbow)"))),
        }
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Doc2VecHyper {
    pub method: Method,
    pub dim: usize,
    /// Context radius in tokens on each side (PV-DM only).
    pub window: usize,
    pub epochs: usize,
    /// Noise samples per positive pair.
    pub negatives: usize,
    pub alpha_start: f64,
    pub alpha_end: f64,
    pub seed: u64,
}

impl Default for Doc2VecHyper {
    /// 25 dimensions, window 12, 80 epochs, PV-DM, five noise samples,
    /// learning rate 0.025 decaying to 0.0001.
    fn default() -> Self {
        Doc2VecHyper {
            method: Method::PvDm,
            dim: 25,
            window: 12,
            epochs: 80,
            negatives: 5,
            alpha_start: 0.025,
            alpha_end: 0.0001,
            seed: 1,
        }
    }
}

impl Doc2VecHyper {
    pub fn validate(&self) -> Result<(), EmbedError> {
        let bad = |m: &str| Err(EmbedError::InvalidHyper(m.to_owned()));
        if self.dim == 0 {
            return bad("dim must be at least 1");
        }
        if self.window == 0 {
            return bad("window must be at least 1");
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if self.negatives == 0 {
            return bad("negatives must be at least 1");
        }
        if !(self.alpha_end.is_finite() && self.alpha_end > 0.0) {
            return bad("alpha_end must be positive");
        }
        if !(self.alpha_start.is_finite() && self.alpha_start >= self.alpha_end) {
            return bad("alpha_start must be at least alpha_end");
        }
        Ok(())
    }

    /// Learning rate at `step` of `total`, linear from `alpha_start` (first
    /// step) to `alpha_end` (last step).
    pub fn alpha_at(&self, step: usize, total: usize) -> f64 {
        if total <= 1 {
            return self.alpha_start;
        }
        let progress = step as f64 / (total - 1) as f64;
        self.alpha_start - (self.alpha_start - self.alpha_end) * progress
    }
}

/// A trained paragraph-vector model. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Doc2VecModel {
    pub(crate) hyper: Doc2VecHyper,
    pub(crate) vocab: Vocabulary,
    /// `V × dim`; `None` for PV-DBOW, which never learns input word vectors.
    pub(crate) word_in: Option<Matrix>,
    pub(crate) doc_vecs: Matrix,
    pub(crate) word_out: Matrix,
    pub(crate) doc_ids: Vec<String>,
    pub(crate) doc_index: HashMap<String, usize>,
}

impl Doc2VecModel {
    pub(crate) fn assemble(
        hyper: Doc2VecHyper,
        vocab: Vocabulary,
        word_in: Option<Matrix>,
        doc_vecs: Matrix,
        word_out: Matrix,
        doc_ids: Vec<String>,
    ) -> Result<Self, EmbedError> {
        let dim = hyper.dim;
        let v = vocab.len();
        if doc_vecs.rows() != doc_ids.len() || doc_vecs.cols() != dim {
            return Err(EmbedError::Format("document matrix shape mismatch".into()));
        }
        if word_out.rows() != v || word_out.cols() != dim {
            return Err(EmbedError::Format("output matrix shape mismatch".into()));
        }
        match (&word_in, hyper.method) {
            (Some(m), Method::PvDm) if m.rows() == v && m.cols() == dim => {}
            (None, Method::PvDbow) => {}
            _ => return Err(EmbedError::Format("input word matrix does not match method".into())),
        }
        let mut doc_index = HashMap::with_capacity(doc_ids.len());
        for (i, id) in doc_ids.iter().enumerate() {
            if doc_index.insert(id.clone(), i).is_some() {
                return Err(EmbedError::DuplicateDocument(id.clone()));
            }
        }
        Ok(Doc2VecModel {
            hyper,
            vocab,
            word_in,
            doc_vecs,
            word_out,
            doc_ids,
            doc_index,
        })
    }

    pub fn hyper(&self) -> &Doc2VecHyper {
        &self.hyper
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn dim(&self) -> usize {
        self.hyper.dim
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_vectors(&self) -> &Matrix {
        &self.doc_vecs
    }

    pub fn word_input(&self) -> Option<&Matrix> {
        self.word_in.as_ref()
    }

    pub fn word_output(&self) -> &Matrix {
        &self.word_out
    }

    pub fn doc_vector(&self, doc_id: &str) -> Result<&[f64], EmbedError> {
        self.doc_index
            .get(doc_id)
            .map(|&i| self.doc_vecs.row(i))
            .ok_or_else(|| EmbedError::UnknownDocument(doc_id.to_owned()))
    }
}
