//! Paragraph vectors (PV-DM and PV-DBOW) trained with negative sampling.

mod io;
mod model;
mod sgd;
mod train;
mod vocab;

pub use io::{load_model, model_from_bytes, model_to_bytes, save_model, write_vectors, MODEL_MAGIC, MODEL_VERSION};
pub use model::{Doc2VecHyper, Doc2VecModel, Method};
pub use sgd::{pair_gradient, pair_loss, sgd_step_pair};
pub use train::{train, train_with_stats, TrainStats};
pub use vocab::{build_vocab, Vocabulary, NOISE_POWER};

use thiserror::Error;

use crate::matrix::dot;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("document {0:?} has no tokens")]
    EmptyDocument(String),
    #[error("document {0:?} appears more than once")]
    DuplicateDocument(String),
    #[error("invalid hyperparameters: {0}")]
    InvalidHyper(String),
    #[error("unknown document {0:?}")]
    UnknownDocument(String),
    #[error("vectors have zero norm")]
    ZeroNorm,
    #[error("vector lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("model file format {found} is not supported (this build reads format {supported})")]
    Version { found: u32, supported: u32 },
    #[error("model file truncated while reading {0}")]
    Truncated(String),
    #[error("model file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Cosine similarity, clamped to `[-1, 1]`.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64, EmbedError> {
    if a.len() != b.len() {
        return Err(EmbedError::LengthMismatch(a.len(), b.len()));
    }
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(EmbedError::ZeroNorm);
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}
