//! Cross-validation, permutation runs, the embedding grid, and report
//! summaries.

mod cv;
mod folds;
mod grid;
mod permute;
mod report;
mod score;
mod summary;
mod synth;

pub use cv::{cross_validate, cross_validate_with, CvProbe};
pub use folds::{stratified_folds, FoldPlan};
pub use grid::{grid_run, GridInputs, GridOutcome, GridSpec, TaskFailure};
pub use permute::{cross_validate_permuted, permutation, permutation_seed, permutation_test};
pub use report::{Descriptor, EvalReport, FoldReport};
pub use score::{confusion, f_score, f_score_from_labels, harmonic, Scores};
pub use summary::{comparison_table, five_number_table, summary, FiveNumber};
pub use synth::{synth_corpus, SYNTH_NODES};

use thiserror::Error;

use crate::dataset::DataError;
use crate::embed::EmbedError;
use crate::learn::LearnError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("fold assignment: {0}")]
    Folds(String),
    #[error("fold {fold}: {source}")]
    Fold { fold: usize, source: LearnError },
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("{0}")]
    Config(String),
}
