//! Labels, metrics and embedding vectors in; feature tables out.

mod labels;
mod metrics;
mod standardize;
mod table;
mod upsample;
mod vectors;

pub use labels::{binarize, load_labels, parse_labels, LabelRecord, Labels};
pub use metrics::{load_metrics, parse_metrics, MetricsRecord, MetricsTable, CLASS_METRICS};
pub use standardize::{apply_standardizer, fit_standardizer, Standardizer};
pub use table::{assemble, FeatureMode, FeatureTable, JoinReport};
pub use upsample::{upsample, upsample_draws, upsample_target};
pub use vectors::{load_vectors, parse_vectors, EmbeddingTable};

use std::fs::File;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{file}: {message}")]
    Csv { file: String, message: String },
    #[error("{file}: missing column {column:?}")]
    MissingColumn { file: String, column: String },
    #[error("{file}: bad header: {message}")]
    Header { file: String, message: String },
    #[error("{file}: row {row}, column {column}: {message}")]
    Cell {
        file: String,
        row: usize,
        column: String,
        message: String,
    },
    #[error("{file}: duplicate doc_id {doc_id:?}")]
    Duplicate { file: String, doc_id: String },
    #[error("{mode} features need the {input} file")]
    MissingSource { mode: FeatureMode, input: &'static str },
    #[error("join produced no rows ({0})")]
    EmptyJoin(JoinReport),
    #[error("upsampling needs both classes")]
    SingleClass,
    #[error("upsample ratio {0} is outside (0, 1]")]
    InvalidRatio(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
}

impl DataError {
    fn csv(source: &str, e: csv::Error) -> Self {
        DataError::Csv {
            file: source.to_owned(),
            message: e.to_string(),
        }
    }

    fn cell(source: &str, row: usize, column: &str, message: &str) -> Self {
        DataError::Cell {
            file: source.to_owned(),
            row,
            column: column.to_owned(),
            message: message.to_owned(),
        }
    }
}

fn open_csv(path: &Path) -> Result<File, DataError> {
    File::open(path).map_err(|err| DataError::Io {
        path: path.display().to_string(),
        err,
    })
}
