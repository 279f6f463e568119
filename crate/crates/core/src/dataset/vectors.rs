use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use super::{open_csv, DataError};
use crate::matrix::Matrix;

/// Document vectors as exported by the embedding step.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub doc_ids: Vec<String>,
    pub vectors: Matrix,
}

impl EmbeddingTable {
    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn from_model(model: &crate::embed::Doc2VecModel) -> Self {
        EmbeddingTable {
            doc_ids: model.doc_ids().to_vec(),
            vectors: model.doc_vectors().clone(),
        }
    }
}

pub fn load_vectors(path: &Path) -> Result<EmbeddingTable, DataError> {
    parse_vectors(open_csv(path)?, &path.display().to_string())
}

/// Reads `doc_id,v0,…,v{dim-1}` CSV.
pub fn parse_vectors<R: Read>(input: R, source: &str) -> Result<EmbeddingTable, DataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers().map_err(|e| DataError::csv(source, e))?.clone();
    if headers.get(0) != Some("doc_id") {
        return Err(DataError::MissingColumn {
            file: source.to_owned(),
            column: "doc_id".to_owned(),
        });
    }
    let dim = headers.len() - 1;
    for (i, h) in headers.iter().skip(1).enumerate() {
        if h != format!("v{i}") {
            return Err(DataError::Header {
                file: source.to_owned(),
                message: format!("column {} is {h:?}, expected \"v{i}\"", i + 2),
            });
        }
    }
    let mut doc_ids = Vec::new();
    let mut data = Vec::new();
    let mut seen = HashSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| DataError::csv(source, e))?;
        let row = i + 2;
        let id = rec.get(0).unwrap_or("").to_owned();
        if id.is_empty() {
            return Err(DataError::cell(source, row, "doc_id", "missing doc_id"));
        }
        for (j, cell) in rec.iter().enumerate().skip(1) {
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| DataError::cell(source, row, &headers[j], &format!("{cell:?} is not a number")))?;
            data.push(v);
        }
        if !seen.insert(id.clone()) {
            return Err(DataError::Duplicate {
                file: source.to_owned(),
                doc_id: id,
            });
        }
        doc_ids.push(id);
    }
    let vectors = Matrix::from_vec(doc_ids.len(), dim, data);
    Ok(EmbeddingTable { doc_ids, vectors })
}
