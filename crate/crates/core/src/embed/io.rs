//! Model files and the vector export.
//!
//! Model file layout, all integers little-endian:
//!
//! | bytes  | content                                              |
//! |--------|------------------------------------------------------|
//! | 8      | magic `BUGVECD2`                                     |
//! | 4      | format version (`u32`, currently 1)                  |
//! | 8      | header length `H` (`u64`)                            |
//! | H      | UTF-8 JSON header: hyperparameters, vocabulary tokens and counts, doc ids, `has_word_in` |
//! | …      | `word_in` (`V×dim` `f64`, only when `has_word_in`)   |
//! | …      | `doc_vecs` (`D×dim` `f64`)                           |
//! | …      | `word_out` (`V×dim` `f64`)                           |
//!
//! Matrices are row-major raw IEEE-754 bits, so a load reproduces the saved
//! model exactly. Trailing bytes are an error.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{Doc2VecHyper, Doc2VecModel};
use super::vocab::Vocabulary;
use super::EmbedError;
use crate::matrix::Matrix;

pub const MODEL_MAGIC: &[u8; 8] = b"BUGVECD2";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    hyper: Doc2VecHyper,
    vocab_tokens: Vec<i32>,
    vocab_counts: Vec<u64>,
    doc_ids: Vec<String>,
    has_word_in: bool,
}

pub fn model_to_bytes(model: &Doc2VecModel) -> Vec<u8> {
    let header = Header {
        hyper: model.hyper,
        vocab_tokens: model.vocab.tokens().to_vec(),
        vocab_counts: model.vocab.counts().to_vec(),
        doc_ids: model.doc_ids.clone(),
        has_word_in: model.word_in.is_some(),
    };
    let header = serde_json::to_vec(&header).expect("header serializes");
    let mut out = Vec::new();
    out.extend_from_slice(MODEL_MAGIC);
    out.extend_from_slice(&MODEL_VERSION.to_le_bytes());
    out.extend_from_slice(&(header.len() as u64).to_le_bytes());
    out.extend_from_slice(&header);
    let mats = model.word_in.iter().chain([&model.doc_vecs, &model.word_out]);
    for m in mats {
        for v in m.as_slice() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], EmbedError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        match end {
            Some(end) => {
                let s = &self.buf[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(EmbedError::Truncated(what.to_owned())),
        }
    }

    fn matrix(&mut self, rows: usize, cols: usize, what: &str) -> Result<Matrix, EmbedError> {
        let n = rows
            .checked_mul(cols)
            .and_then(|n| n.checked_mul(8))
            .ok_or_else(|| EmbedError::Format(format!("{what} is too large")))?;
        let bytes = self.take(n, what)?;
        let data = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
            .collect();
        Ok(Matrix::from_vec(rows, cols, data))
    }
}

pub fn model_from_bytes(buf: &[u8]) -> Result<Doc2VecModel, EmbedError> {
    let mut r = Reader { buf, pos: 0 };
    if r.take(8, "magic")? != MODEL_MAGIC {
        return Err(EmbedError::Format("not a model file (bad magic)".into()));
    }
    let version = u32::from_le_bytes(r.take(4, "version")?.try_into().expect("4 bytes"));
    if version != MODEL_VERSION {
        return Err(EmbedError::Version {
            found: version,
            supported: MODEL_VERSION,
        });
    }
    let header_len = u64::from_le_bytes(r.take(8, "header length")?.try_into().expect("8 bytes"));
    let header_len = usize::try_from(header_len).map_err(|_| EmbedError::Format("header length overflow".into()))?;
    let header: Header = serde_json::from_slice(r.take(header_len, "header")?)
        .map_err(|e| EmbedError::Format(format!("bad header: {e}")))?;
    header.hyper.validate()?;
    let vocab = Vocabulary::from_counts(header.vocab_tokens, header.vocab_counts)?;
    let dim = header.hyper.dim;
    let word_in = if header.has_word_in {
        Some(r.matrix(vocab.len(), dim, "word_in")?)
    } else {
        None
    };
    let doc_vecs = r.matrix(header.doc_ids.len(), dim, "doc_vecs")?;
    let word_out = r.matrix(vocab.len(), dim, "word_out")?;
    if r.pos != buf.len() {
        return Err(EmbedError::Format(format!("{} trailing bytes", buf.len() - r.pos)));
    }
    Doc2VecModel::assemble(header.hyper, vocab, word_in, doc_vecs, word_out, header.doc_ids)
}

pub fn save_model(model: &Doc2VecModel, path: &Path) -> Result<(), EmbedError> {
    fs::write(path, model_to_bytes(model))?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<Doc2VecModel, EmbedError> {
    model_from_bytes(&fs::read(path)?)
}

/// CSV export: header `doc_id,v0,…,v{dim-1}`, one row per document in model
/// order. Values use Rust's shortest round-trip formatting, so parsing them
/// back gives the exact `f64`.
pub fn write_vectors<W: Write>(model: &Doc2VecModel, out: W) -> Result<(), EmbedError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["doc_id".to_owned()];
    header.extend((0..model.dim()).map(|i| format!("v{i}")));
    w.write_record(&header).map_err(csv_err)?;
    for (id, row) in model.doc_ids.iter().zip(model.doc_vecs.iter_rows()) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> EmbedError {
    EmbedError::Format(e.to_string())
}
