use std::collections::{BTreeMap, HashSet};
use std::io::Read;
use std::path::Path;

use super::{open_csv, DataError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelRecord {
    pub doc_id: String,
    pub bug_count: u64,
}

/// Binary labels keyed by doc id: 1 = at least one bug.
pub type Labels = BTreeMap<String, u8>;

pub fn load_labels(path: &Path) -> Result<Vec<LabelRecord>, DataError> {
    parse_labels(open_csv(path)?, &path.display().to_string())
}

/// Reads `doc_id,bug_count` CSV.
pub fn parse_labels<R: Read>(input: R, source: &str) -> Result<Vec<LabelRecord>, DataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers().map_err(|e| DataError::csv(source, e))?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| DataError::MissingColumn {
            file: source.to_owned(),
            column: name.to_owned(),
        })
    };
    let (id_col, count_col) = (col("doc_id")?, col("bug_count")?);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| DataError::csv(source, e))?;
        let row = i + 2;
        let doc_id = rec.get(id_col).unwrap_or("").to_owned();
        if doc_id.is_empty() {
            return Err(DataError::cell(source, row, "doc_id", "empty doc_id"));
        }
        let raw = rec.get(count_col).unwrap_or("");
        let count: i64 = raw
            .parse()
            .map_err(|_| DataError::cell(source, row, "bug_count", &format!("{raw:?} is not an integer")))?;
        if count < 0 {
            return Err(DataError::cell(source, row, "bug_count", "negative bug count"));
        }
        if !seen.insert(doc_id.clone()) {
            return Err(DataError::Duplicate {
                file: source.to_owned(),
                doc_id,
            });
        }
        out.push(LabelRecord {
            doc_id,
            bug_count: count as u64,
        });
    }
    Ok(out)
}

/// `bug_count > 0` becomes 1, zero stays 0.
pub fn binarize(records: &[LabelRecord]) -> Labels {
    records
        .iter()
        .map(|r| (r.doc_id.clone(), u8::from(r.bug_count > 0)))
        .collect()
}
