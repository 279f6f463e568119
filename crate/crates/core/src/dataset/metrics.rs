use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use super::{open_csv, DataError};

/// The class-level metric abbreviations computed by the static analyzer the
/// reference dataset was built with, in header order.
pub const CLASS_METRICS: [&str; 60] = [
    "AD", "CBO", "CBOI", "CC", "CCL", "CCO", "CD", "CI", "CLC", "CLLC", "CLOC", "DIT", "DLOC", "LCOM5", "LDC", "LLDC",
    "LLOC", "LOC", "NA", "NG", "NII", "NL", "NLA", "NLE", "NLG", "NLM", "NLPA", "NLPM", "NLS", "NM", "NOA", "NOC", "NOD",
    "NOI", "NOP", "NOS", "NPA", "NPM", "NS", "PDA", "PUA", "RFC", "TCD", "TCLOC", "TLLOC", "TLOC", "TNA", "TNG", "TNLA",
    "TNLG", "TNLM", "TNLPA", "TNLPM", "TNLS", "TNM", "TNOS", "TNPA", "TNPM", "TNS", "WMC",
];

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub doc_id: String,
    pub values: Vec<f64>,
}

/// Metric rows plus the header they align to.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsTable {
    pub names: Vec<String>,
    pub records: Vec<MetricsRecord>,
}

pub fn load_metrics(path: &Path) -> Result<MetricsTable, DataError> {
    parse_metrics(open_csv(path)?, &path.display().to_string())
}

/// Reads a CSV with a `doc_id` column; every other column is a metric, in
/// header order. Empty or non-numeric cells are errors.
pub fn parse_metrics<R: Read>(input: R, source: &str) -> Result<MetricsTable, DataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers().map_err(|e| DataError::csv(source, e))?.clone();
    let id_col = headers.iter().position(|h| h == "doc_id").ok_or_else(|| DataError::MissingColumn {
        file: source.to_owned(),
        column: "doc_id".to_owned(),
    })?;
    let names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != id_col)
        .map(|(_, h)| h.to_owned())
        .collect();
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| DataError::csv(source, e))?;
        let row = i + 2;
        let doc_id = rec.get(id_col).unwrap_or("").to_owned();
        if doc_id.is_empty() {
            return Err(DataError::cell(source, row, "doc_id", "missing doc_id"));
        }
        let mut values = Vec::with_capacity(names.len());
        for (j, cell) in rec.iter().enumerate().filter(|&(j, _)| j != id_col) {
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| DataError::cell(source, row, &headers[j], &format!("{cell:?} is not a number")))?;
            values.push(v);
        }
        if !seen.insert(doc_id.clone()) {
            return Err(DataError::Duplicate {
                file: source.to_owned(),
                doc_id,
            });
        }
        records.push(MetricsRecord { doc_id, values });
    }
    Ok(MetricsTable { names, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixty_metric_header() {
        let header = format!("doc_id,{}\n", CLASS_METRICS.join(","));
        let row: Vec<String> = (0..60).map(|i| i.to_string()).collect();
        let text = format!("{header}X,{}\n", row.join(","));
        let t = parse_metrics(text.as_bytes(), "m").unwrap();
        assert_eq!(t.names.len(), 60);
        assert_eq!(t.records[0].values.len(), 60);
        assert_eq!(t.records[0].values[59], 59.0);
        assert_eq!(t.names[0], "AD");
        assert_eq!(t.names[59], "WMC");
        let unique: HashSet<_> = CLASS_METRICS.iter().collect();
        assert_eq!(unique.len(), 60);
    }

    #[test]
    fn empty_body_keeps_header() {
        let t = parse_metrics("LOC,doc_id,WMC\n".as_bytes(), "m").unwrap();
        assert!(t.records.is_empty());
        assert_eq!(t.names, ["LOC", "WMC"]);
    }

    #[test]
    fn bad_cells_are_errors() {
        match parse_metrics("doc_id,LOC,WMC\na,1,\n".as_bytes(), "m") {
            Err(DataError::Cell { row, column, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "WMC");
            }
            other => panic!("expected cell error, got {other:?}"),
        }
        assert!(parse_metrics("doc_id,LOC\na,abc\n".as_bytes(), "m").is_err());
        assert!(parse_metrics("doc_id,LOC\n,1\n".as_bytes(), "m").is_err());
        assert!(parse_metrics("name,LOC\na,1\n".as_bytes(), "m").is_err());
        assert!(parse_metrics("doc_id,LOC\na,1\na,2\n".as_bytes(), "m").is_err());
    }
}
