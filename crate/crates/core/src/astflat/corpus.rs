//! The flattened corpus file: one `doc_id<TAB>tokens` line per document,
//! tokens space-separated, lines sorted by `doc_id`.

use std::io::{BufRead, Write};

use super::flatten::TokenSequence;
use super::AstError;

/// Writes `docs` sorted by doc id. Fails on duplicate ids and on ids that
/// contain a tab or newline.
pub fn write_corpus<W: Write>(mut out: W, docs: &[TokenSequence]) -> Result<(), AstError> {
    let mut sorted: Vec<&TokenSequence> = docs.iter().collect();
    sorted.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    for pair in sorted.windows(2) {
        if pair[0].doc_id == pair[1].doc_id {
            return Err(AstError::Corpus {
                line: 0,
                message: format!("duplicate doc_id {:?}", pair[0].doc_id),
            });
        }
    }
    for doc in sorted {
        if doc.doc_id.is_empty() || doc.doc_id.contains(['\t', '\n', '\r']) {
            return Err(AstError::Corpus {
                line: 0,
                message: format!("doc_id {:?} is empty or contains a tab or newline", doc.doc_id),
            });
        }
        let tokens: Vec<String> = doc.tokens.iter().map(i32::to_string).collect();
        writeln!(out, "{}\t{}", doc.doc_id, tokens.join(" "))?;
    }
    Ok(())
}

/// Reads a corpus file. Order is taken as written; duplicates are rejected.
pub fn read_corpus<R: BufRead>(input: R) -> Result<Vec<TokenSequence>, AstError> {
    let mut docs = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        let (id, rest) = line.split_once('\t').ok_or_else(|| AstError::Corpus {
            line: lineno,
            message: "missing TAB between doc_id and tokens".to_owned(),
        })?;
        let tokens = rest
            .split_ascii_whitespace()
            .map(|t| {
                t.parse::<i32>().map_err(|_| AstError::Corpus {
                    line: lineno,
                    message: format!("token {t:?} is not an integer"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !seen.insert(id.to_owned()) {
            return Err(AstError::Corpus {
                line: lineno,
                message: format!("duplicate doc_id {id:?}"),
            });
        }
        docs.push(TokenSequence::new(id, tokens));
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_sorted_tab_format() {
        let docs = vec![TokenSequence::new("b", vec![3, -2]), TokenSequence::new("a", vec![1, 2, -2, -2])];
        let mut buf = Vec::new();
        write_corpus(&mut buf, &docs).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "a\t1 2 -2 -2\nb\t3 -2\n");
        let back = read_corpus(&buf[..]).unwrap();
        assert_eq!(back[0], docs[1]);
        assert_eq!(back[1], docs[0]);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(read_corpus(&b"a 1 -2\n"[..]).is_err());
        assert!(read_corpus(&b"a\t1 x\n"[..]).is_err());
        assert!(read_corpus(&b"a\t1 -2\na\t1 -2\n"[..]).is_err());
        let dup = vec![TokenSequence::new("a", vec![1, -2]), TokenSequence::new("a", vec![1, -2])];
        assert!(write_corpus(Vec::new(), &dup).is_err());
        assert!(write_corpus(Vec::new(), &[TokenSequence::new("a\tb", vec![1, -2])]).is_err());
    }
}
