//! Syntax trees to token sequences.
//!
//! A tree is walked depth-first; each node contributes its kind code on the
//! way in and a [`SCOPE_EXIT`] marker (`-2`) on the way out. Without the
//! markers, `if (c) { a; } b;` and `if (c) { a; b; }` flatten identically;
//! with them, the shape of the tree is recoverable ([`unflatten`]).

mod corpus;
mod flatten;
mod java;
mod kinds;
mod tree;

pub use corpus::{read_corpus, write_corpus};
pub use flatten::{flatten, unflatten, validate_sequence, TokenSequence};
pub use java::{parse_java_subset, TypeTree};
pub use kinds::{load_kind_table, KindTable, SCOPE_EXIT, UNKNOWN_KIND};
pub use tree::{parse_tree_file, Node, SyntaxTree};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AstError {
    #[error("empty tree")]
    EmptyTree,
    #[error("malformed tree at line {line}, column {column}: {message}")]
    TreeFormat { line: usize, column: usize, message: String },
    #[error("syntax error at {line}:{column} near `{token}`: {message}")]
    Syntax {
        line: usize,
        column: usize,
        token: String,
        message: String,
    },
    #[error("invalid token sequence at position {position}: {reason}")]
    InvalidSequence { position: usize, reason: String },
    #[error("corpus line {line}: {message}")]
    Corpus { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl AstError {
    pub(crate) fn syntax(line: usize, column: usize, token: &str, message: &str) -> Self {
        AstError::Syntax {
            line,
            column,
            token: token.to_owned(),
            message: message.to_owned(),
        }
    }
}

/// Parses and flattens Java-subset source, one document per top-level type.
pub fn flatten_java(source: &str) -> Result<Vec<TokenSequence>, AstError> {
    let table = load_kind_table();
    Ok(parse_java_subset(source)?
        .into_iter()
        .map(|t| TokenSequence::new(t.qualified_name, flatten(&t.tree, table)))
        .collect())
}
