use serde::{Deserialize, Serialize};

use super::kinds::{KindTable, SCOPE_EXIT};
use super::tree::{Node, SyntaxTree};
use super::AstError;

/// One flattened document: positive kind codes interleaved with
/// [`SCOPE_EXIT`] markers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenSequence {
    pub doc_id: String,
    pub tokens: Vec<i32>,
}

impl TokenSequence {
    pub fn new(doc_id: impl Into<String>, tokens: Vec<i32>) -> Self {
        TokenSequence {
            doc_id: doc_id.into(),
            tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        validate_sequence(&self.tokens)
    }

    /// The kind codes alone, i.e. plain depth-first order.
    pub fn without_markers(&self) -> Vec<i32> {
        self.tokens.iter().copied().filter(|&t| t != SCOPE_EXIT).collect()
    }
}

/// Pre-order depth-first flattening: a node's code on entry, `-2` once its
/// last descendant is done. Leaves and the root get markers too, so the
/// output is always `2 × node_count` long.
///
/// Kinds missing from `table` are emitted as the table's unknown code.
pub fn flatten(tree: &SyntaxTree, table: &KindTable) -> Vec<i32> {
    enum Step<'a> {
        Enter(&'a Node),
        Exit,
    }
    let mut out = Vec::new();
    let mut stack = vec![Step::Enter(&tree.root)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Enter(node) => {
                out.push(table.code_or_unknown(&node.kind));
                stack.push(Step::Exit);
                stack.extend(node.children.iter().rev().map(Step::Enter));
            }
            Step::Exit => out.push(SCOPE_EXIT),
        }
    }
    out
}

/// True iff markers never outrun kind codes in any prefix and the totals
/// balance. Any other non-positive value makes the sequence invalid.
pub fn validate_sequence(tokens: &[i32]) -> bool {
    let mut depth: usize = 0;
    for &t in tokens {
        if t == SCOPE_EXIT {
            if depth == 0 {
                return false;
            }
            depth -= 1;
        } else if t >= 1 {
            depth += 1;
        } else {
            return false;
        }
    }
    depth == 0
}

/// Rebuilds the tree a sequence came from. The sequence must describe
/// exactly one tree: it may not close the root and then open another node.
pub fn unflatten(tokens: &[i32], table: &KindTable) -> Result<SyntaxTree, AstError> {
    let invalid = |pos: usize, reason: &str| AstError::InvalidSequence {
        position: pos,
        reason: reason.to_owned(),
    };
    let mut stack: Vec<Node> = Vec::new();
    let mut root: Option<Node> = None;
    for (pos, &t) in tokens.iter().enumerate() {
        if root.is_some() {
            return Err(invalid(pos, "tokens after the root closed"));
        }
        if t == SCOPE_EXIT {
            let done = stack.pop().ok_or_else(|| invalid(pos, "marker with no open node"))?;
            match stack.last_mut() {
                Some(parent) => parent.push(done),
                None => root = Some(done),
            }
        } else {
            let name = table.name(t).ok_or_else(|| invalid(pos, &format!("code {t} not in kind table")))?;
            stack.push(Node::new(name));
        }
    }
    match root {
        Some(r) if stack.is_empty() => Ok(SyntaxTree::new(r)),
        _ => Err(invalid(tokens.len(), "sequence ended with open nodes")),
    }
}
