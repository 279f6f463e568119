use serde::{Deserialize, Serialize};

use super::kinds::{KindTable, UNKNOWN_KIND};
use super::AstError;

/// One syntax-tree node. `label` carries identifier or literal text for
/// debugging; flattening never looks at it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Node>,
}

impl Node {
    pub fn new(kind: impl Into<String>) -> Self {
        Node {
            kind: kind.into(),
            label: None,
            children: Vec::new(),
        }
    }

    pub fn labeled(kind: impl Into<String>, label: impl Into<String>) -> Self {
        Node {
            kind: kind.into(),
            label: Some(label.into()),
            children: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<Node>) -> Self {
        self.children = children;
        self
    }

    pub fn push(&mut self, child: Node) {
        self.children.push(child);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxTree {
    pub root: Node,
}

impl SyntaxTree {
    pub fn new(root: Node) -> Self {
        SyntaxTree { root }
    }

    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![&self.root];
        while let Some(n) = stack.pop() {
            count += 1;
            stack.extend(n.children.iter());
        }
        count
    }

    /// Pre-order iterator over all nodes.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        let mut stack = vec![&self.root];
        std::iter::from_fn(move || {
            let n = stack.pop()?;
            stack.extend(n.children.iter().rev());
            Some(n)
        })
    }

    /// Serializes to the tree interchange format.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.root).expect("tree serialization cannot fail")
    }
}

/// Parses one tree in the interchange format: a JSON object per node with
/// `kind`, optional `children` and optional `label`. Kinds missing from
/// `table` are renamed to `unknown`.
///
/// Nesting is limited to serde_json's default recursion depth (128).
pub fn parse_tree_file(input: &str, table: &KindTable) -> Result<SyntaxTree, AstError> {
    if input.trim().is_empty() {
        return Err(AstError::EmptyTree);
    }
    let mut root: Node = serde_json::from_str(input).map_err(|e| AstError::TreeFormat {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut stack = vec![&mut root];
    while let Some(n) = stack.pop() {
        if !table.contains(&n.kind) {
            n.kind = UNKNOWN_KIND.to_owned();
        }
        stack.extend(n.children.iter_mut());
    }
    Ok(SyntaxTree::new(root))
}
