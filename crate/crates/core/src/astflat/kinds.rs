use std::collections::HashMap;
use std::sync::OnceLock;

/// Token emitted whenever the traversal leaves a node.
pub const SCOPE_EXIT: i32 = -2;

/// Name of the catch-all kind for node kinds this table does not know.
pub const UNKNOWN_KIND: &str = "unknown";

/// The fixed numbering. Codes are positions in this list plus one; append
/// only, never reorder, or previously flattened corpora change meaning.
const BUILTIN_KINDS: &[&str] = &[
    "ClassDeclaration",
    "MethodDeclaration",
    "InterfaceDeclaration",
    "EnumDeclaration",
    "EnumConstant",
    "FieldDeclaration",
    "VariableDeclarator",
    "Parameter",
    "Modifier",
    "PrimitiveType",
    "VoidType",
    "ClassType",
    "ArrayType",
    "Block",
    "IfStatement",
    "ExpressionStatement",
    "ReturnStatement",
    "LocalVariableDeclaration",
    "MethodCall",
    "Name",
    "QualifiedName",
    "Assignment",
    "StringLiteral",
    "IntegerLiteral",
    "BooleanLiteral",
    "NullLiteral",
    "ConstructorDeclaration",
    UNKNOWN_KIND,
];

/// Bijection between node-kind names and positive integer codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KindTable {
    by_name: HashMap<String, i32>,
    names: Vec<String>,
    unknown: i32,
}

impl KindTable {
    /// Builds a table from kind names; codes are assigned 1, 2, … in order.
    /// An `unknown` entry is appended when missing. Returns `None` on a
    /// duplicate name.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Option<Self> {
        let mut table = KindTable {
            by_name: HashMap::with_capacity(names.len() + 1),
            names: Vec::with_capacity(names.len() + 1),
            unknown: 0,
        };
        for n in names {
            if !table.push(n.as_ref()) {
                return None;
            }
        }
        if !table.by_name.contains_key(UNKNOWN_KIND) {
            table.push(UNKNOWN_KIND);
        }
        table.unknown = table.by_name[UNKNOWN_KIND];
        Some(table)
    }

    fn push(&mut self, name: &str) -> bool {
        if self.by_name.contains_key(name) {
            return false;
        }
        self.names.push(name.to_owned());
        self.by_name.insert(name.to_owned(), self.names.len() as i32);
        true
    }

    pub fn code(&self, kind: &str) -> Option<i32> {
        self.by_name.get(kind).copied()
    }

    /// Code for `kind`, falling back to the `unknown` code.
    pub fn code_or_unknown(&self, kind: &str) -> i32 {
        self.code(kind).unwrap_or(self.unknown)
    }

    pub fn name(&self, code: i32) -> Option<&str> {
        if code < 1 {
            return None;
        }
        self.names.get(code as usize - 1).map(String::as_str)
    }

    pub fn contains(&self, kind: &str) -> bool {
        self.by_name.contains_key(kind)
    }

    pub fn unknown_code(&self) -> i32 {
        self.unknown
    }

    pub fn scope_exit(&self) -> i32 {
        SCOPE_EXIT
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// `(name, code)` pairs in code order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, i32)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i as i32 + 1))
    }
}

/// The built-in table: every kind the Java-subset parser produces, plus `unknown`.
pub fn load_kind_table() -> &'static KindTable {
    static TABLE: OnceLock<KindTable> = OnceLock::new();
    TABLE.get_or_init(|| KindTable::from_names(BUILTIN_KINDS).expect("builtin kinds are unique"))
}
