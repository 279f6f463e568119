//! Recursive-descent parser for a small Java subset.
//!
//! Supported: package/import headers (dropped), class/interface/enum
//! declarations (nested ones stay inside their parent), fields, methods and
//! constructors with parameters, blocks, `if`/`else`, `return`, local
//! variable declarations, expression statements, method calls (including
//! chained calls), simple and qualified names, assignments, and string,
//! integer, boolean and `null` literals. Anything else is a syntax error.

use super::tree::{Node, SyntaxTree};
use super::AstError;

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
];

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double"];

const RESERVED: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const", "continue",
    "default", "do", "double", "else", "enum", "extends", "final", "finally", "float", "for", "goto", "if",
    "implements", "import", "instanceof", "int", "interface", "long", "native", "new", "package", "private",
    "protected", "public", "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
    "throw", "throws", "transient", "try", "void", "volatile", "while", "true", "false", "null",
];

/// One top-level type declaration and its tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeTree {
    /// Package-qualified name, e.g. `org.example.Debug`.
    pub qualified_name: String,
    pub tree: SyntaxTree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    Punct(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Int(s) => s.clone(),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Punct(c) => c.to_string(),
            Tok::Eof => "end of input".to_owned(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, AstError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };

    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            advance(&mut i, &mut line, &mut col, '/');
            advance(&mut i, &mut line, &mut col, '*');
            loop {
                if i >= chars.len() {
                    return Err(AstError::syntax(tl, tc, "/*", "unterminated comment"));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    advance(&mut i, &mut line, &mut col, '*');
                    advance(&mut i, &mut line, &mut col, '/');
                    break;
                }
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
        } else if c.is_alphabetic() || c == '_' || c == '$' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                s.push(chars[i]);
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            out.push(Token { tok: Tok::Ident(s), line: tl, column: tc });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            let digits = s.trim_end_matches(['l', 'L']).replace('_', "");
            let ok = digits.chars().all(|d| d.is_ascii_digit())
                || (digits.starts_with("0x") || digits.starts_with("0X")) && digits.len() > 2 && digits[2..].chars().all(|d| d.is_ascii_hexdigit());
            if !ok {
                return Err(AstError::syntax(tl, tc, &s, "unsupported numeric literal"));
            }
            out.push(Token { tok: Tok::Int(s), line: tl, column: tc });
        } else if c == '"' {
            advance(&mut i, &mut line, &mut col, c);
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(AstError::syntax(tl, tc, "\"", "unterminated string literal")),
                    Some('"') => {
                        advance(&mut i, &mut line, &mut col, '"');
                        break;
                    }
                    Some('\\') => {
                        s.push('\\');
                        advance(&mut i, &mut line, &mut col, '\\');
                        if let Some(&e) = chars.get(i) {
                            s.push(e);
                            advance(&mut i, &mut line, &mut col, e);
                        }
                    }
                    Some(&ch) => {
                        s.push(ch);
                        advance(&mut i, &mut line, &mut col, ch);
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), line: tl, column: tc });
        } else if "{}();,.=[]*".contains(c) {
            out.push(Token { tok: Tok::Punct(c), line: tl, column: tc });
            advance(&mut i, &mut line, &mut col, c);
        } else {
            return Err(AstError::syntax(tl, tc, &c.to_string(), "character outside the supported subset"));
        }
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> AstError {
        let t = &self.toks[self.pos];
        AstError::syntax(t.line, t.column, &t.tok.describe(), message)
    }

    fn is_punct(&self, c: char) -> bool {
        *self.peek() == Tok::Punct(c)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), AstError> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    /// A non-reserved identifier.
    fn ident(&mut self) -> Result<String, AstError> {
        match self.peek() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            Tok::Ident(_) => Err(self.error("unsupported keyword")),
            _ => Err(self.error("expected identifier")),
        }
    }

    fn at_ident(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !RESERVED.contains(&s.as_str()))
    }

    fn qualified_name(&mut self) -> Result<String, AstError> {
        let mut name = self.ident()?;
        while self.is_punct('.') && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    fn compilation_unit(&mut self) -> Result<Vec<TypeTree>, AstError> {
        let mut package = None;
        if self.eat_word("package") {
            package = Some(self.qualified_name()?);
            self.expect_punct(';')?;
        }
        while self.eat_word("import") {
            self.eat_word("static");
            self.qualified_name()?;
            if self.eat_punct('.') && !self.eat_punct('*') {
                return Err(self.error("expected '*'"));
            }
            self.expect_punct(';')?;
        }
        let mut types = Vec::new();
        while *self.peek() != Tok::Eof {
            if self.eat_punct(';') {
                continue;
            }
            let mods = self.modifiers();
            let (name, node) = self.type_declaration(mods)?;
            let qualified_name = match &package {
                Some(p) => format!("{p}.{name}"),
                None => name,
            };
            types.push(TypeTree {
                qualified_name,
                tree: SyntaxTree::new(node),
            });
        }
        Ok(types)
    }

    fn modifiers(&mut self) -> Vec<Node> {
        let mut mods = Vec::new();
        while let Tok::Ident(s) = self.peek() {
            if !MODIFIERS.contains(&s.as_str()) {
                break;
            }
            mods.push(Node::labeled("Modifier", s.clone()));
            self.bump();
        }
        mods
    }

    fn at_type_keyword(&self) -> bool {
        self.is_word("class") || self.is_word("interface") || self.is_word("enum")
    }

    fn type_declaration(&mut self, mods: Vec<Node>) -> Result<(String, Node), AstError> {
        if self.eat_word("class") {
            let name = self.ident()?;
            let mut node = Node::labeled("ClassDeclaration", name.clone()).with_children(mods);
            if self.eat_word("extends") {
                node.push(self.class_type()?);
            }
            if self.eat_word("implements") {
                self.type_list(&mut node)?;
            }
            self.class_body(&mut node)?;
            Ok((name, node))
        } else if self.eat_word("interface") {
            let name = self.ident()?;
            let mut node = Node::labeled("InterfaceDeclaration", name.clone()).with_children(mods);
            if self.eat_word("extends") {
                self.type_list(&mut node)?;
            }
            self.class_body(&mut node)?;
            Ok((name, node))
        } else if self.eat_word("enum") {
            let name = self.ident()?;
            let mut node = Node::labeled("EnumDeclaration", name.clone()).with_children(mods);
            if self.eat_word("implements") {
                self.type_list(&mut node)?;
            }
            self.expect_punct('{')?;
            while self.at_ident() {
                node.push(Node::labeled("EnumConstant", self.ident()?));
                if !self.eat_punct(',') {
                    break;
                }
            }
            if self.eat_punct(';') {
                while !self.is_punct('}') {
                    self.member(&mut node)?;
                }
            }
            self.expect_punct('}')?;
            Ok((name, node))
        } else {
            Err(self.error("expected 'class', 'interface' or 'enum'"))
        }
    }

    fn type_list(&mut self, parent: &mut Node) -> Result<(), AstError> {
        loop {
            parent.push(self.class_type()?);
            if !self.eat_punct(',') {
                return Ok(());
            }
        }
    }

    fn class_type(&mut self) -> Result<Node, AstError> {
        Ok(Node::labeled("ClassType", self.qualified_name()?))
    }

    fn class_body(&mut self, parent: &mut Node) -> Result<(), AstError> {
        self.expect_punct('{')?;
        while !self.is_punct('}') {
            if *self.peek() == Tok::Eof {
                return Err(self.error("expected '}'"));
            }
            self.member(parent)?;
        }
        self.expect_punct('}')
    }

    fn member(&mut self, parent: &mut Node) -> Result<(), AstError> {
        if self.eat_punct(';') {
            return Ok(());
        }
        let mods = self.modifiers();
        if self.at_type_keyword() {
            let (_, nested) = self.type_declaration(mods)?;
            parent.push(nested);
            return Ok(());
        }
        // Constructor: Name '('
        if self.at_ident() && *self.peek_at(1) == Tok::Punct('(') {
            let name = self.ident()?;
            let mut node = Node::labeled("ConstructorDeclaration", name).with_children(mods);
            self.parameters(&mut node)?;
            node.push(self.block()?);
            parent.push(node);
            return Ok(());
        }
        let ty = self.type_ref(true)?;
        let name = self.ident()?;
        if self.is_punct('(') {
            let mut node = Node::labeled("MethodDeclaration", name).with_children(mods);
            node.push(ty);
            self.parameters(&mut node)?;
            if !self.eat_punct(';') {
                node.push(self.block()?);
            }
            parent.push(node);
        } else {
            let mut node = Node::new("FieldDeclaration").with_children(mods);
            if ty.kind == "VoidType" {
                return Err(self.error("field cannot have type void"));
            }
            node.push(ty);
            self.declarators(&mut node, name)?;
            self.expect_punct(';')?;
            parent.push(node);
        }
        Ok(())
    }

    fn parameters(&mut self, parent: &mut Node) -> Result<(), AstError> {
        self.expect_punct('(')?;
        if !self.is_punct(')') {
            loop {
                let mods = self.modifiers();
                let ty = self.type_ref(false)?;
                let name = self.ident()?;
                let mut p = Node::labeled("Parameter", name).with_children(mods);
                p.push(ty);
                parent.push(p);
                if !self.eat_punct(',') {
                    break;
                }
            }
        }
        self.expect_punct(')')
    }

    fn declarators(&mut self, parent: &mut Node, first: String) -> Result<(), AstError> {
        let mut name = first;
        loop {
            let mut d = Node::labeled("VariableDeclarator", name);
            if self.eat_punct('=') {
                d.push(self.expression()?);
            }
            parent.push(d);
            if !self.eat_punct(',') {
                return Ok(());
            }
            name = self.ident()?;
        }
    }

    fn type_ref(&mut self, allow_void: bool) -> Result<Node, AstError> {
        let mut ty = match self.peek() {
            Tok::Ident(s) if PRIMITIVES.contains(&s.as_str()) => {
                let n = Node::labeled("PrimitiveType", s.clone());
                self.bump();
                n
            }
            Tok::Ident(s) if s == "void" => {
                if !allow_void {
                    return Err(self.error("void is not allowed here"));
                }
                self.bump();
                return Ok(Node::new("VoidType"));
            }
            _ => self.class_type()?,
        };
        while self.is_punct('[') && *self.peek_at(1) == Tok::Punct(']') {
            self.bump();
            self.bump();
            ty = Node::new("ArrayType").with_children(vec![ty]);
        }
        Ok(ty)
    }

    fn block(&mut self) -> Result<Node, AstError> {
        self.expect_punct('{')?;
        let mut node = Node::new("Block");
        while !self.is_punct('}') {
            if *self.peek() == Tok::Eof {
                return Err(self.error("expected '}'"));
            }
            if self.eat_punct(';') {
                continue;
            }
            node.push(self.statement()?);
        }
        self.bump();
        Ok(node)
    }

    fn statement(&mut self) -> Result<Node, AstError> {
        if self.is_punct('{') {
            return self.block();
        }
        if self.eat_word("if") {
            self.expect_punct('(')?;
            let cond = self.expression()?;
            self.expect_punct(')')?;
            let mut node = Node::new("IfStatement").with_children(vec![cond, self.statement()?]);
            if self.eat_word("else") {
                node.push(self.statement()?);
            }
            return Ok(node);
        }
        if self.eat_word("return") {
            let mut node = Node::new("ReturnStatement");
            if !self.is_punct(';') {
                node.push(self.expression()?);
            }
            self.expect_punct(';')?;
            return Ok(node);
        }
        if self.at_local_declaration() {
            let mods = self.modifiers();
            let mut node = Node::new("LocalVariableDeclaration").with_children(mods);
            node.push(self.type_ref(false)?);
            let name = self.ident()?;
            self.declarators(&mut node, name)?;
            self.expect_punct(';')?;
            return Ok(node);
        }
        let expr = self.expression()?;
        self.expect_punct(';')?;
        Ok(Node::new("ExpressionStatement").with_children(vec![expr]))
    }

    /// Looks ahead for `[final] Type name`.
    fn at_local_declaration(&mut self) -> bool {
        if self.is_word("final") {
            return true;
        }
        if matches!(self.peek(), Tok::Ident(s) if PRIMITIVES.contains(&s.as_str())) {
            return true;
        }
        if !self.at_ident() {
            return false;
        }
        let save = self.pos;
        let is_decl = self.type_ref(false).is_ok() && self.at_ident();
        self.pos = save;
        is_decl
    }

    fn expression(&mut self) -> Result<Node, AstError> {
        let lhs = self.primary()?;
        if self.eat_punct('=') {
            if lhs.kind != "Name" && lhs.kind != "QualifiedName" {
                return Err(self.error("left side of assignment must be a name"));
            }
            let rhs = self.expression()?;
            return Ok(Node::new("Assignment").with_children(vec![lhs, rhs]));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Node, AstError> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(Node::labeled("IntegerLiteral", s))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Node::labeled("StringLiteral", s))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.bump();
                Ok(Node::labeled("BooleanLiteral", s))
            }
            Tok::Ident(s) if s == "null" => {
                self.bump();
                Ok(Node::new("NullLiteral"))
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.expression()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Ident(_) => self.name_or_call(),
            _ => Err(self.error("expected expression")),
        }
    }

    fn name_or_call(&mut self) -> Result<Node, AstError> {
        let mut parts = vec![self.ident()?];
        while self.is_punct('.') {
            self.bump();
            parts.push(self.ident()?);
        }
        if !self.is_punct('(') {
            return Ok(name_node(&parts));
        }
        let method = parts.pop().expect("at least one part");
        let target = (!parts.is_empty()).then(|| name_node(&parts));
        let mut call = self.call_rest(method, target)?;
        while self.eat_punct('.') {
            let method = self.ident()?;
            if !self.is_punct('(') {
                return Err(self.error("field access on a call result is not supported"));
            }
            call = self.call_rest(method, Some(call))?;
        }
        Ok(call)
    }

    fn call_rest(&mut self, method: String, target: Option<Node>) -> Result<Node, AstError> {
        let mut call = Node::labeled("MethodCall", method);
        call.children.extend(target);
        self.expect_punct('(')?;
        if !self.is_punct(')') {
            loop {
                call.push(self.expression()?);
                if !self.eat_punct(',') {
                    break;
                }
            }
        }
        self.expect_punct(')')?;
        Ok(call)
    }
}

fn name_node(parts: &[String]) -> Node {
    if parts.len() == 1 {
        Node::labeled("Name", parts[0].clone())
    } else {
        Node::labeled("QualifiedName", parts.join("."))
    }
}

/// Parses `source` into one tree per top-level class, interface or enum.
pub fn parse_java_subset(source: &str) -> Result<Vec<TypeTree>, AstError> {
    let toks = lex(source)?;
    Parser { toks, pos: 0 }.compilation_unit()
}
