//! Java syntax trees and declaration tables.
//!
//! Parsing is delegated to tree-sitter's Java grammar; this module turns the
//! concrete tree into the small declaration model the rest of the crate
//! works with (classes, methods, fields), with byte spans into the source.

use std::cell::RefCell;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use tree_sitter::{Node, Parser, Tree};

use super::format::join_inline;
use super::lexer::lex_lossy;

thread_local! {
    static PARSER: RefCell<Parser> = RefCell::new({
        let mut p = Parser::new();
        p.set_language(&tree_sitter_java::LANGUAGE.into())
            .expect("bundled Java grammar matches the runtime ABI");
        p
    });
}

/// Parses Java source. tree-sitter always yields a tree; syntax errors show
/// up as `ERROR` / missing nodes (see [`has_errors`]).
pub fn parse(src: &str) -> Tree {
    PARSER.with(|p| {
        p.borrow_mut()
            .parse(src, None)
            .expect("parser has a language and no timeout")
    })
}

pub fn has_errors(tree: &Tree) -> bool {
    tree.root_node().has_error()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn of(node: Node<'_>) -> Self {
        Span {
            start: node.start_byte(),
            end: node.end_byte(),
        }
    }

    pub fn contains(&self, offset: usize) -> bool {
        self.start <= offset && offset < self.end
    }

    pub fn text<'s>(&self, src: &'s str) -> &'s str {
        &src[self.start..self.end]
    }
}

/// Maps byte offsets to 0-based `(line, character column)` and back.
#[derive(Debug, Clone)]
pub struct LineIndex<'a> {
    src: &'a str,
    starts: Vec<usize>,
}

impl<'a> LineIndex<'a> {
    pub fn new(src: &'a str) -> Self {
        let mut starts = vec![0];
        starts.extend(src.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { src, starts }
    }

    pub fn line_count(&self) -> usize {
        self.starts.len()
    }

    pub fn line_of(&self, offset: usize) -> usize {
        match self.starts.binary_search(&offset) {
            Ok(l) => l,
            Err(l) => l - 1,
        }
    }

    pub fn position(&self, offset: usize) -> (usize, usize) {
        let line = self.line_of(offset);
        let col = self.src[self.starts[line]..offset].chars().count();
        (line, col)
    }

    /// Byte offset of a `(line, column)` position, `None` when out of range.
    pub fn offset(&self, line: usize, col: usize) -> Option<usize> {
        let start = *self.starts.get(line)?;
        let end = self.starts.get(line + 1).map_or(self.src.len(), |e| e - 1);
        let text = &self.src[start..end];
        if col == text.chars().count() {
            return Some(end);
        }
        text.char_indices().nth(col).map(|(i, _)| start + i)
    }

    pub fn line_text(&self, line: usize) -> &'a str {
        let start = self.starts[line];
        let end = self.starts.get(line + 1).map_or(self.src.len(), |e| e - 1);
        &self.src[start..end]
    }
}

/// Whitespace-normalized, comment-free rendering of a source fragment.
pub fn normalize_text(text: &str) -> String {
    join_inline(&lex_lossy(text))
}

const WRAPPER_OPEN: &str = "class SynbcWrapper {\n";

/// Wraps a member declaration in a synthetic class so that it parses as a
/// compilation unit. The member starts at [`wrapped_offset`].
pub fn wrap_member(text: &str) -> String {
    format!("{WRAPPER_OPEN}{text}\n}}\n")
}

pub fn wrapped_offset() -> usize {
    WRAPPER_OPEN.len()
}

pub fn node_text<'s>(node: Node<'_>, src: &'s str) -> &'s str {
    &src[node.byte_range()]
}

pub fn named_children<'t>(node: Node<'t>) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.named_children(&mut cursor).collect()
}

pub fn children<'t>(node: Node<'t>) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.children(&mut cursor).collect()
}

/// Pre-order traversal of `node` and its descendants.
pub fn descendants<'t>(node: Node<'t>) -> Vec<Node<'t>> {
    let mut out = Vec::new();
    let mut stack = vec![node];
    while let Some(n) = stack.pop() {
        out.push(n);
        let mut kids = children(n);
        kids.reverse();
        stack.extend(kids);
    }
    out
}

pub const CLASS_KINDS: &[&str] = &[
    "class_declaration",
    "interface_declaration",
    "enum_declaration",
    "record_declaration",
    "annotation_type_declaration",
];

pub fn is_class_kind(kind: &str) -> bool {
    CLASS_KINDS.contains(&kind)
}

/// A type reference in a declaration: normalized text plus the span of the
/// identifier naming the outermost class (`List` in `List<Foo>`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRef {
    pub text: String,
    pub span: Span,
    pub name_span: Option<Span>,
}

impl TypeRef {
    fn from_node(node: Node<'_>, src: &str) -> Self {
        TypeRef {
            text: normalize_text(node_text(node, src)),
            span: Span::of(node),
            name_span: type_name_node(node).map(Span::of),
        }
    }
}

fn type_name_node(node: Node<'_>) -> Option<Node<'_>> {
    match node.kind() {
        "type_identifier" => Some(node),
        "generic_type" => named_children(node)
            .into_iter()
            .find(|c| matches!(c.kind(), "type_identifier" | "scoped_type_identifier"))
            .and_then(type_name_node),
        // The last segment of `a.b.C` names the class.
        "scoped_type_identifier" => named_children(node)
            .into_iter()
            .rev()
            .find(|c| c.kind() == "type_identifier"),
        "array_type" => node.child_by_field_name("element").and_then(type_name_node),
        _ => None,
    }
}

/// Every class-type identifier inside a type node, outermost first
/// (`Map<K, List<V>>` yields `Map`, `K`, `List`, `V`).
pub fn class_type_identifiers(node: Node<'_>) -> Vec<Node<'_>> {
    descendants(node)
        .into_iter()
        .filter(|n| n.kind() == "type_identifier")
        .filter(|n| is_final_segment(*n))
        .collect()
}

// In `a.b.C` only the final segment names a class.
fn is_final_segment(mut node: Node<'_>) -> bool {
    while let Some(p) = node.parent() {
        if p.kind() != "scoped_type_identifier" {
            return true;
        }
        if p.named_child(p.named_child_count() as u32 - 1) != Some(node) {
            return false;
        }
        node = p;
    }
    true
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modifiers {
    pub keywords: BTreeSet<String>,
    /// Simple names of annotations (`@lombok.Data` gives `Data`).
    pub annotations: Vec<String>,
}

impl Modifiers {
    fn of(decl: Node<'_>, src: &str) -> Self {
        let mut out = Modifiers::default();
        let Some(mods) = children(decl).into_iter().find(|c| c.kind() == "modifiers") else {
            return out;
        };
        for child in children(mods) {
            match child.kind() {
                "marker_annotation" | "annotation" => {
                    if let Some(name) = child.child_by_field_name("name") {
                        let text = node_text(name, src);
                        let simple = text.rsplit('.').next().unwrap_or(text);
                        out.annotations.push(simple.trim().to_string());
                    }
                }
                _ if !child.is_named() => {
                    out.keywords.insert(node_text(child, src).to_string());
                }
                _ => {}
            }
        }
        out
    }

    pub fn is_private(&self) -> bool {
        self.keywords.contains("private")
    }

    pub fn has_annotation(&self, names: &[&str]) -> bool {
        self.annotations.iter().any(|a| names.contains(&a.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamInfo {
    pub type_ref: TypeRef,
    pub name: String,
    pub name_span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodDecl {
    /// Enclosing class names, outermost first. Anonymous classes appear as
    /// `<anonymous>`.
    pub classes: Vec<String>,
    pub name: String,
    pub name_span: Span,
    pub params: Vec<ParamInfo>,
    /// Declared return type; `None` for constructors.
    pub return_type: Option<TypeRef>,
    pub modifiers: Modifiers,
    pub throws: Vec<String>,
    pub span: Span,
    pub body: Option<Span>,
    /// True when the declaration sits in an interface body.
    pub in_interface: bool,
}

impl MethodDecl {
    pub fn is_constructor(&self) -> bool {
        self.return_type.is_none()
    }

    pub fn in_anonymous_class(&self) -> bool {
        self.classes.iter().any(|c| c == "<anonymous>")
    }

    /// Byte offset where the header ends: the body's `{` or the end of the
    /// declaration for abstract methods.
    pub fn header_end(&self) -> usize {
        self.body.map_or(self.span.end, |b| b.start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDecl {
    pub classes: Vec<String>,
    pub names: Vec<(String, Span)>,
    pub type_ref: Option<TypeRef>,
    pub modifiers: Modifiers,
    pub span: Span,
    pub in_interface: bool,
    pub enum_constant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MemberKind {
    Field,
    Method,
    Constructor,
    EnumConstant,
    NestedType,
    Initializer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub kind: MemberKind,
    pub span: Span,
    pub modifiers: Modifiers,
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDecl {
    pub kind: String,
    /// Enclosing class names, outermost first, excluding this class.
    pub outer: Vec<String>,
    pub name: String,
    pub name_span: Span,
    pub span: Span,
    pub body: Option<Span>,
    pub modifiers: Modifiers,
    /// Superclass followed by implemented / extended interfaces.
    pub supertypes: Vec<TypeRef>,
    pub members: Vec<Member>,
}

impl ClassDecl {
    pub fn path(&self) -> Vec<String> {
        let mut p = self.outer.clone();
        p.push(self.name.clone());
        p
    }

    pub fn is_interface(&self) -> bool {
        matches!(self.kind.as_str(), "interface_declaration" | "annotation_type_declaration")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Import {
    pub path: String,
    pub is_static: bool,
    pub wildcard: bool,
}

/// Declaration table of one compilation unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDecls {
    pub package: String,
    pub imports: Vec<Import>,
    pub classes: Vec<ClassDecl>,
    pub methods: Vec<MethodDecl>,
    pub fields: Vec<FieldDecl>,
}

impl FileDecls {
    pub fn from_source(src: &str) -> Self {
        let tree = parse(src);
        Self::from_tree(&tree, src)
    }

    pub fn from_tree(tree: &Tree, src: &str) -> Self {
        let mut out = FileDecls::default();
        let root = tree.root_node();
        for child in named_children(root) {
            match child.kind() {
                "package_declaration" => {
                    if let Some(name) = named_children(child)
                        .into_iter()
                        .find(|c| matches!(c.kind(), "scoped_identifier" | "identifier"))
                    {
                        out.package = normalize_text(node_text(name, src)).replace(' ', "");
                    }
                }
                "import_declaration" => {
                    let kids = children(child);
                    let is_static = kids.iter().any(|c| c.kind() == "static");
                    let wildcard = kids.iter().any(|c| c.kind() == "asterisk");
                    if let Some(name) = kids
                        .iter()
                        .find(|c| matches!(c.kind(), "scoped_identifier" | "identifier"))
                    {
                        out.imports.push(Import {
                            path: node_text(*name, src).split_whitespace().collect(),
                            is_static,
                            wildcard,
                        });
                    }
                }
                _ => {}
            }
        }
        collect_decls(root, src, &mut Vec::new(), false, &mut out);
        out
    }

    /// The innermost method or constructor whose span contains `offset`.
    pub fn enclosing_method(&self, offset: usize) -> Option<&MethodDecl> {
        self.methods
            .iter()
            .filter(|m| m.span.contains(offset))
            .min_by_key(|m| m.span.end - m.span.start)
    }

    /// The innermost named class whose span contains `offset`.
    pub fn enclosing_class(&self, offset: usize) -> Option<&ClassDecl> {
        self.classes
            .iter()
            .filter(|c| c.span.contains(offset))
            .min_by_key(|c| c.span.end - c.span.start)
    }

    pub fn class_by_path(&self, path: &[String]) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| c.path() == path)
    }
}

fn collect_decls(node: Node<'_>, src: &str, classes: &mut Vec<String>, in_interface: bool, out: &mut FileDecls) {
    for child in named_children(node) {
        let kind = child.kind();
        if is_class_kind(kind) {
            let decl = class_decl(child, src, classes);
            let is_iface = decl.is_interface();
            classes.push(decl.name.clone());
            out.classes.push(decl);
            if let Some(body) = child.child_by_field_name("body") {
                collect_decls(body, src, classes, is_iface, out);
            }
            classes.pop();
            continue;
        }
        match kind {
            "method_declaration" | "constructor_declaration" => {
                if let Some(m) = method_decl(child, src, classes, in_interface) {
                    out.methods.push(m);
                }
                // Local and anonymous classes inside bodies.
                if let Some(body) = child.child_by_field_name("body") {
                    collect_nested(body, src, classes, out);
                }
            }
            "field_declaration" | "constant_declaration" => {
                out.fields.push(field_decl(child, src, classes, in_interface));
                collect_nested(child, src, classes, out);
            }
            "enum_constant" => {
                if let Some(name) = child.child_by_field_name("name") {
                    out.fields.push(FieldDecl {
                        classes: classes.clone(),
                        names: vec![(node_text(name, src).to_string(), Span::of(name))],
                        type_ref: None,
                        modifiers: Modifiers::default(),
                        span: Span::of(child),
                        in_interface,
                        enum_constant: true,
                    });
                }
                if let Some(body) = child.child_by_field_name("body") {
                    classes.push("<anonymous>".to_string());
                    collect_decls(body, src, classes, false, out);
                    classes.pop();
                }
            }
            "enum_body_declarations" => collect_decls(child, src, classes, in_interface, out),
            "static_initializer" | "block" => collect_nested(child, src, classes, out),
            _ => {}
        }
    }
}

/// Finds anonymous / local classes below a body and collects their members.
fn collect_nested(node: Node<'_>, src: &str, classes: &mut Vec<String>, out: &mut FileDecls) {
    for child in named_children(node) {
        if child.kind() == "object_creation_expression" {
            if let Some(body) = named_children(child).into_iter().find(|c| c.kind() == "class_body") {
                classes.push("<anonymous>".to_string());
                collect_decls(body, src, classes, false, out);
                classes.pop();
            }
            // Arguments may carry further anonymous classes.
            for arg in named_children(child).into_iter().filter(|c| c.kind() != "class_body") {
                collect_nested(arg, src, classes, out);
            }
        } else if is_class_kind(child.kind()) {
            // Local classes are treated as nested named classes.
            let decl = class_decl(child, src, classes);
            let iface = decl.is_interface();
            classes.push(decl.name.clone());
            out.classes.push(decl);
            if let Some(body) = child.child_by_field_name("body") {
                collect_decls(body, src, classes, iface, out);
            }
            classes.pop();
        } else {
            collect_nested(child, src, classes, out);
        }
    }
}

fn class_decl(node: Node<'_>, src: &str, outer: &[String]) -> ClassDecl {
    let name_node = node.child_by_field_name("name");
    let mut supertypes = Vec::new();
    for child in named_children(node) {
        match child.kind() {
            "superclass" => {
                if let Some(t) = named_children(child).into_iter().next() {
                    supertypes.push(TypeRef::from_node(t, src));
                }
            }
            "super_interfaces" | "extends_interfaces" => {
                if let Some(list) = named_children(child).into_iter().find(|c| c.kind() == "type_list") {
                    for t in named_children(list) {
                        supertypes.push(TypeRef::from_node(t, src));
                    }
                }
            }
            _ => {}
        }
    }
    let body = node.child_by_field_name("body");
    let members = body.map(|b| class_members(b, src)).unwrap_or_default();
    ClassDecl {
        kind: node.kind().to_string(),
        outer: outer.to_vec(),
        name: name_node.map(|n| node_text(n, src).to_string()).unwrap_or_default(),
        name_span: name_node.map(Span::of).unwrap_or(Span::of(node)),
        span: Span::of(node),
        body: body.map(Span::of),
        modifiers: Modifiers::of(node, src),
        supertypes,
        members,
    }
}

fn class_members(body: Node<'_>, src: &str) -> Vec<Member> {
    let mut out = Vec::new();
    for child in named_children(body) {
        let kind = match child.kind() {
            "field_declaration" | "constant_declaration" => MemberKind::Field,
            "method_declaration" => MemberKind::Method,
            "constructor_declaration" | "compact_constructor_declaration" => MemberKind::Constructor,
            "enum_constant" => MemberKind::EnumConstant,
            "static_initializer" | "block" => MemberKind::Initializer,
            "enum_body_declarations" => {
                out.extend(class_members(child, src));
                continue;
            }
            k if is_class_kind(k) => MemberKind::NestedType,
            _ => continue,
        };
        let name = match kind {
            MemberKind::Field => child
                .child_by_field_name("declarator")
                .and_then(|d| d.child_by_field_name("name"))
                .map(|n| node_text(n, src).to_string()),
            _ => child.child_by_field_name("name").map(|n| node_text(n, src).to_string()),
        };
        out.push(Member {
            kind,
            span: Span::of(child),
            modifiers: Modifiers::of(child, src),
            name,
        });
    }
    out
}

fn method_decl(node: Node<'_>, src: &str, classes: &[String], in_interface: bool) -> Option<MethodDecl> {
    let name = node.child_by_field_name("name")?;
    let mut params = Vec::new();
    if let Some(list) = node.child_by_field_name("parameters") {
        for p in named_children(list) {
            match p.kind() {
                "formal_parameter" => {
                    let ty = p.child_by_field_name("type")?;
                    let mut type_ref = TypeRef::from_node(ty, src);
                    if let Some(dims) = p.child_by_field_name("dimensions") {
                        type_ref.text.push_str(&normalize_text(node_text(dims, src)));
                    }
                    let pname = p.child_by_field_name("name")?;
                    params.push(ParamInfo {
                        type_ref,
                        name: node_text(pname, src).to_string(),
                        name_span: Span::of(pname),
                    });
                }
                "spread_parameter" => {
                    let kids = named_children(p);
                    let ty = kids.iter().find(|c| c.kind() != "modifiers" && c.kind() != "variable_declarator")?;
                    let mut type_ref = TypeRef::from_node(*ty, src);
                    type_ref.text.push_str("...");
                    let decl = kids.iter().find(|c| c.kind() == "variable_declarator")?;
                    let pname = decl.child_by_field_name("name")?;
                    params.push(ParamInfo {
                        type_ref,
                        name: node_text(pname, src).to_string(),
                        name_span: Span::of(pname),
                    });
                }
                _ => {}
            }
        }
    }
    let return_type = if node.kind() == "method_declaration" {
        let ty = node.child_by_field_name("type")?;
        let mut r = TypeRef::from_node(ty, src);
        if let Some(dims) = node.child_by_field_name("dimensions") {
            r.text.push_str(&normalize_text(node_text(dims, src)));
        }
        Some(r)
    } else {
        None
    };
    let throws = children(node)
        .into_iter()
        .find(|c| c.kind() == "throws")
        .map(|t| {
            named_children(t)
                .into_iter()
                .map(|e| normalize_text(node_text(e, src)))
                .collect()
        })
        .unwrap_or_default();
    Some(MethodDecl {
        classes: classes.to_vec(),
        name: node_text(name, src).to_string(),
        name_span: Span::of(name),
        params,
        return_type,
        modifiers: Modifiers::of(node, src),
        throws,
        span: Span::of(node),
        body: node.child_by_field_name("body").map(Span::of),
        in_interface,
    })
}

fn field_decl(node: Node<'_>, src: &str, classes: &[String], in_interface: bool) -> FieldDecl {
    let mut cursor = node.walk();
    let names = node
        .children_by_field_name("declarator", &mut cursor)
        .filter_map(|d| d.child_by_field_name("name"))
        .map(|n| (node_text(n, src).to_string(), Span::of(n)))
        .collect();
    FieldDecl {
        classes: classes.to_vec(),
        names,
        type_ref: node.child_by_field_name("type").map(|t| TypeRef::from_node(t, src)),
        modifiers: Modifiers::of(node, src),
        span: Span::of(node),
        in_interface,
        enum_constant: false,
    }
}

/// Finds the smallest named node covering `span` exactly.
pub fn node_at_span<'t>(tree: &'t Tree, span: Span) -> Option<Node<'t>> {
    tree.root_node().named_descendant_for_byte_range(span.start, span.end)
}
