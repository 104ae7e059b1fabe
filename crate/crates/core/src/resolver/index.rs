//! Name- and import-based symbol index built from syntax trees.
//!
//! Identifiers resolve by scope: locals of the enclosing method, members of
//! the enclosing classes and their supertypes, static imports. Type names
//! resolve by same-file declarations, then imports, then the same package.
//! Member accesses resolve through the declared type of their receiver when
//! it can be determined, and by name alone otherwise.

use std::collections::{HashMap, HashSet};

use tree_sitter::{Node, Tree};

use super::{sort_dedup, BackendKind, Location, SymbolResolver};
use crate::error::{Error, Result};
use crate::lang::dataflow::analyze;
use crate::lang::syntax::{
    descendants, is_class_kind, named_children, node_text, parse, FileDecls, LineIndex, Span,
};
use crate::snapshot::{RepoSnapshot, Version};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum DeclKind {
    Type,
    Method,
    Field,
}

#[derive(Debug, Clone)]
struct Decl {
    file: usize,
    name: String,
    name_span: Span,
    kind: DeclKind,
    owner: Option<usize>,
    /// Simple name of the field type or method return type.
    type_name: Option<String>,
    param_types: Vec<String>,
    /// Types only.
    fqcn: String,
    supertypes: Vec<String>,
}

struct IndexedFile {
    path: String,
    text: String,
    tree: Tree,
    decls: FileDecls,
}

#[derive(Default)]
struct VersionIndex {
    files: Vec<IndexedFile>,
    by_path: HashMap<String, usize>,
    decls: Vec<Decl>,
    /// (file, name span start) → decl index.
    by_site: HashMap<(usize, usize), usize>,
    types_by_fqcn: HashMap<String, Vec<usize>>,
    members: HashMap<(usize, String), Vec<usize>>,
    by_name: HashMap<(DeclKind, String), Vec<usize>>,
}

/// Strips generics, array brackets and qualifiers: `java.util.List<X>[]`
/// becomes `List`.
pub fn base_type_name(text: &str) -> &str {
    let end = text.find(['<', '[']).unwrap_or(text.len());
    let t = text[..end].trim().trim_end_matches("...");
    t.rsplit('.').next().unwrap_or(t).trim()
}

impl VersionIndex {
    fn build(files: impl Iterator<Item = (String, String)>) -> Self {
        let mut idx = VersionIndex::default();
        for (path, text) in files {
            let tree = parse(&text);
            let decls = FileDecls::from_tree(&tree, &text);
            idx.by_path.insert(path.clone(), idx.files.len());
            idx.files.push(IndexedFile { path, text, tree, decls });
        }
        for f in 0..idx.files.len() {
            idx.index_file(f);
        }
        idx
    }

    fn push(&mut self, d: Decl) -> usize {
        let i = self.decls.len();
        self.by_site.insert((d.file, d.name_span.start), i);
        if let Some(o) = d.owner {
            self.members.entry((o, d.name.clone())).or_default().push(i);
        }
        if d.kind == DeclKind::Type {
            self.types_by_fqcn.entry(d.fqcn.clone()).or_default().push(i);
        }
        self.by_name.entry((d.kind, d.name.clone())).or_default().push(i);
        self.decls.push(d);
        i
    }

    fn index_file(&mut self, f: usize) {
        let file = &self.files[f];
        let pkg = file.decls.package.clone();
        let classes = file.decls.classes.clone();
        let methods = file.decls.methods.clone();
        let fields = file.decls.fields.clone();
        let text = file.text.clone();
        let mut by_path: HashMap<Vec<String>, usize> = HashMap::new();
        for c in &classes {
            let path = c.path();
            let mut q: Vec<String> = Vec::new();
            if !pkg.is_empty() {
                q.push(pkg.clone());
            }
            q.extend(path.iter().cloned());
            let owner = by_path.get(&c.outer).copied();
            let i = self.push(Decl {
                file: f,
                name: c.name.clone(),
                name_span: c.name_span,
                kind: DeclKind::Type,
                owner,
                type_name: None,
                param_types: Vec::new(),
                fqcn: q.join("."),
                supertypes: c.supertypes.iter().map(|t| t.text.clone()).collect(),
            });
            by_path.insert(path, i);
        }
        for m in &methods {
            let owner = by_path.get(&m.classes).copied();
            self.push(Decl {
                file: f,
                name: m.name.clone(),
                name_span: m.name_span,
                kind: DeclKind::Method,
                owner,
                type_name: m
                    .return_type
                    .as_ref()
                    .and_then(|t| t.name_span.map(|s| s.text(&text).to_string())),
                param_types: m.params.iter().map(|p| p.type_ref.text.clone()).collect(),
                fqcn: String::new(),
                supertypes: Vec::new(),
            });
        }
        for fd in &fields {
            let owner = by_path.get(&fd.classes).copied();
            let type_name = match &fd.type_ref {
                Some(t) => t.name_span.map(|s| s.text(&text).to_string()),
                None => fd.classes.last().cloned(),
            };
            for (name, span) in &fd.names {
                self.push(Decl {
                    file: f,
                    name: name.clone(),
                    name_span: *span,
                    kind: DeclKind::Field,
                    owner,
                    type_name: type_name.clone(),
                    param_types: Vec::new(),
                    fqcn: String::new(),
                    supertypes: Vec::new(),
                });
            }
        }
    }

    fn location(&self, d: usize, v: Version) -> Location {
        let decl = &self.decls[d];
        let file = &self.files[decl.file];
        Location::from_span(&file.path, v, &file.text, decl.name_span)
    }

    /// Types named `name` as seen from file `f`.
    fn resolve_type(&self, f: usize, name: &str) -> Vec<usize> {
        if name.contains('.') {
            if let Some(hit) = self.types_by_fqcn.get(name) {
                return hit.clone();
            }
        }
        let simple = base_type_name(name);
        let file = &self.files[f];
        let same_file: Vec<usize> = self
            .by_name
            .get(&(DeclKind::Type, simple.to_string()))
            .map(|v| v.iter().copied().filter(|&d| self.decls[d].file == f).collect())
            .unwrap_or_default();
        if !same_file.is_empty() {
            return same_file;
        }
        let mut imported = Vec::new();
        for imp in file.decls.imports.iter().filter(|i| !i.is_static) {
            let fq = if imp.wildcard {
                format!("{}.{simple}", imp.path)
            } else if imp.path.rsplit('.').next() == Some(simple) {
                imp.path.clone()
            } else {
                continue;
            };
            if let Some(hit) = self.types_by_fqcn.get(&fq) {
                imported.extend(hit.iter().copied());
            }
        }
        if !imported.is_empty() {
            return imported;
        }
        let fq = if file.decls.package.is_empty() {
            simple.to_string()
        } else {
            format!("{}.{simple}", file.decls.package)
        };
        self.types_by_fqcn.get(&fq).cloned().unwrap_or_default()
    }

    /// Members named `name` of `ty`, searching supertypes level by level and
    /// stopping at the first level with a hit.
    fn members_of(&self, ty: usize, name: &str, kind: DeclKind) -> Vec<usize> {
        let mut level = vec![ty];
        let mut seen = HashSet::new();
        while !level.is_empty() {
            let mut hits = Vec::new();
            let mut next = Vec::new();
            for t in level {
                if !seen.insert(t) {
                    continue;
                }
                if let Some(ms) = self.members.get(&(t, name.to_string())) {
                    hits.extend(ms.iter().copied().filter(|&m| self.decls[m].kind == kind));
                }
                let d = &self.decls[t];
                for s in &d.supertypes {
                    next.extend(self.resolve_type(d.file, s));
                }
            }
            if !hits.is_empty() {
                return hits;
            }
            level = next;
        }
        Vec::new()
    }

    /// Supertypes of `ty`, transitively.
    fn ancestors(&self, ty: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![ty];
        let mut seen = HashSet::from([ty]);
        while let Some(t) = stack.pop() {
            let d = &self.decls[t];
            for s in &d.supertypes {
                for p in self.resolve_type(d.file, s) {
                    if seen.insert(p) {
                        out.push(p);
                        stack.push(p);
                    }
                }
            }
        }
        out
    }

    fn all_named(&self, kind: DeclKind, name: &str) -> Vec<usize> {
        self.by_name.get(&(kind, name.to_string())).cloned().unwrap_or_default()
    }

    /// Enclosing named class declarations of `node`, innermost first.
    fn enclosing_types(&self, f: usize, node: Node<'_>) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = node.parent();
        while let Some(n) = cur {
            if is_class_kind(n.kind()) {
                if let Some(name) = n.child_by_field_name("name") {
                    if let Some(&d) = self.by_site.get(&(f, name.start_byte())) {
                        out.push(d);
                    }
                }
            }
            cur = n.parent();
        }
        out
    }

    fn static_imports(&self, f: usize, name: &str, kind: DeclKind) -> Vec<usize> {
        let mut out = Vec::new();
        for imp in self.files[f].decls.imports.iter().filter(|i| i.is_static) {
            let (owner, member) = if imp.wildcard {
                (imp.path.as_str(), name)
            } else {
                match imp.path.rsplit_once('.') {
                    Some((o, m)) if m == name => (o, m),
                    _ => continue,
                }
            };
            for t in self.types_by_fqcn.get(owner).into_iter().flatten() {
                out.extend(self.members_of(*t, member, kind));
            }
        }
        out
    }

    /// Local variable or parameter declared before `node` in its method.
    fn local_decl(&self, f: usize, node: Node<'_>, name: &str) -> Option<Span> {
        let src = &self.files[f].text;
        let mut cur = node.parent();
        while let Some(n) = cur {
            if matches!(n.kind(), "method_declaration" | "constructor_declaration" | "lambda_expression") {
                let flow = analyze(n, src);
                if let Some(l) = flow
                    .locals
                    .iter()
                    .filter(|l| l.name == name && l.decl.start <= node.start_byte())
                    .max_by_key(|l| l.decl.start)
                {
                    return Some(l.decl);
                }
            }
            if is_class_kind(n.kind()) || n.kind() == "class_body" {
                return None;
            }
            cur = n.parent();
        }
        None
    }

    fn local_type(&self, f: usize, node: Node<'_>, name: &str) -> Option<String> {
        let src = &self.files[f].text;
        let mut cur = node.parent();
        while let Some(n) = cur {
            if matches!(n.kind(), "method_declaration" | "constructor_declaration" | "lambda_expression") {
                let flow = analyze(n, src);
                if let Some(l) = flow
                    .locals
                    .iter()
                    .filter(|l| l.name == name && l.decl.start <= node.start_byte())
                    .max_by_key(|l| l.decl.start)
                {
                    return l.type_text.as_deref().map(|t| base_type_name(t).to_string());
                }
            }
            if is_class_kind(n.kind()) {
                return None;
            }
            cur = n.parent();
        }
        None
    }

    fn field_in_scope(&self, f: usize, node: Node<'_>, name: &str) -> Vec<usize> {
        for t in self.enclosing_types(f, node) {
            let hits = self.members_of(t, name, DeclKind::Field);
            if !hits.is_empty() {
                return hits;
            }
        }
        self.static_imports(f, name, DeclKind::Field)
    }

    /// Type declarations for a declared (simple) type name of a decl.
    fn decl_type(&self, d: usize) -> Vec<usize> {
        let decl = &self.decls[d];
        match decl.kind {
            DeclKind::Type => vec![d],
            _ => decl
                .type_name
                .as_deref()
                .map(|t| self.resolve_type(decl.file, t))
                .unwrap_or_default(),
        }
    }

    /// Static type of a receiver expression, when it can be determined.
    fn receiver_types(&self, f: usize, obj: Node<'_>) -> Option<Vec<usize>> {
        let src = &self.files[f].text;
        let text = node_text(obj, src);
        let types = match obj.kind() {
            "identifier" => {
                if self.local_decl(f, obj, text).is_some() {
                    let t = self.local_type(f, obj, text)?;
                    self.resolve_type(f, &t)
                } else {
                    let fields = self.field_in_scope(f, obj, text);
                    if !fields.is_empty() {
                        fields.iter().flat_map(|&d| self.decl_type(d)).collect()
                    } else {
                        self.resolve_type(f, text)
                    }
                }
            }
            "this" => self.enclosing_types(f, obj).into_iter().take(1).collect(),
            "super" => {
                let t = *self.enclosing_types(f, obj).first()?;
                let d = &self.decls[t];
                d.supertypes
                    .first()
                    .map(|s| self.resolve_type(d.file, s))
                    .unwrap_or_default()
            }
            "scoped_identifier" | "type_identifier" | "scoped_type_identifier" => self.resolve_type(f, text),
            "field_access" | "method_invocation" => {
                let name = obj.child_by_field_name(if obj.kind() == "field_access" { "field" } else { "name" })?;
                self.resolve_identifier(f, name)
                    .into_iter()
                    .flat_map(|d| self.decl_type(d))
                    .collect()
            }
            "object_creation_expression" | "cast_expression" => {
                let ty = obj.child_by_field_name("type")?;
                self.resolve_type(f, node_text(ty, src))
            }
            "parenthesized_expression" => {
                let inner = named_children(obj).into_iter().next()?;
                return self.receiver_types(f, inner);
            }
            _ => return None,
        };
        (!types.is_empty()).then_some(types)
    }

    /// Declarations referenced by an identifier node, as decl indices. Locals
    /// are handled separately by the caller.
    fn resolve_identifier(&self, f: usize, node: Node<'_>) -> Vec<usize> {
        let src = &self.files[f].text;
        let text = node_text(node, src);
        if let Some(&d) = self.by_site.get(&(f, node.start_byte())) {
            if self.decls[d].name == text {
                return vec![d];
            }
        }
        if node.kind() == "type_identifier" {
            return self.resolve_type(f, text);
        }
        let Some(parent) = node.parent() else {
            return Vec::new();
        };
        let is = |field: &str| parent.child_by_field_name(field).is_some_and(|c| c.id() == node.id());
        match parent.kind() {
            "method_invocation" if is("name") => match parent.child_by_field_name("object") {
                Some(obj) => match self.receiver_types(f, obj) {
                    Some(types) => types
                        .into_iter()
                        .flat_map(|t| self.members_of(t, text, DeclKind::Method))
                        .collect(),
                    None => self.all_named(DeclKind::Method, text),
                },
                None => {
                    for t in self.enclosing_types(f, node) {
                        let hits = self.members_of(t, text, DeclKind::Method);
                        if !hits.is_empty() {
                            return hits;
                        }
                    }
                    self.static_imports(f, text, DeclKind::Method)
                }
            },
            "field_access" if is("field") => {
                let obj = parent.child_by_field_name("object");
                match obj.and_then(|o| self.receiver_types(f, o)) {
                    Some(types) => types
                        .into_iter()
                        .flat_map(|t| self.members_of(t, text, DeclKind::Field))
                        .collect(),
                    None => self.all_named(DeclKind::Field, text),
                }
            }
            "method_reference" => {
                let kids = named_children(parent);
                if kids.len() >= 2 && kids.last().is_some_and(|k| k.id() == node.id()) {
                    match self.receiver_types(f, kids[0]) {
                        Some(types) => types
                            .into_iter()
                            .flat_map(|t| self.members_of(t, text, DeclKind::Method))
                            .collect(),
                        None => self.all_named(DeclKind::Method, text),
                    }
                } else {
                    self.variable_or_type(f, node, text)
                }
            }
            "scoped_identifier" | "import_declaration" | "package_declaration" => {
                let full = node_text(parent, src);
                match self.types_by_fqcn.get(full) {
                    Some(t) if parent.named_child(parent.named_child_count() as u32 - 1) == Some(node) => t.clone(),
                    _ => Vec::new(),
                }
            }
            _ => self.variable_or_type(f, node, text),
        }
    }

    fn variable_or_type(&self, f: usize, node: Node<'_>, text: &str) -> Vec<usize> {
        let fields = self.field_in_scope(f, node, text);
        if !fields.is_empty() {
            return fields;
        }
        if text.starts_with(|c: char| c.is_uppercase()) {
            return self.resolve_type(f, text);
        }
        Vec::new()
    }

    fn identifier_at(&self, f: usize, loc: &Location) -> Result<Node<'_>> {
        let file = &self.files[f];
        let not_ident = || Error::CursorNotOnIdentifier {
            line: loc.range.start.line,
            column: loc.range.start.column,
        };
        let off = LineIndex::new(&file.text)
            .offset(loc.range.start.line, loc.range.start.column)
            .ok_or_else(not_ident)?;
        let node = file
            .tree
            .root_node()
            .descendant_for_byte_range(off, off + 1)
            .filter(|n| matches!(n.kind(), "identifier" | "type_identifier"))
            .ok_or_else(not_ident)?;
        Ok(node)
    }

    fn goto(&self, f: usize, node: Node<'_>, v: Version) -> Vec<Location> {
        let file = &self.files[f];
        let text = node_text(node, &file.text);
        if node.kind() == "identifier" && !self.by_site.contains_key(&(f, node.start_byte())) {
            let parent_kind = node.parent().map(|p| p.kind());
            let member_name = matches!(parent_kind, Some("method_invocation" | "field_access" | "method_reference"))
                && node.prev_sibling().is_some_and(|s| matches!(s.kind(), "." | "::"));
            let call_name = parent_kind == Some("method_invocation")
                && node
                    .parent()
                    .and_then(|p| p.child_by_field_name("name"))
                    .is_some_and(|c| c.id() == node.id());
            if !member_name && !call_name {
                if let Some(span) = self.local_decl(f, node, text) {
                    return vec![Location::from_span(&file.path, v, &file.text, span)];
                }
            }
        }
        sort_dedup(
            self.resolve_identifier(f, node)
                .into_iter()
                .map(|d| self.location(d, v))
                .collect(),
        )
    }

    /// Methods overridden or implemented by method decl `d`.
    fn overridden(&self, d: usize) -> Vec<usize> {
        let decl = &self.decls[d];
        let Some(owner) = decl.owner else {
            return Vec::new();
        };
        self.ancestors(owner)
            .into_iter()
            .flat_map(|t| self.members.get(&(t, decl.name.clone())).cloned().unwrap_or_default())
            .filter(|&m| self.decls[m].kind == DeclKind::Method && self.decls[m].param_types == decl.param_types)
            .collect()
    }
}

/// Builtin backend: an immutable index over both snapshot versions.
pub struct BuiltinIndex {
    versions: [VersionIndex; 2],
}

fn slot(v: Version) -> usize {
    match v {
        Version::Pre => 0,
        Version::Post => 1,
    }
}

impl BuiltinIndex {
    pub fn build(snapshot: &RepoSnapshot) -> Self {
        let make = |v| {
            VersionIndex::build(
                snapshot
                    .files(v)
                    .map(|(p, t)| (p.to_string(), t.to_string())),
            )
        };
        BuiltinIndex {
            versions: [make(Version::Pre), make(Version::Post)],
        }
    }

    fn version(&self, v: Version) -> &VersionIndex {
        &self.versions[slot(v)]
    }

    fn file_index(&self, loc: &Location) -> Result<usize> {
        self.version(loc.version)
            .by_path
            .get(&loc.file)
            .copied()
            .ok_or_else(|| Error::FileNotInSnapshot(format!("{}:{}", loc.version, loc.file)))
    }
}

impl SymbolResolver for BuiltinIndex {
    fn kind(&self) -> BackendKind {
        BackendKind::Builtin
    }

    fn goto_definition(&self, loc: &Location) -> Result<Vec<Location>> {
        let idx = self.version(loc.version);
        let f = self.file_index(loc)?;
        let node = idx.identifier_at(f, loc)?;
        Ok(idx.goto(f, node, loc.version))
    }

    fn find_references(&self, loc: &Location) -> Result<Vec<Location>> {
        let v = loc.version;
        let idx = self.version(v);
        let f = self.file_index(loc)?;
        let node = idx.identifier_at(f, loc)?;
        let name = node_text(node, &idx.files[f].text).to_string();
        let mut targets: HashSet<Location> = idx.goto(f, node, v).into_iter().collect();
        // Calls through an overridden or implemented method also count.
        if let Some(&d) = idx.by_site.get(&(f, node.start_byte())) {
            if idx.decls[d].kind == DeclKind::Method {
                targets.extend(idx.overridden(d).into_iter().map(|m| idx.location(m, v)));
            }
        }
        if targets.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for (fi, file) in idx.files.iter().enumerate() {
            if !file.text.contains(name.as_str()) {
                continue;
            }
            for n in descendants(file.tree.root_node()) {
                if !matches!(n.kind(), "identifier" | "type_identifier") || node_text(n, &file.text) != name {
                    continue;
                }
                let here = Location::from_span(&file.path, v, &file.text, Span::of(n));
                if targets.contains(&here) {
                    continue;
                }
                if idx.goto(fi, n, v).iter().any(|t| targets.contains(t)) {
                    out.push(here);
                }
            }
        }
        Ok(sort_dedup(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snapshot::CursorPos;

    fn snap(files: &[(&str, &str)]) -> RepoSnapshot {
        RepoSnapshot::from_sources(files.iter().copied(), files.iter().copied())
    }

    fn find(text: &str, needle: &str, nth: usize) -> CursorPos {
        let off = text.match_indices(needle).nth(nth).unwrap().0;
        let (l, c) = LineIndex::new(text).position(off);
        CursorPos::new(l, c)
    }

    const OPTS: &str = "package p.opts;\npublic class Opts {\n  public static Opts defaults() { return new Opts(); }\n  public int level;\n}\n";
    const API: &str = "package p;\nimport p.opts.Opts;\npublic interface Api {\n  void run(Opts o);\n}\n";
    const IMPL: &str = "package p;\nimport p.opts.*;\npublic class Impl implements Api {\n  private int count;\n  public void run(Opts o) {\n    int count = o.level;\n    this.count = count;\n    helper();\n  }\n  void helper() {}\n}\n";
    const USER: &str = "package q;\nimport p.Api;\nimport p.Impl;\nimport p.opts.Opts;\nclass User {\n  void go(Api api, Impl impl) {\n    // run(Opts.defaults()) in a comment\n    api.run(Opts.defaults());\n    impl.run(null);\n  }\n}\n";

    fn index() -> (RepoSnapshot, BuiltinIndex) {
        let s = snap(&[("p/opts/Opts.java", OPTS), ("p/Api.java", API), ("p/Impl.java", IMPL), ("q/User.java", USER)]);
        let i = BuiltinIndex::build(&s);
        (s, i)
    }

    fn at(file: &str, text: &str, needle: &str, nth: usize) -> Location {
        Location::at(file, Version::Post, find(text, needle, nth))
    }

    #[test]
    fn type_resolution_through_imports() {
        let (_, idx) = index();
        let defs = idx.goto_definition(&at("q/User.java", USER, "Opts.defaults", 1)).unwrap();
        assert_eq!(defs.len(), 1);
        assert_eq!(defs[0].file, "p/opts/Opts.java");
        assert_eq!(defs[0].range.start, find(OPTS, "Opts {", 0));
        // Wildcard import.
        let defs = idx.goto_definition(&at("p/Impl.java", IMPL, "Opts o", 0)).unwrap();
        assert_eq!(defs[0].file, "p/opts/Opts.java");
        // Same package, no import.
        let defs = idx.goto_definition(&at("p/Impl.java", IMPL, "Api", 0)).unwrap();
        assert_eq!(defs[0].file, "p/Api.java");
    }

    #[test]
    fn locals_shadow_fields_and_receivers_are_typed() {
        let (_, idx) = index();
        let local = idx.goto_definition(&at("p/Impl.java", IMPL, "= count", 0).shifted(2)).unwrap();
        assert_eq!(local[0].range.start, find(IMPL, "count = o", 0));
        let field = idx.goto_definition(&at("p/Impl.java", IMPL, "this.count", 0).shifted(5)).unwrap();
        assert_eq!(field[0].range.start, find(IMPL, "count;", 0));
        let level = idx.goto_definition(&at("p/Impl.java", IMPL, "level", 0)).unwrap();
        assert_eq!(level[0].file, "p/opts/Opts.java");
        let call = idx.goto_definition(&at("q/User.java", USER, "run(null)", 0)).unwrap();
        assert_eq!(call[0].file, "p/Impl.java");
        let own = idx.goto_definition(&at("p/Impl.java", IMPL, "helper()", 0)).unwrap();
        assert_eq!(own[0].range.start, find(IMPL, "helper() {}", 0));
    }

    #[test]
    fn references_include_calls_through_the_interface() {
        let (_, idx) = index();
        let refs = idx.find_references(&at("p/Impl.java", IMPL, "run", 0)).unwrap();
        let sites: Vec<_> = refs.iter().map(|l| (l.file.as_str(), l.range.start)).collect();
        assert_eq!(
            sites,
            vec![
                ("q/User.java", find(USER, "run(Opts.defaults", 1)),
                ("q/User.java", find(USER, "run(null)", 0)),
            ]
        );
        let none = idx.find_references(&at("q/User.java", USER, "go", 0)).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn cursor_must_be_on_identifier() {
        let (_, idx) = index();
        let err = idx.goto_definition(&at("q/User.java", USER, "(Api", 0)).unwrap_err();
        assert!(matches!(err, Error::CursorNotOnIdentifier { .. }));
    }

    impl Location {
        fn shifted(mut self, cols: usize) -> Self {
            self.range.start.column += cols;
            self.range.end = self.range.start;
            self
        }
    }
}
