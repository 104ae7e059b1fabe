//! Member declarations of class types introduced by the updated signature.

use std::collections::{HashSet, VecDeque};

use super::{truncate_lines, ChunkKind, ClassCtxGroup, ContextChunk, TypeTags, MAX_SUPERTYPE_DEPTH};
use crate::error::Result;
use crate::lang::format::{format_tokens, join_inline};
use crate::lang::lexer::{lex_lossy, Token, TokenKind};
use crate::lang::syntax::{class_type_identifiers, node_at_span, node_text, parse, ClassDecl, FileDecls, MemberKind, Span};
use crate::resolver::{Location, SymbolResolver};
use crate::signature::{FocalChange, MethodLocator};
use crate::snapshot::{RepoSnapshot, Version};

const LOMBOK: &[&str] = &["Data", "Getter", "Setter"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewType {
    pub name: String,
    pub tags: TypeTags,
    /// First occurrence of the type name in the updated declaration.
    pub site: Location,
}

/// Class-type identifiers of a located method's parameter and return types,
/// tagged with where they occur.
fn signature_types(text: &str, locator: &MethodLocator) -> Result<Vec<(String, Span, bool)>> {
    let tree = parse(text);
    let decls = FileDecls::from_tree(&tree, text);
    let m = locator.resolve(&decls)?;
    let mut out = Vec::new();
    let mut push = |span: Span, is_param: bool| {
        if let Some(node) = node_at_span(&tree, span) {
            for id in class_type_identifiers(node) {
                out.push((node_text(id, text).to_string(), Span::of(id), is_param));
            }
        }
    };
    for p in &m.params {
        push(p.type_ref.span, true);
    }
    if let Some(r) = &m.return_type {
        push(r.span, false);
    }
    Ok(out)
}

/// Types named in the updated parameter or return types that the original
/// signature does not mention.
pub fn new_types(focal: &FocalChange, snapshot: &RepoSnapshot) -> Result<Vec<NewType>> {
    let pre_text = snapshot.file(Version::Pre, &focal.locator_pre.file)?;
    let post_text = snapshot.file(Version::Post, &focal.locator_post.file)?;
    let old: HashSet<String> = signature_types(pre_text, &focal.locator_pre)?
        .into_iter()
        .map(|(n, _, _)| n)
        .collect();
    let mut out: Vec<NewType> = Vec::new();
    for (name, span, is_param) in signature_types(post_text, &focal.locator_post)? {
        if old.contains(&name) {
            continue;
        }
        let entry = match out.iter_mut().position(|t| t.name == name) {
            Some(i) => &mut out[i],
            None => {
                out.push(NewType {
                    name: name.clone(),
                    tags: TypeTags::default(),
                    site: Location::from_span(&focal.locator_post.file, Version::Post, post_text, span),
                });
                out.last_mut().expect("just pushed")
            }
        };
        if is_param && focal.kinds.param {
            entry.tags.param = true;
        }
        if !is_param && focal.kinds.ret {
            entry.tags.ret = true;
        }
    }
    out.retain(|t| t.tags.param || t.tags.ret);
    Ok(out)
}

/// Drops annotation token runs: `@Name`, `@a.b.Name`, `@Name(...)`.
fn without_annotations<'a>(tokens: &[Token<'a>]) -> Vec<Token<'a>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let t = tokens[i];
        if t.is_op("@") && tokens.get(i + 1).is_some_and(|n| n.kind == TokenKind::Ident) {
            i += 2;
            while i + 1 < tokens.len() && tokens[i].is_op(".") && tokens[i + 1].kind == TokenKind::Ident {
                i += 2;
            }
            if tokens.get(i).is_some_and(|t| t.is_op("(")) {
                let mut depth = 0;
                while i < tokens.len() {
                    if tokens[i].is_op("(") {
                        depth += 1;
                    } else if tokens[i].is_op(")") {
                        depth -= 1;
                        if depth == 0 {
                            i += 1;
                            break;
                        }
                    }
                    i += 1;
                }
            }
            continue;
        }
        out.push(t);
        i += 1;
    }
    out
}

/// `public static Foo bar(int x);` from a method or constructor header.
pub fn signature_form(header: &str) -> String {
    let tokens = without_annotations(&lex_lossy(header));
    let end = tokens.iter().rposition(|t| !t.is_op(";")).map_or(0, |i| i + 1);
    format!("{};", join_inline(&tokens[..end]))
}

fn declaration_text(text: &str) -> String {
    let tokens = without_annotations(&lex_lossy(text));
    truncate_lines(format_tokens(&tokens).text.trim_end())
}

/// Chunks for the direct members of one class.
fn member_chunks(class: &ClassDecl, decls: &FileDecls, file: &str, text: &str) -> Vec<ContextChunk> {
    let kind_word = if class.is_interface() { "interface" } else { "class" };
    let label = format!("Defined in {kind_word} {}", class.name);
    let lombok_class = class.modifiers.has_annotation(LOMBOK);
    let mut out = Vec::new();
    for member in &class.members {
        let keep = match member.kind {
            MemberKind::Field => {
                !member.modifiers.is_private() || lombok_class || member.modifiers.has_annotation(LOMBOK)
            }
            MemberKind::Method | MemberKind::Constructor => !member.modifiers.is_private(),
            MemberKind::EnumConstant => true,
            MemberKind::NestedType | MemberKind::Initializer => false,
        };
        if !keep {
            continue;
        }
        let (chunk_text, signature, is_ctor, origin_span) = match member.kind {
            MemberKind::Method | MemberKind::Constructor => {
                let Some(m) = decls.methods.iter().find(|m| m.span == member.span) else { continue };
                let form = signature_form(&text[m.span.start..m.header_end()]);
                (form.clone(), Some(form), m.is_constructor(), m.name_span)
            }
            _ => {
                let origin = decls
                    .fields
                    .iter()
                    .find(|f| f.span == member.span)
                    .and_then(|f| f.names.first().map(|(_, s)| *s))
                    .unwrap_or(member.span);
                (declaration_text(member.span.text(text)), None, false, origin)
            }
        };
        if chunk_text.trim().is_empty() {
            continue;
        }
        out.push(ContextChunk {
            kind: ChunkKind::ClassCtx,
            text: chunk_text,
            signature_form: signature,
            origin: Location::from_span(file, Version::Post, text, origin_span),
            group_label: label.clone(),
            is_constructor: is_ctor,
        });
    }
    out
}

/// Classes declared at `loc` (a type name site) in the post snapshot.
fn class_at<'d>(decls: &'d FileDecls, text: &str, loc: &Location) -> Option<&'d ClassDecl> {
    let span = loc.span_in(text)?;
    decls.classes.iter().find(|c| c.name_span.start == span.start)
}

/// Resolves the definition of each new type and chunks its members and the
/// members of its supertypes found in the snapshot.
pub fn collect_class_ctx(
    focal: &FocalChange,
    snapshot: &RepoSnapshot,
    resolver: &dyn SymbolResolver,
) -> Result<Vec<ClassCtxGroup>> {
    let mut groups = Vec::new();
    for ty in new_types(focal, snapshot)? {
        let defs: Vec<Location> = resolver
            .goto_definition(&ty.site)?
            .into_iter()
            .filter(|l| {
                snapshot
                    .get(Version::Post, &l.file)
                    .is_some_and(|t| class_at(&FileDecls::from_source(t), t, l).is_some())
            })
            .collect();
        let Some(first) = defs.into_iter().next() else {
            tracing::warn!(type_name = %ty.name, "type definition not found in snapshot");
            groups.push(ClassCtxGroup {
                warning: Some(format!("definition of {} not found in snapshot", ty.name)),
                type_name: ty.name,
                tags: ty.tags,
                chunks: Vec::new(),
            });
            continue;
        };

        let mut chunks = Vec::new();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([(first, 0usize)]);
        while let Some((loc, depth)) = queue.pop_front() {
            if !seen.insert((loc.file.clone(), loc.range.start)) {
                continue;
            }
            let text = snapshot.file(Version::Post, &loc.file)?;
            let decls = FileDecls::from_source(text);
            let Some(class) = class_at(&decls, text, &loc) else { continue };
            chunks.extend(member_chunks(class, &decls, &loc.file, text));
            if depth >= MAX_SUPERTYPE_DEPTH {
                continue;
            }
            for sup in &class.supertypes {
                let Some(name_span) = sup.name_span else { continue };
                let site = Location::from_span(&loc.file, Version::Post, text, name_span);
                for def in resolver.goto_definition(&site)? {
                    queue.push_back((def, depth + 1));
                }
            }
        }
        groups.push(ClassCtxGroup {
            type_name: ty.name,
            tags: ty.tags,
            chunks,
            warning: None,
        });
    }
    Ok(groups)
}
