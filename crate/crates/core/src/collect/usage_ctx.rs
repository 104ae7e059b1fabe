//! Usage diffs: how other callers of the focal method changed.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{canonical_file, ChunkKind, ContextChunk};
use crate::error::Result;
use crate::lang::lexer::lex_lossy;
use crate::lang::syntax::{named_children, parse, FileDecls, LineIndex, Span};
use crate::resolver::{Location, SymbolResolver};
use crate::signature::{FocalChange, MethodLocator, SynBCKind};
use crate::snapshot::canon::canonicalize_fragment_with_cursor;
use crate::snapshot::diff::{changed_line, DiffLine, DiffText, LineKind};
use crate::snapshot::{canonicalize_with_cursor, unified_diff, CursorPos, RepoSnapshot, Version};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageCtxResult {
    pub chunks: Vec<ContextChunk>,
    /// References returned by the resolver before filtering.
    pub raw_references: usize,
    /// Usages left after scope and arity filtering.
    pub usages: usize,
    pub warnings: Vec<String>,
}

/// Maps a post line that is not inserted to its pre line.
fn post_to_pre(diff: &DiffText, post_line: usize) -> usize {
    let shift: isize = diff
        .hunks
        .iter()
        .filter(|h| h.new_start + h.new_len <= post_line)
        .map(|h| h.old_len as isize - h.new_len as isize)
        .sum();
    (post_line as isize + shift) as usize
}

fn is_inserted(diff: &DiffText, post_line: usize) -> bool {
    diff.hunks
        .iter()
        .any(|h| h.inserted().any(|l| l.index == post_line))
}

fn mentions(line: &str, names: &[&str]) -> bool {
    lex_lossy(line).iter().any(|t| t.is_ident() && names.contains(&t.text))
}

/// Changed lines of one usage: the invocation's own changed lines, preceded
/// by the enclosing method's earlier changes when parameters changed and
/// followed by its later changes when the return type changed.
///
/// `method` is the enclosing method's inclusive post line range; `None`
/// restricts the result to the invocation line.
pub fn usage_lines(
    diff: &DiffText,
    cursor_line: usize,
    method: Option<(usize, usize)>,
    kinds: SynBCKind,
    names: &[&str],
) -> Vec<DiffLine> {
    let (a, b) = method.unwrap_or((cursor_line, cursor_line));
    let kept: Vec<usize> = (a..=b).filter(|&l| !is_inserted(diff, l)).collect();
    let pre_range = match (kept.first(), kept.last()) {
        (Some(&lo), Some(&hi)) if method.is_some() => Some((post_to_pre(diff, lo), post_to_pre(diff, hi))),
        _ => None,
    };

    // Changed lines of the enclosing method in diff order, with hunk index.
    let mut lines: Vec<(usize, &DiffLine)> = Vec::new();
    for (hi, h) in diff.hunks.iter().enumerate() {
        let inserts_inside = h.inserted().any(|l| a <= l.index && l.index <= b);
        let inserts_outside = h.inserted().any(|l| l.index < a || b < l.index);
        for l in &h.lines {
            let belongs = match l.kind {
                LineKind::Insert => a <= l.index && l.index <= b,
                LineKind::Delete => {
                    pre_range.is_some_and(|(lo, hi)| lo <= l.index && l.index <= hi)
                        || (inserts_inside && !inserts_outside)
                }
                LineKind::Context => false,
            };
            if belongs {
                lines.push((hi, l));
            }
        }
    }

    // The invocation: the inserted cursor line plus the nearest deleted line
    // of the same hunk that names the focal method.
    let mut invocation: Vec<usize> = Vec::new();
    if let Some(pos) = lines
        .iter()
        .position(|(_, l)| l.kind == LineKind::Insert && l.index == cursor_line)
    {
        let hunk = lines[pos].0;
        let rank = diff.hunks[hunk]
            .inserted()
            .position(|l| l.index == cursor_line)
            .unwrap_or(0);
        let deleted: Vec<usize> = lines
            .iter()
            .enumerate()
            .filter(|(_, (h, l))| *h == hunk && l.kind == LineKind::Delete)
            .map(|(i, _)| i)
            .collect();
        let best = deleted
            .iter()
            .enumerate()
            .filter(|(_, &i)| mentions(lines[i].1.text(), names))
            .min_by_key(|(r, _)| r.abs_diff(rank))
            .map(|(_, &i)| i);
        invocation.extend(best);
        invocation.push(pos);
        invocation.sort_unstable();
    }

    // Deleted lines split at the invocation's pre position, inserted lines
    // at the cursor.
    let pre_pivot = match invocation.as_slice() {
        [d, _] => lines[*d].1.index,
        [i] => {
            let h = &diff.hunks[lines[*i].0];
            h.old_start + (cursor_line - h.new_start).min(h.old_len)
        }
        _ => post_to_pre(diff, cursor_line),
    };
    let (before, after): (Vec<usize>, Vec<usize>) = (0..lines.len())
        .filter(|i| !invocation.contains(i))
        .partition(|&i| {
            let l = lines[i].1;
            match l.kind {
                LineKind::Insert => l.index < cursor_line,
                _ => l.index < pre_pivot,
            }
        });

    let mut out = Vec::new();
    if kinds.param {
        out.extend(before.iter().map(|&i| lines[i].1.clone()));
    }
    out.extend(invocation.iter().map(|&i| lines[i].1.clone()));
    if kinds.ret {
        out.extend(after.iter().map(|&i| lines[i].1.clone()));
    }
    out
}

pub fn render_lines(lines: &[DiffLine]) -> String {
    lines.iter().map(changed_line).collect::<Vec<_>>().join("\n")
}

fn span_lines(text: &str, span: Span) -> (usize, usize) {
    let idx = LineIndex::new(text);
    (idx.line_of(span.start), idx.line_of(span.end.saturating_sub(1)))
}

/// Argument count when `loc` names a method invocation, `Some(None)` for a
/// method reference, `None` for anything else.
fn call_arity(text: &str, loc: &Location) -> Option<Option<usize>> {
    let off = loc.span_in(text)?.start;
    let tree = parse(text);
    let node = tree.root_node().descendant_for_byte_range(off, off + 1)?;
    let parent = node.parent()?;
    match parent.kind() {
        "method_invocation" if parent.child_by_field_name("name").is_some_and(|n| n.id() == node.id()) => {
            let args = parent.child_by_field_name("arguments")?;
            let n = named_children(args)
                .into_iter()
                .filter(|c| !c.kind().ends_with("comment"))
                .count();
            Some(Some(n))
        }
        "method_reference" => Some(None),
        _ => None,
    }
}

fn arity_matches(n: usize, params: usize, varargs: bool) -> bool {
    if varargs {
        n + 1 >= params
    } else {
        n == params
    }
}

fn method_span(snapshot: &RepoSnapshot, locator: &MethodLocator) -> Option<Span> {
    let text = snapshot.get(locator.version, &locator.file)?;
    locator.resolve(&FileDecls::from_source(text)).ok().map(|m| m.span)
}

/// Collects usage diffs of the updated focal method.
pub fn collect_usage_ctx(
    focal: &FocalChange,
    test: &MethodLocator,
    snapshot: &RepoSnapshot,
    resolver: &dyn SymbolResolver,
) -> Result<UsageCtxResult> {
    let mut result = UsageCtxResult::default();
    let post_focal = snapshot.file(Version::Post, &focal.locator_post.file)?;
    let decl = focal.locator_post.resolve(&FileDecls::from_source(post_focal))?.clone();
    let site = Location::from_span(&focal.locator_post.file, Version::Post, post_focal, decl.name_span);
    let refs = resolver.find_references(&site)?;
    result.raw_references = refs.len();

    let test_post = MethodLocator {
        version: Version::Post,
        ..test.clone()
    };
    let test_span = method_span(snapshot, &test_post);
    let names = [focal.original.name.as_str(), focal.updated.name.as_str()];

    let mut canon_cache: HashMap<String, (String, DiffText)> = HashMap::new();
    let mut seen = HashSet::new();
    for usage in refs {
        let Some(post_text) = snapshot.get(Version::Post, &usage.file) else { continue };
        let Some(span) = usage.span_in(post_text) else { continue };
        if usage.file == focal.locator_post.file && decl.span.contains(span.start) {
            continue;
        }
        if usage.file == test_post.file && test_span.is_some_and(|t| t.contains(span.start)) {
            continue;
        }
        match call_arity(post_text, &usage) {
            Some(Some(n)) if arity_matches(n, focal.updated.params.len(), focal.updated.is_varargs()) => {}
            Some(None) => {}
            _ => continue,
        }
        result.usages += 1;

        let pos = usage.range.start;
        let canon = canonicalize_with_cursor(post_text, pos).or_else(|_| canonicalize_fragment_with_cursor(post_text, pos));
        let Ok((post_canon, cursor)) = canon else {
            result.warnings.push(format!("cannot canonicalize usage at {}:{}", usage.file, pos.line + 1));
            continue;
        };
        let (pre_canon, diff) = canon_cache
            .entry(usage.file.clone())
            .or_insert_with(|| {
                let pre_canon = match snapshot.get(Version::Pre, &usage.file) {
                    Some(t) => canonical_file(t),
                    None => String::new(),
                };
                let diff = unified_diff(&pre_canon, &post_canon, 0);
                (pre_canon, diff)
            })
            .clone();
        if pre_canon.is_empty() && snapshot.get(Version::Pre, &usage.file).is_none() {
            let w = format!("{} is missing in the pre version", usage.file);
            if !result.warnings.contains(&w) {
                result.warnings.push(w);
            }
        }

        let post_decls = FileDecls::from_source(&post_canon);
        let offset = LineIndex::new(&post_canon)
            .offset(cursor.line, cursor.column)
            .unwrap_or(0);
        let method = post_decls
            .enclosing_method(offset)
            .map(|m| span_lines(&post_canon, m.span));
        let lines = usage_lines(&diff, cursor.line, method, focal.kinds, &names);
        if lines.is_empty() {
            continue;
        }
        let text = render_lines(&lines);
        if !seen.insert(text.clone()) {
            continue;
        }
        let label = match post_decls.enclosing_class(offset) {
            Some(c) => format!("Usage in class {}", c.name),
            None => format!("Usage in {}", usage.file),
        };
        result.chunks.push(ContextChunk {
            kind: ChunkKind::UsageCtx,
            text,
            signature_form: None,
            origin: Location::at(usage.file.clone(), Version::Post, CursorPos::new(pos.line, pos.column)),
            group_label: label,
            is_constructor: false,
        });
    }
    Ok(result)
}
