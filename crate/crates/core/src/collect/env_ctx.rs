//! Changes around the focal and test methods: their own files and the files
//! of their supertypes.

use std::collections::{HashSet, VecDeque};

use super::{canonical_file, method_lines, ChunkKind, ContextChunk, MAX_SUPERTYPE_DEPTH};
use crate::error::Result;
use crate::lang::syntax::FileDecls;
use crate::resolver::{Location, SymbolResolver};
use crate::signature::{FocalChange, MethodLocator};
use crate::snapshot::diff::{changed_line, LineKind};
use crate::snapshot::{unified_diff, CursorPos, RepoSnapshot, Version};

/// Files of the class enclosing `locator` plus its supertypes, own file first.
fn related_files(
    locator: &MethodLocator,
    snapshot: &RepoSnapshot,
    resolver: &dyn SymbolResolver,
    warnings: &mut Vec<String>,
) -> Result<Vec<String>> {
    let mut files = vec![locator.file.clone()];
    let Some(text) = snapshot.get(Version::Post, &locator.file) else {
        return Ok(files);
    };
    let decls = FileDecls::from_source(text);
    let Some(class) = decls.class_by_path(&locator.classes) else {
        warnings.push(format!("class {} not found in {}", locator.classes.join("."), locator.file));
        return Ok(files);
    };
    let mut queue: VecDeque<(Location, usize)> = class
        .supertypes
        .iter()
        .filter_map(|s| s.name_span)
        .map(|sp| (Location::from_span(&locator.file, Version::Post, text, sp), 1))
        .collect();
    let mut seen = HashSet::new();
    while let Some((site, depth)) = queue.pop_front() {
        if !seen.insert((site.file.clone(), site.range.start)) {
            continue;
        }
        for def in resolver.goto_definition(&site)? {
            if !files.contains(&def.file) {
                files.push(def.file.clone());
            }
            if depth >= MAX_SUPERTYPE_DEPTH {
                continue;
            }
            let Some(t) = snapshot.get(Version::Post, &def.file) else { continue };
            let d = FileDecls::from_source(t);
            let Some(span) = def.span_in(t) else { continue };
            let Some(c) = d.classes.iter().find(|c| c.name_span.start == span.start) else { continue };
            for sp in c.supertypes.iter().filter_map(|s| s.name_span) {
                queue.push_back((Location::from_span(&def.file, Version::Post, t, sp), depth + 1));
            }
        }
    }
    Ok(files)
}

/// One chunk per diff hunk of each related file, without the lines of the
/// method itself.
fn file_chunks(locator: &MethodLocator, files: &[String], snapshot: &RepoSnapshot, kind: ChunkKind) -> Vec<ContextChunk> {
    let mut out = Vec::new();
    for file in files {
        let pre = snapshot.get(Version::Pre, file).map(canonical_file).unwrap_or_default();
        let post = snapshot.get(Version::Post, file).map(canonical_file).unwrap_or_default();
        let (pre_skip, post_skip) = if *file == locator.file {
            let pre_loc = MethodLocator { version: Version::Pre, ..locator.clone() };
            let post_loc = MethodLocator { version: Version::Post, ..locator.clone() };
            (method_lines(&pre, &pre_loc), method_lines(&post, &post_loc))
        } else {
            (None, None)
        };
        let inside = |r: Option<(usize, usize)>, i: usize| r.is_some_and(|(a, b)| a <= i && i <= b);
        for hunk in unified_diff(&pre, &post, 0).hunks {
            let lines: Vec<_> = hunk
                .lines
                .iter()
                .filter(|l| match l.kind {
                    LineKind::Delete => !inside(pre_skip, l.index),
                    LineKind::Insert => !inside(post_skip, l.index),
                    LineKind::Context => false,
                })
                .collect();
            if lines.is_empty() {
                continue;
            }
            let line = lines
                .iter()
                .find(|l| l.kind == LineKind::Insert)
                .map_or(hunk.new_start, |l| l.index);
            out.push(ContextChunk {
                kind,
                text: lines.iter().map(|l| changed_line(l)).collect::<Vec<_>>().join("\n"),
                signature_form: None,
                origin: Location::at(file.clone(), Version::Post, CursorPos::new(line, 0)),
                group_label: format!("Changed in {file}"),
                is_constructor: false,
            });
        }
    }
    out
}

/// Environment diffs for the focal method and for the test.
pub fn collect_env_ctx(
    focal: &FocalChange,
    test: &MethodLocator,
    snapshot: &RepoSnapshot,
    resolver: &dyn SymbolResolver,
) -> Result<(Vec<ContextChunk>, Vec<ContextChunk>, Vec<String>)> {
    let mut warnings = Vec::new();
    let focal_files = related_files(&focal.locator_post, snapshot, resolver, &mut warnings)?;
    let test_files = related_files(test, snapshot, resolver, &mut warnings)?;
    let focal_chunks = file_chunks(&focal.locator_post, &focal_files, snapshot, ChunkKind::EnvCtxFocal);
    let test_chunks = file_chunks(test, &test_files, snapshot, ChunkKind::EnvCtxTest);
    Ok((focal_chunks, test_chunks, warnings))
}
