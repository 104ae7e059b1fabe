//! Test-repair-oriented context collection.

mod class_ctx;
mod env_ctx;
mod usage_ctx;

use serde::{Deserialize, Serialize};

pub use class_ctx::{collect_class_ctx, new_types, NewType};
pub use env_ctx::collect_env_ctx;
pub use usage_ctx::{collect_usage_ctx, render_lines, usage_lines, UsageCtxResult};

use crate::error::Result;
use crate::lang::syntax::{FileDecls, LineIndex};
use crate::resolver::{Location, SymbolResolver};
use crate::signature::{FocalChange, MethodLocator};
use crate::snapshot::{canonicalize, canonicalize_fragment, RepoSnapshot};

pub const MAX_CHUNK_LINES: usize = 40;
pub const TRUNCATION_MARKER: &str = "... (truncated)";
pub const MAX_SUPERTYPE_DEPTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChunkKind {
    ClassCtx,
    UsageCtx,
    EnvCtxFocal,
    EnvCtxTest,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextChunk {
    pub kind: ChunkKind,
    pub text: String,
    /// Condensed declaration used for scoring method chunks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature_form: Option<String>,
    pub origin: Location,
    pub group_label: String,
    #[serde(default)]
    pub is_constructor: bool,
}

impl ContextChunk {
    /// The text scored against queries.
    pub fn scoring_text(&self) -> &str {
        self.signature_form.as_deref().unwrap_or(&self.text)
    }
}

/// Which parts of the updated signature introduced a type.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeTags {
    pub param: bool,
    #[serde(rename = "return")]
    pub ret: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCtxGroup {
    pub type_name: String,
    pub tags: TypeTags,
    pub chunks: Vec<ContextChunk>,
    /// Set when the type has no definition inside the snapshot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TROCtxBundle {
    /// One group per new type, in order of appearance in the signature.
    pub class_ctx: Vec<ClassCtxGroup>,
    pub usage_ctx: Vec<ContextChunk>,
    pub env_ctx_focal: Vec<ContextChunk>,
    pub env_ctx_test: Vec<ContextChunk>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TROCtxBundle {
    pub fn is_empty(&self) -> bool {
        self.class_ctx.iter().all(|g| g.chunks.is_empty())
            && self.usage_ctx.is_empty()
            && self.env_ctx_focal.is_empty()
            && self.env_ctx_test.is_empty()
    }

    pub fn all_chunks(&self) -> impl Iterator<Item = &ContextChunk> {
        self.class_ctx
            .iter()
            .flat_map(|g| g.chunks.iter())
            .chain(&self.usage_ctx)
            .chain(&self.env_ctx_focal)
            .chain(&self.env_ctx_test)
    }
}

/// Runs all three collectors for one sample.
pub fn collect_all(
    focal: &FocalChange,
    test: &MethodLocator,
    snapshot: &RepoSnapshot,
    resolver: &dyn SymbolResolver,
) -> Result<TROCtxBundle> {
    let mut bundle = TROCtxBundle::default();
    if focal.kinds.param || focal.kinds.ret {
        bundle.class_ctx = collect_class_ctx(focal, snapshot, resolver)?;
        bundle
            .warnings
            .extend(bundle.class_ctx.iter().filter_map(|g| g.warning.clone()));
    }
    if !focal.kinds.is_empty() {
        let usage = collect_usage_ctx(focal, test, snapshot, resolver)?;
        bundle.usage_ctx = usage.chunks;
        bundle.warnings.extend(usage.warnings);
    }
    let (env_focal, env_test, warnings) = collect_env_ctx(focal, test, snapshot, resolver)?;
    bundle.env_ctx_focal = env_focal;
    bundle.env_ctx_test = env_test;
    bundle.warnings.extend(warnings);
    Ok(bundle)
}

/// Canonical text of a file; files that do not parse are canonicalized
/// token-wise so that collection can proceed.
pub(crate) fn canonical_file(text: &str) -> String {
    canonicalize(text)
        .or_else(|_| canonicalize_fragment(text))
        .unwrap_or_else(|_| text.to_string())
}

/// Inclusive line range of the method matching `locator` in a text.
pub(crate) fn method_lines(text: &str, locator: &MethodLocator) -> Option<(usize, usize)> {
    let decls = FileDecls::from_source(text);
    let m = locator.resolve(&decls).ok()?;
    let idx = LineIndex::new(text);
    Some((idx.line_of(m.span.start), idx.line_of(m.span.end.saturating_sub(1))))
}

/// Caps `text` at [`MAX_CHUNK_LINES`] lines.
pub(crate) fn truncate_lines(text: &str) -> String {
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() <= MAX_CHUNK_LINES {
        return lines.join("\n");
    }
    let mut out = lines[..MAX_CHUNK_LINES].join("\n");
    out.push('\n');
    out.push_str(TRUNCATION_MARKER);
    out
}
