//! Goto-definition and find-references over one snapshot version.

pub mod index;
pub mod lsp;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lang::syntax::{LineIndex, Span};
use crate::snapshot::{CursorPos, Version};

pub use index::BuiltinIndex;
pub use lsp::LspResolver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Range {
    pub start: CursorPos,
    pub end: CursorPos,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Location {
    pub file: String,
    pub range: Range,
    pub version: Version,
}

impl Location {
    pub fn new(file: impl Into<String>, version: Version, start: CursorPos, end: CursorPos) -> Self {
        Location {
            file: file.into(),
            range: Range { start, end },
            version,
        }
    }

    /// Location of a byte span within `text`.
    pub fn from_span(file: &str, version: Version, text: &str, span: Span) -> Self {
        let idx = LineIndex::new(text);
        let (sl, sc) = idx.position(span.start);
        let (el, ec) = idx.position(span.end);
        Location::new(file, version, CursorPos::new(sl, sc), CursorPos::new(el, ec))
    }

    /// A zero-width location at `pos`, used for requests.
    pub fn at(file: impl Into<String>, version: Version, pos: CursorPos) -> Self {
        Location::new(file, version, pos, pos)
    }

    /// Byte span of this location in `text`, if it fits.
    pub fn span_in(&self, text: &str) -> Option<Span> {
        let idx = LineIndex::new(text);
        Some(Span {
            start: idx.offset(self.range.start.line, self.range.start.column)?,
            end: idx.offset(self.range.end.line, self.range.end.column)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    Builtin,
    Lsp,
}

/// Answers symbol queries. Results are sorted by file then position and
/// contain no duplicates.
pub trait SymbolResolver: Send + Sync {
    fn kind(&self) -> BackendKind;

    /// Declarations of the identifier at `loc`; empty when none is known.
    fn goto_definition(&self, loc: &Location) -> Result<Vec<Location>>;

    /// Use sites of the symbol declared at `loc`, excluding the declaration.
    fn find_references(&self, loc: &Location) -> Result<Vec<Location>>;
}

pub(crate) fn sort_dedup(mut locs: Vec<Location>) -> Vec<Location> {
    locs.sort_by(|a, b| (&a.file, a.range.start, a.range.end).cmp(&(&b.file, b.range.start, b.range.end)));
    locs.dedup_by(|a, b| a.file == b.file && a.range == b.range);
    locs
}
