//! Canonical source form: comments removed, one statement per line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::format::format_tokens;
use crate::lang::lexer::{lex, TokenKind};
use crate::lang::syntax::{has_errors, parse};

/// 0-based line and character column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CursorPos {
    pub line: usize,
    pub column: usize,
}

impl CursorPos {
    pub fn new(line: usize, column: usize) -> Self {
        CursorPos { line, column }
    }
}

fn check_parses(src: &str) -> Result<()> {
    if has_errors(&parse(src)) {
        return Err(Error::Parse("source does not parse as a Java compilation unit".into()));
    }
    Ok(())
}

/// Canonicalizes a whole compilation unit.
pub fn canonicalize(src: &str) -> Result<String> {
    check_parses(src)?;
    canonicalize_fragment(src)
}

/// Canonicalizes a fragment (a method, a statement list) without requiring it
/// to parse as a compilation unit.
pub fn canonicalize_fragment(src: &str) -> Result<String> {
    Ok(format_tokens(&lex(src)?).text)
}

/// Canonicalizes `src` and maps `pos`, which must lie on an identifier, to
/// the same token in the output.
pub fn canonicalize_with_cursor(src: &str, pos: CursorPos) -> Result<(String, CursorPos)> {
    check_parses(src)?;
    canonicalize_fragment_with_cursor(src, pos)
}

pub fn canonicalize_fragment_with_cursor(src: &str, pos: CursorPos) -> Result<(String, CursorPos)> {
    let tokens = lex(src)?;
    let idx = tokens
        .iter()
        .position(|t| t.line == pos.line && t.col <= pos.column && pos.column < t.col + t.char_len())
        .filter(|&i| tokens[i].kind == TokenKind::Ident)
        .ok_or(Error::CursorNotOnIdentifier {
            line: pos.line,
            column: pos.column,
        })?;
    let formatted = format_tokens(&tokens);
    let (line, column) = formatted.positions[idx];
    Ok((formatted.text, CursorPos { line, column }))
}
