//! Comment-aware Java tokenizer.
//!
//! Tokens keep byte offsets plus 0-based line / character columns so that
//! callers can move between editor positions and token indices.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Ident,
    Keyword,
    Literal,
    Op,
    Comment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    /// Byte offset of the first byte.
    pub start: usize,
    /// Byte offset one past the last byte.
    pub end: usize,
    pub line: usize,
    /// Character (not byte) column.
    pub col: usize,
}

impl Token<'_> {
    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }

    pub fn is_op(&self, op: &str) -> bool {
        self.kind == TokenKind::Op && self.text == op
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == kw
    }

    /// Number of characters in the token text.
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

pub const KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
];

const LITERAL_WORDS: &[&str] = &["true", "false", "null"];

pub const PRIMITIVE_TYPES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
];

// Longest first so the greedy scan picks multi-char operators. `>>`, `>>>`
// and `>>=` are deliberately absent: `>` is always lexed on its own so that
// nested generic closers stay separate tokens.
const OPERATORS: &[&str] = &[
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=", "*=",
    "/=", "&=", "|=", "^=", "%=", "<<", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "=",
    ">", "<", "!", "~", "?", ":", "+", "-", "*", "/", "&", "|", "^", "%",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    lossy: bool,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 0;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s)
    }

    fn error(&self, line: usize, col: usize, msg: &str) -> Error {
        Error::Parse(format!("{}:{}: {}", line + 1, col + 1, msg))
    }

    fn next_token(&mut self) -> Result<Option<Token<'a>>> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '\u{feff}' {
                self.bump();
            } else {
                break;
            }
        }
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let (start, line, col) = (self.pos, self.line, self.col);
        let kind = if self.starts_with("//") {
            while let Some(c) = self.peek() {
                if c == '\n' {
                    break;
                }
                self.bump();
            }
            TokenKind::Comment
        } else if self.starts_with("/*") {
            self.bump();
            self.bump();
            loop {
                if self.starts_with("*/") {
                    self.bump();
                    self.bump();
                    break;
                }
                if self.bump().is_none() {
                    if self.lossy {
                        break;
                    }
                    return Err(self.error(line, col, "unterminated block comment"));
                }
            }
            TokenKind::Comment
        } else if c == '"' || c == '\'' {
            self.lex_quoted(line, col)?;
            TokenKind::Literal
        } else if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
            self.lex_number();
            TokenKind::Literal
        } else if is_ident_start(c) {
            while self.peek().is_some_and(is_ident_part) {
                self.bump();
            }
            let word = &self.src[start..self.pos];
            if LITERAL_WORDS.contains(&word) {
                TokenKind::Literal
            } else if is_keyword(word) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            }
        } else if let Some(op) = OPERATORS.iter().find(|op| self.starts_with(op)) {
            for _ in 0..op.len() {
                self.bump();
            }
            TokenKind::Op
        } else if self.lossy {
            self.bump();
            TokenKind::Op
        } else {
            return Err(self.error(line, col, &format!("unexpected character {c:?}")));
        };
        Ok(Some(Token {
            kind,
            text: &self.src[start..self.pos],
            start,
            end: self.pos,
            line,
            col,
        }))
    }

    fn lex_quoted(&mut self, line: usize, col: usize) -> Result<()> {
        if self.starts_with("\"\"\"") {
            for _ in 0..3 {
                self.bump();
            }
            loop {
                if self.starts_with("\"\"\"") {
                    for _ in 0..3 {
                        self.bump();
                    }
                    return Ok(());
                }
                match self.bump() {
                    Some('\\') => {
                        self.bump();
                    }
                    Some(_) => {}
                    None if self.lossy => return Ok(()),
                    None => return Err(self.error(line, col, "unterminated text block")),
                }
            }
        }
        let quote = self.bump().expect("caller checked quote");
        loop {
            match self.peek() {
                Some('\\') => {
                    self.bump();
                    self.bump();
                }
                Some(c) if c == quote => {
                    self.bump();
                    return Ok(());
                }
                Some('\n') | None => {
                    if self.lossy {
                        return Ok(());
                    }
                    return Err(self.error(line, col, "unterminated literal"));
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    fn lex_number(&mut self) {
        let hex = self.starts_with("0x") || self.starts_with("0X");
        while let Some(c) = self.peek() {
            if c == '.' {
                // `1.`, `1.5` and `1.e3` continue the literal; `1..` and
                // `1.foo` do not.
                match self.peek_at(1) {
                    Some(d) if d.is_ascii_digit() => {}
                    Some('e' | 'E' | 'f' | 'F' | 'd' | 'D') => {}
                    Some(d) if is_ident_part(d) || d == '.' => break,
                    _ => {}
                }
                self.bump();
            } else if c.is_ascii_alphanumeric() || c == '_' {
                let exp = if hex { matches!(c, 'p' | 'P') } else { matches!(c, 'e' | 'E') };
                self.bump();
                if exp && matches!(self.peek(), Some('+' | '-')) {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

fn run(src: &str, lossy: bool) -> Result<Vec<Token<'_>>> {
    let mut lexer = Lexer {
        src,
        pos: 0,
        line: 0,
        col: 0,
        lossy,
    };
    let mut out = Vec::new();
    while let Some(tok) = lexer.next_token()? {
        out.push(tok);
    }
    Ok(out)
}

/// Tokenizes `src`, comments included.
pub fn lex_with_comments(src: &str) -> Result<Vec<Token<'_>>> {
    run(src, false)
}

/// Tokenizes `src` and drops comments.
pub fn lex(src: &str) -> Result<Vec<Token<'_>>> {
    Ok(run(src, false)?
        .into_iter()
        .filter(|t| t.kind != TokenKind::Comment)
        .collect())
}

/// Never fails: unterminated literals run to end of line and unknown
/// characters become single-character operator tokens. Used on free-form
/// text such as model responses.
pub fn lex_lossy(src: &str) -> Vec<Token<'_>> {
    run(src, true)
        .unwrap_or_default()
        .into_iter()
        .filter(|t| t.kind != TokenKind::Comment)
        .collect()
}

/// Byte ranges of every comment in `src`.
pub fn comment_spans(src: &str) -> Result<Vec<(usize, usize)>> {
    Ok(run(src, false)?
        .into_iter()
        .filter(|t| t.kind == TokenKind::Comment)
        .map(|t| (t.start, t.end))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<&str> {
        lex(src).unwrap().into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn splits_generics_and_shifts_into_single_angles() {
        assert_eq!(
            texts("Map<String, List<Integer>> m = a >> 2;"),
            vec!["Map", "<", "String", ",", "List", "<", "Integer", ">", ">", "m", "=", "a", ">", ">", "2", ";"]
        );
    }

    #[test]
    fn comments_are_dropped_but_strings_kept() {
        let src = "int a = 1; // trailing\n/* block */ String s = \"// not a comment\";";
        assert_eq!(
            texts(src),
            vec!["int", "a", "=", "1", ";", "String", "s", "=", "\"// not a comment\"", ";"]
        );
        assert_eq!(comment_spans(src).unwrap().len(), 2);
    }

    #[test]
    fn numbers_and_member_access() {
        assert_eq!(texts("x = 1.5e-3f + list.get(1).y;"), vec![
            "x", "=", "1.5e-3f", "+", "list", ".", "get", "(", "1", ")", ".", "y", ";"
        ]);
        assert_eq!(texts("long v = 0x1F_FFL; double d = .5;"), vec![
            "long", "v", "=", "0x1F_FFL", ";", "double", "d", "=", ".5", ";"
        ]);
    }

    #[test]
    fn positions_are_character_columns() {
        let toks = lex("// é\nString é = \"ü\"; x").unwrap();
        let x = toks.last().unwrap();
        assert_eq!((x.line, x.col), (1, 16));
        assert_eq!(toks[1].col, 7);
    }

    #[test]
    fn unterminated_literal_is_an_error_unless_lossy() {
        assert!(lex("String s = \"abc;\n").is_err());
        assert!(lex("/* open").is_err());
        assert_eq!(lex_lossy("don't # panic").len(), 2);
    }

    #[test]
    fn text_blocks_are_one_token() {
        let toks = lex("String s = \"\"\"\n  hi \"quoted\"\n  \"\"\";").unwrap();
        assert_eq!(toks.len(), 5);
        assert!(toks[3].text.starts_with("\"\"\""));
    }
}
