//! Deterministic token-stream formatter.
//!
//! Output depends only on the token sequence, never on the original layout,
//! which makes formatting idempotent and keeps the token stream intact.
//! Layout rules: one statement per line, four-space indentation per block,
//! opening braces on the owning line, single spaces between tokens except
//! around member access, call parentheses, generics and unary operators.

use super::lexer::{Token, TokenKind};

pub const INDENT: &str = "    ";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formatted {
    pub text: String,
    /// Output `(line, column)` of each input token, index-aligned.
    pub positions: Vec<(usize, usize)>,
}

/// Formats a full token stream with line breaks and indentation.
pub fn format_tokens(tokens: &[Token<'_>]) -> Formatted {
    Formatter::new(tokens, false).run()
}

/// Joins tokens on a single line with the same spacing rules. Used for type
/// texts and condensed signatures.
pub fn join_inline(tokens: &[Token<'_>]) -> String {
    Formatter::new(tokens, true).run().text
}

struct Frame {
    block: bool,
    /// One entry per open parenthesis; `true` for `if`/`for`/`while` headers.
    parens: Vec<bool>,
    ternary: usize,
    after_do: bool,
}

struct Formatter<'t, 'a> {
    toks: &'t [Token<'a>],
    generic: Vec<bool>,
    glue_after: Vec<bool>,
    unary: Vec<bool>,
    inline: bool,
    out: String,
    line: usize,
    col: usize,
    line_empty: bool,
    line_first: Option<&'a str>,
    pending_space: bool,
    frames: Vec<Frame>,
    virtuals: Vec<usize>,
    positions: Vec<(usize, usize)>,
}

impl<'t, 'a> Formatter<'t, 'a> {
    fn new(toks: &'t [Token<'a>], inline: bool) -> Self {
        let (generic, glue_after) = mark_generics(toks);
        let unary = mark_unary(toks, &generic);
        Formatter {
            toks,
            generic,
            glue_after,
            unary,
            inline,
            out: String::new(),
            line: 0,
            col: 0,
            line_empty: true,
            line_first: None,
            pending_space: false,
            frames: vec![Frame {
                block: true,
                parens: Vec::new(),
                ternary: 0,
                after_do: false,
            }],
            virtuals: Vec::new(),
            positions: Vec::with_capacity(toks.len()),
        }
    }

    fn run(mut self) -> Formatted {
        for i in 0..self.toks.len() {
            self.step(i);
        }
        if !self.inline && !self.line_empty {
            self.out.push('\n');
        }
        Formatted {
            text: self.out,
            positions: self.positions,
        }
    }

    fn frame(&mut self) -> &mut Frame {
        self.frames.last_mut().expect("root frame is never popped")
    }

    fn depth(&self) -> usize {
        self.frames.len()
    }

    fn indent_level(&self) -> usize {
        let blocks = self.frames.iter().skip(1).filter(|f| f.block).count();
        blocks + self.virtuals.len()
    }

    fn newline(&mut self) {
        if self.inline {
            if !self.line_empty {
                self.pending_space = true;
            }
            return;
        }
        if !self.line_empty {
            self.out.push('\n');
            self.line += 1;
            self.col = 0;
            self.line_empty = true;
            self.line_first = None;
        }
    }

    fn write(&mut self, s: &str) {
        for c in s.chars() {
            if c == '\n' {
                self.line += 1;
                self.col = 0;
            } else {
                self.col += 1;
            }
        }
        self.out.push_str(s);
    }

    fn emit(&mut self, i: usize) {
        let tok = self.toks[i];
        if self.line_empty {
            if !self.inline {
                let indent = INDENT.repeat(self.indent_level());
                self.write(&indent);
            }
            self.line_first = Some(tok.text);
            self.line_empty = false;
        } else if self.pending_space || self.space_before(i) {
            self.write(" ");
        }
        self.pending_space = false;
        self.positions.push((self.line, self.col));
        self.write(tok.text);
    }

    fn end_statement(&mut self) {
        let d = self.depth();
        while self.virtuals.last().is_some_and(|&v| v >= d) {
            self.virtuals.pop();
        }
    }

    fn step(&mut self, i: usize) {
        let tok = self.toks[i];
        let prev = i.checked_sub(1).map(|j| self.toks[j]);
        let next = self.toks.get(i + 1).copied();
        let text = tok.text;
        let is_op = tok.kind == TokenKind::Op;

        if is_op && text == "}" {
            let closing = self.frames.len() > 1;
            let block = closing && self.frames.last().is_some_and(|f| f.block);
            let after_do = self.frames.last().is_some_and(|f| f.after_do);
            if block {
                self.newline();
            }
            if closing {
                self.frames.pop();
                let d = self.depth();
                while self.virtuals.last().is_some_and(|&v| v > d) {
                    self.virtuals.pop();
                }
            }
            self.emit(i);
            if block {
                let continues = next.is_some_and(|n| {
                    (n.kind == TokenKind::Op && matches!(n.text, ")" | "," | ";" | "." | "]"))
                        || n.is_keyword("else")
                        || n.is_keyword("catch")
                        || n.is_keyword("finally")
                        || (after_do && n.is_keyword("while"))
                });
                if !continues {
                    self.newline();
                    let follows_else = next.is_some_and(|n| n.is_keyword("else"));
                    if !follows_else {
                        self.end_statement();
                    }
                }
            }
            return;
        }

        self.emit(i);

        match (tok.kind, text) {
            (TokenKind::Op, "{") => {
                let in_inline = !self.frames.last().is_some_and(|f| f.block);
                let inline_init = prev.is_some_and(|p| {
                    p.kind == TokenKind::Op
                        && (matches!(p.text, "]" | "=" | "(")
                            || (in_inline && matches!(p.text, "," | "{")))
                });
                let after_do = prev.is_some_and(|p| p.is_keyword("do"));
                self.frames.push(Frame {
                    block: !inline_init,
                    parens: Vec::new(),
                    ternary: 0,
                    after_do,
                });
                if !inline_init {
                    self.newline();
                }
            }
            (TokenKind::Op, "(") => {
                let header = prev.is_some_and(|p| {
                    p.kind == TokenKind::Keyword && matches!(p.text, "if" | "for" | "while")
                });
                self.frame().parens.push(header);
            }
            (TokenKind::Op, ")") => {
                let header = self.frame().parens.pop().unwrap_or(false);
                let body_follows = next.is_some_and(|n| !n.is_op("{") && !n.is_op(";"));
                if header && self.frame().parens.is_empty() && body_follows {
                    self.newline();
                    let d = self.depth();
                    self.virtuals.push(d);
                }
            }
            (TokenKind::Op, ";") => {
                let in_parens = !self.frame().parens.is_empty();
                let block = self.frames.last().is_some_and(|f| f.block);
                if !in_parens && block {
                    self.newline();
                    self.end_statement();
                }
            }
            (TokenKind::Op, "?") if !self.generic[i] => {
                self.frame().ternary += 1;
            }
            (TokenKind::Op, ":") => {
                if self.is_line_colon() {
                    self.newline();
                } else if self.frame().ternary > 0 {
                    self.frame().ternary -= 1;
                }
            }
            (TokenKind::Keyword, "else") | (TokenKind::Keyword, "do") => {
                let body_follows = next.is_some_and(|n| !n.is_op("{") && !n.is_keyword("if"));
                if body_follows {
                    self.newline();
                    let d = self.depth();
                    self.virtuals.push(d);
                }
            }
            _ => {}
        }
    }

    /// `case X:`, `default:` and statement labels end a line.
    fn is_line_colon(&self) -> bool {
        let Some(frame) = self.frames.last() else {
            return false;
        };
        if frame.ternary > 0 || !frame.parens.is_empty() || !frame.block {
            return false;
        }
        !matches!(self.line_first, Some("assert"))
    }

    fn space_before(&self, i: usize) -> bool {
        let t = self.toks[i];
        let p = self.toks[i - 1];
        let op = |tok: &Token<'_>, s: &str| tok.is_op(s);

        if p.kind == TokenKind::Op && matches!(p.text, "(" | "[" | "." | "::" | "@" | "!" | "~") {
            return false;
        }
        if self.unary[i - 1] {
            return false;
        }
        if p.kind == TokenKind::Op && matches!(p.text, "++" | "--") && !is_postfix(self.toks, i - 1) {
            return false;
        }
        if t.kind == TokenKind::Op && matches!(t.text, ")" | "]" | ";" | "," | "." | "..." | "::") {
            return false;
        }
        if t.kind == TokenKind::Op && matches!(t.text, "++" | "--") && is_postfix(self.toks, i) {
            return false;
        }
        if op(&t, "(") {
            return !(p.is_ident()
                || (op(&p, ">") && self.generic[i - 1])
                || p.is_keyword("this")
                || p.is_keyword("super"));
        }
        if op(&t, "[") {
            return false;
        }
        if op(&t, "}") {
            return false;
        }
        if op(&p, "{") && !self.frames.last().is_some_and(|f| f.block) {
            return false;
        }
        if op(&t, "{") && op(&p, "{") {
            return false;
        }
        if op(&t, "<") && self.generic[i] {
            return p.kind == TokenKind::Keyword;
        }
        if op(&p, "<") && self.generic[i - 1] {
            return false;
        }
        if op(&t, ">") && self.generic[i] {
            return false;
        }
        if op(&p, ">") && self.generic[i - 1] {
            return !self.glue_after[i - 1];
        }
        if op(&p, ">") && (op(&t, ">") || op(&t, ">=")) && p.end == t.start {
            return false;
        }
        if op(&t, ":") && self.is_line_colon() {
            return false;
        }
        true
    }
}

fn is_postfix(toks: &[Token<'_>], i: usize) -> bool {
    match i.checked_sub(1).map(|j| toks[j]) {
        Some(p) => {
            p.kind == TokenKind::Ident
                || p.kind == TokenKind::Literal
                || p.is_op(")")
                || p.is_op("]")
                || p.is_keyword("this")
        }
        None => false,
    }
}

fn mark_unary(toks: &[Token<'_>], generic: &[bool]) -> Vec<bool> {
    toks.iter()
        .enumerate()
        .map(|(i, t)| {
            if t.kind != TokenKind::Op || !matches!(t.text, "+" | "-") {
                return false;
            }
            match i.checked_sub(1).map(|j| toks[j]) {
                None => true,
                Some(p) => match p.kind {
                    TokenKind::Ident | TokenKind::Literal => false,
                    TokenKind::Keyword => !matches!(p.text, "this" | "super"),
                    TokenKind::Op => match p.text {
                        ")" | "]" => false,
                        "++" | "--" => !is_postfix(toks, i - 1),
                        ">" => !generic[i - 1],
                        _ => true,
                    },
                    TokenKind::Comment => true,
                },
            }
        })
        .collect()
}

const GENERIC_KEYWORDS: &[&str] = &[
    "extends", "super", "boolean", "byte", "char", "short", "int", "long", "float", "double",
];

/// Marks `<`, `>` and wildcard `?` tokens that belong to type-argument or
/// type-parameter lists. The second vector flags closing `>` tokens of
/// explicit generic method calls (`Foo.<T>bar()`), which glue to the name.
fn mark_generics(toks: &[Token<'_>]) -> (Vec<bool>, Vec<bool>) {
    let mut generic = vec![false; toks.len()];
    let mut glue_after = vec![false; toks.len()];
    let mut i = 0;
    while i < toks.len() {
        if !toks[i].is_op("<") || generic[i] {
            i += 1;
            continue;
        }
        let prev_ok = match i.checked_sub(1).map(|j| toks[j]) {
            None => true,
            Some(p) => {
                p.kind == TokenKind::Ident
                    || p.kind == TokenKind::Keyword
                    || (p.kind == TokenKind::Op && matches!(p.text, "." | "," | "{" | "}" | ";" | "("))
            }
        };
        if !prev_ok {
            i += 1;
            continue;
        }
        let mut depth = 0usize;
        let mut end = None;
        for (j, t) in toks.iter().enumerate().skip(i).take(256) {
            let ok = match t.kind {
                TokenKind::Ident => true,
                TokenKind::Keyword => GENERIC_KEYWORDS.contains(&t.text),
                TokenKind::Op => matches!(t.text, "<" | ">" | "." | "," | "?" | "&" | "[" | "]" | "@"),
                _ => false,
            };
            if !ok {
                break;
            }
            if t.is_op("<") {
                depth += 1;
            } else if t.is_op(">") {
                depth -= 1;
                if depth == 0 {
                    end = Some(j);
                    break;
                }
            }
        }
        if let Some(end) = end {
            for j in i..=end {
                if matches!(toks[j].text, "<" | ">" | "?") && toks[j].kind == TokenKind::Op {
                    generic[j] = true;
                }
            }
            if i > 0 && toks[i - 1].is_op(".") {
                glue_after[end] = true;
            }
            i = end + 1;
        } else {
            i += 1;
        }
    }
    (generic, glue_after)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::lexer::lex;

    fn fmt(src: &str) -> String {
        format_tokens(&lex(src).unwrap()).text
    }

    fn inline(src: &str) -> String {
        join_inline(&lex(src).unwrap())
    }

    #[test]
    fn one_statement_per_line() {
        assert_eq!(fmt("int a=1; int b=2;"), "int a = 1;\nint b = 2;\n");
    }

    #[test]
    fn blocks_and_braces() {
        let src = "class A{void f(){if(x){y();}else{z();}}}";
        assert_eq!(
            fmt(src),
            "class A {\n    void f() {\n        if (x) {\n            y();\n        } else {\n            z();\n        }\n    }\n}\n"
        );
    }

    #[test]
    fn unbraced_bodies_get_their_own_line() {
        assert_eq!(
            fmt("if (a) return; else b(); c();"),
            "if (a)\n    return;\nelse\n    b();\nc();\n"
        );
        assert_eq!(fmt("for(int i=0;i<n;i++) s+=i;"), "for (int i = 0; i < n; i++)\n    s += i;\n");
        assert_eq!(fmt("do x(); while (c);"), "do\n    x();\nwhile (c);\n");
    }

    #[test]
    fn generics_are_tight() {
        assert_eq!(inline("Map < String , List<Integer> >"), "Map<String, List<Integer>>");
        assert_eq!(inline("List<? extends Foo> x = new ArrayList<>()"), "List<? extends Foo> x = new ArrayList<>()");
        assert_eq!(inline("public static <T> T id(T t)"), "public static <T> T id(T t)");
        assert_eq!(inline("Collections.<String>emptyList()"), "Collections.<String>emptyList()");
        assert_eq!(inline("a < b && c > d"), "a < b && c > d");
        assert_eq!(inline("x = a >> 2 >>> b"), "x = a >> 2 >>> b");
    }

    #[test]
    fn unary_and_postfix() {
        assert_eq!(inline("x = -1 + - y; i ++; -- j; return -x;"), "x = -1 + -y; i++; --j; return -x;");
        assert_eq!(inline("a - b"), "a - b");
        assert_eq!(inline("if (!ok) f(i++)"), "if (!ok) f(i++)");
    }

    #[test]
    fn array_initializers_stay_inline() {
        assert_eq!(fmt("int[] a = {1, 2, {3}};"), "int[] a = {1, 2, {3}};\n");
        assert_eq!(fmt("@A({1,2}) int x;"), "@A({1, 2}) int x;\n");
    }

    #[test]
    fn lambdas_and_anonymous_classes() {
        assert_eq!(
            fmt("run(() -> { a(); b(); });"),
            "run(() -> {\n    a();\n    b();\n});\n"
        );
        assert_eq!(
            fmt("x = new R() { public void run() { go(); } };"),
            "x = new R() {\n    public void run() {\n        go();\n    }\n};\n"
        );
    }

    #[test]
    fn switch_labels_and_ternaries() {
        assert_eq!(
            fmt("switch (k) { case 1: a(); break; default: b(); }"),
            "switch (k) {\n    case 1:\n    a();\n    break;\n    default:\n    b();\n}\n"
        );
        assert_eq!(fmt("x = c ? a : b;"), "x = c ? a : b;\n");
        assert_eq!(fmt("for (String s : xs) f(s);"), "for (String s : xs)\n    f(s);\n");
        assert_eq!(fmt("assert ok : \"m\";"), "assert ok : \"m\";\n");
    }

    #[test]
    fn idempotent_on_samples() {
        for src in [
            "class A{void f(){if(x){y();}else{z();}}}",
            "if (a) return; else b(); c();",
            "Map<String,List<Integer>> m=new HashMap<>(); m.put(\"k\",List.of(1,2));",
            "switch (k) { case 1: a(); break; default: b(); }",
            "x = new R() { public void run() { go(); } };",
        ] {
            let once = fmt(src);
            assert_eq!(fmt(&once), once, "not idempotent for {src}");
        }
    }

    #[test]
    fn positions_point_at_tokens() {
        let toks = lex("class A { int x=1; }").unwrap();
        let f = format_tokens(&toks);
        let lines: Vec<&str> = f.text.lines().collect();
        for (t, &(l, c)) in toks.iter().zip(&f.positions) {
            let got: String = lines[l].chars().skip(c).take(t.char_len()).collect();
            assert_eq!(got, t.text);
        }
    }
}
