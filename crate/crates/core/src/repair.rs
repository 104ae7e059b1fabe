//! Candidate generation, extraction, validation and selection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::syntax::{descendants, has_errors, named_children, node_text, parse, wrap_member, wrapped_offset};
use crate::metrics::{code_bleu, code_tokens};
use crate::prompt::RepairPrompt;
use crate::provider::LlmProvider;

pub const DEFAULT_ATTEMPTS: usize = 3;
pub const DEFAULT_TEMPERATURE: f64 = 0.1;
pub const ALL_INVALID: &str = "all-invalid";

const METHOD_KINDS: [&str; 2] = ["method_declaration", "constructor_declaration"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub attempt: usize,
    pub raw: String,
    pub method: String,
    pub syntax_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairResult {
    pub candidates: Vec<Candidate>,
    pub selected: usize,
    pub selection_reason: String,
}

impl RepairResult {
    pub fn selected_method(&self) -> &str {
        &self.candidates[self.selected].method
    }
}

pub enum SelectionMode<'a> {
    /// Best CodeBLEU against the ground truth.
    Eval { ground_truth: &'a str },
    /// Valid candidates first, then the smallest token edit distance to the
    /// original test.
    Repair { original: &'a str },
}

/// Body of the first fenced code block, or the whole response.
fn fenced_block(raw: &str) -> &str {
    let Some(open) = raw.find("```") else { return raw };
    let after = &raw[open + 3..];
    let Some(nl) = after.find('\n') else { return raw };
    let body = &after[nl + 1..];
    match body.find("```") {
        Some(close) => &body[..close],
        None => body,
    }
}

/// The first method declaration in a response, preferring one named
/// `preferred`. Always a substring of `raw`.
pub fn extract_method<'r>(raw: &'r str, preferred: Option<&str>) -> &'r str {
    let block = fenced_block(raw);
    let src = wrap_member(block);
    let tree = parse(&src);
    let methods: Vec<_> = descendants(tree.root_node())
        .into_iter()
        .filter(|n| METHOD_KINDS.contains(&n.kind()))
        .collect();
    let named = preferred.and_then(|p| {
        methods
            .iter()
            .find(|m| m.child_by_field_name("name").is_some_and(|n| node_text(n, &src) == p))
    });
    let off = wrapped_offset();
    match named.or(methods.first()) {
        Some(m) if m.start_byte() >= off && m.end_byte() <= off + block.len() => {
            &block[m.start_byte() - off..m.end_byte() - off]
        }
        _ => block.trim(),
    }
}

/// True iff `text` parses as exactly one method or constructor declaration.
pub fn validate_syntax(text: &str) -> bool {
    let src = wrap_member(text);
    let tree = parse(&src);
    if has_errors(&tree) {
        return false;
    }
    let root = tree.root_node();
    let classes = named_children(root);
    let [class] = classes.as_slice() else { return false };
    let Some(body) = class.child_by_field_name("body") else { return false };
    let members: Vec<_> = named_children(body)
        .into_iter()
        .filter(|n| !n.kind().ends_with("comment"))
        .collect();
    matches!(members.as_slice(), [m] if METHOD_KINDS.contains(&m.kind()))
}

pub fn token_edit_distance(a: &str, b: &str) -> usize {
    strsim::generic_levenshtein(&code_tokens(a), &code_tokens(b))
}

/// Index of the selected candidate and the reason.
pub fn select_candidate(candidates: &[Candidate], mode: &SelectionMode<'_>) -> (usize, String) {
    let valid: Vec<usize> = (0..candidates.len()).filter(|&i| candidates[i].syntax_ok).collect();
    if valid.is_empty() {
        return (0, ALL_INVALID.to_string());
    }
    match mode {
        SelectionMode::Eval { ground_truth } => {
            let score = |i: usize| code_bleu(&candidates[i].method, ground_truth).map_or(0.0, |s| s.total);
            let mut best = valid[0];
            let mut best_score = score(best);
            for &i in &valid[1..] {
                let s = score(i);
                if s > best_score {
                    best = i;
                    best_score = s;
                }
            }
            (best, "highest CodeBLEU against the ground truth".to_string())
        }
        SelectionMode::Repair { original } => {
            let best = valid
                .iter()
                .copied()
                .min_by_key(|&i| (token_edit_distance(&candidates[i].method, original), i))
                .expect("valid is non-empty");
            (best, "syntactically valid with the smallest token edit distance to the original test".to_string())
        }
    }
}

pub fn candidate(attempt: usize, raw: String, preferred: Option<&str>) -> Candidate {
    let method = extract_method(&raw, preferred).to_string();
    let syntax_ok = validate_syntax(&method);
    Candidate { attempt, raw, method, syntax_ok }
}

/// Requests `attempts` independent completions and selects one.
pub fn repair(
    prompt: &RepairPrompt,
    provider: &dyn LlmProvider,
    attempts: usize,
    temperature: f64,
    preferred_name: Option<&str>,
    mode: &SelectionMode<'_>,
) -> Result<RepairResult> {
    let messages = prompt.messages();
    let mut candidates = Vec::new();
    for attempt in 0..attempts {
        let response = provider
            .complete(&messages, temperature, attempt)
            .or_else(|_| provider.complete(&messages, temperature, attempt));
        match response {
            Ok(raw) => candidates.push(candidate(attempt, raw, preferred_name)),
            Err(e) => tracing::warn!(attempt, error = %e, "repair attempt failed"),
        }
    }
    if candidates.is_empty() {
        return Err(Error::Provider("no repair candidates were produced".into()));
    }
    let (selected, selection_reason) = select_candidate(&candidates, mode);
    Ok(RepairResult { candidates, selected, selection_reason })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extraction_prefers_fenced_blocks() {
        let raw = "Here you go:\n```java\n@Test\npublic void t() {\n  run();\n}\n```\nDone.";
        let m = extract_method(raw, None);
        assert_eq!(m, "@Test\npublic void t() {\n  run();\n}");
        assert!(raw.contains(m));
        let plain = "void a() {}\nvoid b() { x(); }";
        assert_eq!(extract_method(plain, Some("b")), "void b() { x(); }");
    }

    #[test]
    fn validation() {
        assert!(validate_syntax("@Test void t() { int x = 1; }"));
        assert!(!validate_syntax("void t() { int x = 1; "));
        assert!(!validate_syntax("void a() {} void b() {}"));
        assert!(!validate_syntax("int x = 1;"));
    }
}
