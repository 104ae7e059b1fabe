//! Textual-match metrics for repaired tests.

mod bleu;
mod codebleu;
mod diffbleu;

pub use bleu::{bleu, code_tokens, corpus_bleu, corpus_bleu_weighted, MAX_N};
pub use codebleu::{code_bleu, CodeBleu, KEYWORD_WEIGHT, SUBTREE_DEPTH};
pub use diffbleu::{canonical_lines, changed_lines, diff_bleu};

/// Canonical-text equality of two method texts.
pub fn exact_match(candidate: &str, reference: &str) -> bool {
    canonical_lines(candidate) == canonical_lines(reference)
}

/// Whitespace-split token count.
pub fn approx_tokens(text: &str) -> usize {
    text.split_whitespace().count()
}
