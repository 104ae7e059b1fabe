//! BLEU over the lines a repair changes relative to the obsolete test.

use std::collections::HashSet;

use super::bleu::{bleu, code_tokens, MAX_N};
use crate::error::Result;
use crate::snapshot::canonicalize_fragment;

/// Canonical lines of a method text; falls back to trimmed raw lines when
/// the text does not tokenize.
pub fn canonical_lines(text: &str) -> Vec<String> {
    let canon = canonicalize_fragment(text).unwrap_or_else(|_| text.to_string());
    canon
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect()
}

/// Lines of `text` absent from `original`, in order.
pub fn changed_lines(original: &str, text: &str) -> Vec<String> {
    let base: HashSet<String> = canonical_lines(original).into_iter().collect();
    canonical_lines(text).into_iter().filter(|l| !base.contains(l)).collect()
}

/// BLEU between the changed lines of the candidate and of the reference.
/// Both empty scores 1; exactly one empty scores 0.
pub fn diff_bleu(original: &str, candidate: &str, reference: &str) -> Result<f64> {
    let c = changed_lines(original, candidate);
    let r = changed_lines(original, reference);
    match (c.is_empty(), r.is_empty()) {
        (true, true) => Ok(1.0),
        (true, false) | (false, true) => Ok(0.0),
        (false, false) => bleu(&code_tokens(&c.join("\n")), &code_tokens(&r.join("\n")), MAX_N),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORIG: &str = "void t() {\n    A a = A.make();\n    run(a);\n}";
    const REF: &str = "void t() {\n    B a = B.make();\n    run(a);\n}";

    #[test]
    fn degenerate_cases() {
        assert_eq!(diff_bleu(ORIG, REF, REF).unwrap(), 1.0);
        assert_eq!(diff_bleu(ORIG, ORIG, REF).unwrap(), 0.0);
        assert_eq!(diff_bleu(ORIG, ORIG, ORIG).unwrap(), 1.0);
    }
}
