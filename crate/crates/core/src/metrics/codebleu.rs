//! CodeBLEU: equal-weight blend of BLEU, keyword-weighted BLEU, syntax
//! subtree match and dataflow edge match.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use tree_sitter::Node;

use super::bleu::{code_tokens, corpus_bleu, corpus_bleu_weighted, MAX_N};
use crate::error::{Error, Result};
use crate::lang::dataflow::{analyze, normalized_edges};
use crate::lang::lexer::is_keyword;
use crate::lang::syntax::{descendants, has_errors, named_children, parse, wrap_member};

pub const KEYWORD_WEIGHT: f64 = 5.0;
pub const SUBTREE_DEPTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeBleu {
    pub total: f64,
    pub bleu: f64,
    pub weighted_bleu: f64,
    pub syntax: f64,
    pub dataflow: f64,
}

/// Member root of a method text wrapped in a synthetic class, or `None`
/// when it does not parse.
fn method_tree(text: &str) -> Option<(tree_sitter::Tree, String)> {
    let src = wrap_member(text);
    let tree = parse(&src);
    (!has_errors(&tree)).then_some((tree, src))
}

fn member<'t>(tree: &'t tree_sitter::Tree) -> Node<'t> {
    descendants(tree.root_node())
        .into_iter()
        .find(|n| n.kind() == "class_body")
        .unwrap_or_else(|| tree.root_node())
}

/// Node-kind shape of the subtree at `node`, cut at `depth` levels.
fn shape(node: Node<'_>, depth: usize) -> String {
    let kids = named_children(node);
    if depth <= 1 || kids.is_empty() {
        return node.kind().to_string();
    }
    let inner: Vec<String> = kids.into_iter().map(|k| shape(k, depth - 1)).collect();
    format!("({} {})", node.kind(), inner.join(" "))
}

fn subtrees(root: Node<'_>) -> HashMap<String, usize> {
    let mut out = HashMap::new();
    for n in descendants(root).into_iter().skip(1).filter(|n| n.is_named()) {
        *out.entry(shape(n, SUBTREE_DEPTH)).or_default() += 1;
    }
    out
}

/// Fraction of reference items also present in the candidate (multiset).
fn multiset_recall<K: Eq + std::hash::Hash>(reference: &HashMap<K, usize>, candidate: &HashMap<K, usize>) -> f64 {
    let total: usize = reference.values().sum();
    if total == 0 {
        return 1.0;
    }
    let hit: usize = reference
        .iter()
        .map(|(k, &c)| c.min(candidate.get(k).copied().unwrap_or(0)))
        .sum();
    hit as f64 / total as f64
}

fn edge_counts(root: Node<'_>, src: &str) -> HashMap<(String, &'static str, String), usize> {
    let mut out = HashMap::new();
    for e in normalized_edges(&analyze(root, src)) {
        *out.entry(e).or_default() += 1;
    }
    out
}

pub fn code_bleu(candidate: &str, reference: &str) -> Result<CodeBleu> {
    let c = code_tokens(candidate);
    let r = code_tokens(reference);
    if r.is_empty() {
        return Err(Error::EmptyReference);
    }
    let pair = [(c, r)];
    let bleu = corpus_bleu(&pair, MAX_N)?;
    let weight = |t: &str| if is_keyword(t) { KEYWORD_WEIGHT } else { 1.0 };
    let weighted_bleu = corpus_bleu_weighted(&pair, MAX_N, &weight)?;

    let ref_tree = method_tree(reference).unwrap_or_else(|| {
        let src = wrap_member(reference);
        (parse(&src), src)
    });
    let (syntax, dataflow) = match method_tree(candidate) {
        Some((cand_tree, cand_src)) => {
            let (rt, rs) = (&ref_tree.0, ref_tree.1.as_str());
            (
                multiset_recall(&subtrees(member(rt)), &subtrees(member(&cand_tree))),
                multiset_recall(&edge_counts(member(rt), rs), &edge_counts(member(&cand_tree), &cand_src)),
            )
        }
        None => (0.0, 0.0),
    };
    let total = 0.25 * (bleu + weighted_bleu + syntax + dataflow);
    Ok(CodeBleu { total, bleu, weighted_bleu, syntax, dataflow })
}

#[cfg(test)]
mod tests {
    use super::*;

    const M: &str = "void t() {\n    int a = 1;\n    int b = a + 2;\n    use(b);\n}";

    #[test]
    fn identity_is_one() {
        let s = code_bleu(M, M).unwrap();
        assert!((s.total - 1.0).abs() < 1e-12, "{s:?}");
    }

    #[test]
    fn unparsable_candidate_loses_structure() {
        let s = code_bleu("void t( {", M).unwrap();
        assert_eq!((s.syntax, s.dataflow), (0.0, 0.0));
    }
}
