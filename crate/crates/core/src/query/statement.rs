//! Statement queries: a natural-language summary of the signature change and
//! the test statements it invalidates.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use tree_sitter::Node;

use super::{ParsedTest, QuerySource};
use crate::lang::lexer::{is_keyword, lex_lossy};
use crate::lang::syntax::{descendants, node_text, normalize_text};
use crate::provider::{ChatMessage, LlmProvider};
use crate::signature::{unmatched_indices, FocalChange, MethodSignature};

pub const NO_CHANGE_ANALYSIS: &str = "no signature change detected";
pub const MAX_STATEMENTS: usize = 12;
const QUERY_TEMPERATURE: f64 = 0.1;

const ROLE: &str = "You are an expert in Java software evolution who explains how method signature changes break unit tests.";
const STEP1: &str = "Summarize in one sentence how the signature of the focal method changed.";
const STEP2: &str =
    "List the statements of the test that are obsolete because of this change, one statement per line, copied verbatim.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exemplar {
    pub focal_diff: String,
    pub test: String,
    pub analysis: String,
    pub statements: String,
}

pub fn few_shot_exemplars() -> &'static [Exemplar] {
    static EXEMPLARS: OnceLock<Vec<Exemplar>> = OnceLock::new();
    EXEMPLARS.get_or_init(|| {
        serde_json::from_str(include_str!("../../assets/few_shot.json")).expect("bundled exemplars are valid JSON")
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementQueries {
    pub analysis: String,
    pub statements: String,
    pub source: QuerySource,
}

fn ordinal(i: usize) -> String {
    const WORDS: [&str; 10] = [
        "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth",
    ];
    WORDS.get(i).map_or_else(|| format!("{}th", i + 1), |w| w.to_string())
}

fn set_text(s: &BTreeSet<String>) -> String {
    s.iter().cloned().collect::<Vec<_>>().join(" ")
}

/// Fixed-template summary of the signature change.
pub fn analysis_template(orig: &MethodSignature, upd: &MethodSignature) -> String {
    let name = &orig.name;
    let mut out = Vec::new();
    let removed = unmatched_indices(&orig.params, &upd.params);
    let added = unmatched_indices(&upd.params, &orig.params);
    if removed.len() == added.len() {
        for (&o, &n) in removed.iter().zip(&added) {
            out.push(format!(
                "The method {name}() has been updated to accept an object of type '{}' instead of '{}' as its {} parameter.",
                upd.params[n].type_text,
                orig.params[o].type_text,
                ordinal(n)
            ));
        }
    } else {
        for &o in &removed {
            out.push(format!(
                "The method {name}() no longer accepts its {} parameter of type '{}'.",
                ordinal(o),
                orig.params[o].type_text
            ));
        }
        for &n in &added {
            out.push(format!(
                "The method {name}() now accepts an object of type '{}' as its {} parameter.",
                upd.params[n].type_text,
                ordinal(n)
            ));
        }
    }
    if orig.return_type != upd.return_type {
        out.push(format!(
            "The method {name}() has been updated to return '{}' instead of '{}'.",
            upd.return_type, orig.return_type
        ));
    }
    if orig.name != upd.name {
        out.push(format!("The method {name}() has been renamed to {}().", upd.name));
    }
    if orig.modifiers != upd.modifiers {
        out.push(format!(
            "The modifiers of method {name}() changed from '{}' to '{}'.",
            set_text(&orig.modifiers),
            set_text(&upd.modifiers)
        ));
    }
    if orig.throws != upd.throws {
        out.push(format!(
            "The exceptions declared by method {name}() changed from '{}' to '{}'.",
            set_text(&orig.throws),
            set_text(&upd.throws)
        ));
    }
    if out.is_empty() {
        NO_CHANGE_ANALYSIS.to_string()
    } else {
        out.join(" ")
    }
}

fn is_simple_statement(node: Node<'_>) -> bool {
    matches!(
        node.kind(),
        "local_variable_declaration"
            | "expression_statement"
            | "return_statement"
            | "throw_statement"
            | "assert_statement"
            | "yield_statement"
            | "explicit_constructor_invocation"
    )
}

/// Canonical test statements naming the focal method or an obsolete
/// parameter's name or type, capped at [`MAX_STATEMENTS`] nearest to the
/// focal invocation.
pub fn fallback_statements(focal: &FocalChange, test: &str) -> Vec<String> {
    let mut names: BTreeSet<String> = BTreeSet::from([focal.original.name.clone()]);
    if let Ok(obsolete) = focal.obsolete_params() {
        for p in obsolete {
            names.insert(p.name);
            for t in lex_lossy(&p.type_text) {
                if t.is_ident() && !is_keyword(t.text) {
                    names.insert(t.text.to_string());
                }
            }
        }
    }
    let parsed = ParsedTest::new(test);
    let src = parsed.src.as_str();
    let stmts: Vec<(String, bool)> = descendants(parsed.method())
        .into_iter()
        .filter(|n| is_simple_statement(*n))
        .map(|n| {
            let text = normalize_text(node_text(n, src));
            let calls_focal = lex_lossy(&text).iter().any(|t| t.is_ident() && t.text == focal.original.name);
            (text, calls_focal)
        })
        .collect();
    let mut keep: Vec<usize> = (0..stmts.len())
        .filter(|&i| lex_lossy(&stmts[i].0).iter().any(|t| t.is_ident() && names.contains(t.text)))
        .collect();
    if keep.len() > MAX_STATEMENTS {
        let anchors: Vec<usize> = (0..stmts.len()).filter(|&i| stmts[i].1).collect();
        let dist = |i: usize| anchors.iter().map(|&a| a.abs_diff(i)).min().unwrap_or(i);
        keep.sort_by_key(|&i| (dist(i), i));
        keep.truncate(MAX_STATEMENTS);
        keep.sort_unstable();
    }
    keep.into_iter().map(|i| stmts[i].0.clone()).collect()
}

/// Messages for the two prompting steps. `analysis` is `None` for the first
/// step.
pub fn statement_messages(focal: &FocalChange, test: &str, analysis: Option<&str>) -> Vec<ChatMessage> {
    let diff = focal.focal_diff(3).render_unified();
    let mut user = String::new();
    match analysis {
        None => {
            user.push_str(STEP1);
            user.push_str("\n\n");
            for ex in few_shot_exemplars() {
                user.push_str(&format!("Focal method diff:\n{}\nSummary: {}\n\n", ex.focal_diff, ex.analysis));
            }
            user.push_str(&format!("Focal method diff:\n{diff}\nSummary:"));
        }
        Some(a) => {
            user.push_str(STEP2);
            user.push_str("\n\n");
            for ex in few_shot_exemplars() {
                user.push_str(&format!(
                    "Focal method diff:\n{}\nSummary: {}\nTest:\n{}\nObsolete statements:\n{}\n\n",
                    ex.focal_diff, ex.analysis, ex.test, ex.statements
                ));
            }
            user.push_str(&format!(
                "Focal method diff:\n{diff}\nSummary: {a}\nTest:\n{}\nObsolete statements:",
                test.trim_end()
            ));
        }
    }
    vec![ChatMessage::system(ROLE), ChatMessage::user(user)]
}

fn via_provider(focal: &FocalChange, test: &str, provider: &dyn LlmProvider) -> crate::Result<StatementQueries> {
    let analysis = provider
        .complete(&statement_messages(focal, test, None), QUERY_TEMPERATURE, 0)?
        .trim()
        .to_string();
    let listed = provider.complete(&statement_messages(focal, test, Some(&analysis)), QUERY_TEMPERATURE, 0)?;
    let statements = listed
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with("```"))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(StatementQueries { analysis, statements, source: QuerySource::Provider })
}

/// Provider-backed queries, falling back to the template and the
/// token-containment rule when the provider is absent or fails.
pub fn build_statement_queries(focal: &FocalChange, test: &str, provider: Option<&dyn LlmProvider>) -> StatementQueries {
    if let Some(p) = provider {
        match via_provider(focal, test, p) {
            Ok(q) if !q.analysis.is_empty() => return q,
            Ok(_) => tracing::warn!("provider returned an empty analysis, using fallback queries"),
            Err(e) => tracing::info!(error = %e, "statement query extraction failed, using fallback queries"),
        }
    }
    StatementQueries {
        analysis: analysis_template(&focal.original, &focal.updated),
        statements: fallback_statements(focal, test).join(" "),
        source: QuerySource::Fallback,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::ParameterDecl;

    fn sig(name: &str, params: &[&str], ret: &str) -> MethodSignature {
        MethodSignature {
            name: name.into(),
            params: params
                .iter()
                .map(|t| ParameterDecl { type_text: t.to_string(), name: "p".into() })
                .collect(),
            return_type: ret.into(),
            is_constructor: false,
            modifiers: BTreeSet::new(),
            throws: BTreeSet::new(),
        }
    }

    #[test]
    fn template_sentences() {
        let a = sig("mount", &["AlluxioURI", "AlluxioURI", "MountOptions"], "void");
        let b = sig("mount", &["AlluxioURI", "AlluxioURI", "MountPOptions"], "void");
        assert_eq!(
            analysis_template(&a, &b),
            "The method mount() has been updated to accept an object of type 'MountPOptions' instead of 'MountOptions' as its third parameter."
        );
        assert_eq!(analysis_template(&a, &a), NO_CHANGE_ANALYSIS);
        let c = sig("mount", &["AlluxioURI", "AlluxioURI", "MountOptions"], "boolean");
        assert_eq!(
            analysis_template(&a, &c),
            "The method mount() has been updated to return 'boolean' instead of 'void'."
        );
    }

    #[test]
    fn exemplars_load() {
        assert_eq!(few_shot_exemplars().len(), 2);
    }
}
