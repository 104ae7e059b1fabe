//! Method signatures, their diff, and syntactic breaking change kinds.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::syntax::{has_errors, parse, FileDecls, MethodDecl};
use crate::snapshot::{canonicalize_fragment, unified_diff, DiffText, RepoSnapshot, Version};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParameterDecl {
    pub type_text: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSignature {
    pub name: String,
    pub params: Vec<ParameterDecl>,
    /// Empty for constructors.
    pub return_type: String,
    pub is_constructor: bool,
    pub modifiers: BTreeSet<String>,
    pub throws: BTreeSet<String>,
}

impl MethodSignature {
    pub fn from_decl(decl: &MethodDecl) -> Self {
        MethodSignature {
            name: decl.name.clone(),
            params: decl
                .params
                .iter()
                .map(|p| ParameterDecl {
                    type_text: p.type_ref.text.clone(),
                    name: p.name.clone(),
                })
                .collect(),
            return_type: decl.return_type.as_ref().map(|t| t.text.clone()).unwrap_or_default(),
            is_constructor: decl.is_constructor(),
            modifiers: decl.modifiers.keywords.clone(),
            throws: decl.throws.iter().cloned().collect(),
        }
    }

    pub fn param_types(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.type_text.as_str()).collect()
    }

    /// Signature tuple equality; parameter names do not take part.
    pub fn same_signature(&self, other: &Self) -> bool {
        self.name == other.name
            && self.param_types() == other.param_types()
            && self.return_type == other.return_type
            && self.modifiers == other.modifiers
            && self.throws == other.throws
    }

    pub fn is_varargs(&self) -> bool {
        self.params.last().is_some_and(|p| p.type_text.ends_with("..."))
    }

    /// Renders a header such as `public void f(int a) throws E`.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = self.modifiers.iter().cloned().collect();
        if !self.is_constructor {
            parts.push(self.return_type.clone());
        }
        let params: Vec<String> = self.params.iter().map(|p| format!("{} {}", p.type_text, p.name)).collect();
        parts.push(format!("{}({})", self.name, params.join(", ")));
        if !self.throws.is_empty() {
            parts.push(format!("throws {}", self.throws.iter().cloned().collect::<Vec<_>>().join(", ")));
        }
        parts.join(" ")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SynBCKind {
    pub param: bool,
    pub ret: bool,
    pub norm: bool,
}

impl SynBCKind {
    pub fn is_empty(&self) -> bool {
        !(self.param || self.ret || self.norm)
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.param {
            out.push("ParamSynBC");
        }
        if self.ret {
            out.push("RetSynBC");
        }
        if self.norm {
            out.push("NormSynBC");
        }
        out
    }
}

impl fmt::Display for SynBCKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&self.labels().join("+"))
        }
    }
}

pub fn diff_signatures(orig: &MethodSignature, upd: &MethodSignature) -> SynBCKind {
    let param = orig.param_types() != upd.param_types();
    let ret = orig.return_type != upd.return_type;
    let norm = !param && !ret && !orig.same_signature(upd);
    SynBCKind { param, ret, norm }
}

/// Original parameters left unmatched by the longest common subsequence of
/// parameter types. Fails unless the parameter type lists differ.
pub fn get_obsolete_params(orig: &MethodSignature, upd: &MethodSignature) -> Result<Vec<ParameterDecl>> {
    if !diff_signatures(orig, upd).param {
        return Err(Error::NotParamChange);
    }
    Ok(unmatched_params(&orig.params, &upd.params))
}

/// LCS alignment over type texts; among maximal alignments the one matching
/// the earliest original positions is used. Equal lists yield nothing.
pub fn unmatched_params(orig: &[ParameterDecl], upd: &[ParameterDecl]) -> Vec<ParameterDecl> {
    unmatched_indices(orig, upd).into_iter().map(|i| orig[i].clone()).collect()
}

/// Positions in `orig` left unmatched by [`unmatched_params`].
pub fn unmatched_indices(orig: &[ParameterDecl], upd: &[ParameterDecl]) -> Vec<usize> {
    let a: Vec<&str> = orig.iter().map(|p| p.type_text.as_str()).collect();
    let b: Vec<&str> = upd.iter().map(|p| p.type_text.as_str()).collect();
    let (n, m) = (a.len(), b.len());
    // lcs[i][j] = LCS length of a[i..] and b[j..].
    let mut lcs = vec![vec![0usize; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            lcs[i][j] = if a[i] == b[j] {
                1 + lcs[i + 1][j + 1]
            } else {
                lcs[i + 1][j].max(lcs[i][j + 1])
            };
        }
    }
    let mut matched = vec![false; n];
    let (mut i, mut j) = (0, 0);
    let mut remaining = lcs[0][0];
    while remaining > 0 {
        let (ni, nj) = (i..n)
            .find_map(|x| {
                (j..m)
                    .find(|&y| a[x] == b[y] && 1 + lcs[x + 1][y + 1] == remaining)
                    .map(|y| (x, y))
            })
            .expect("an optimal continuation exists while LCS length remains");
        matched[ni] = true;
        i = ni + 1;
        j = nj + 1;
        remaining -= 1;
    }
    (0..n).filter(|&k| !matched[k]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodLocator {
    pub file: String,
    /// Enclosing class names, outermost first.
    pub classes: Vec<String>,
    pub method: String,
    /// Parameter type texts for overload disambiguation; `None` matches any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_types: Option<Vec<String>>,
    pub version: Version,
}

impl fmt::Display for MethodLocator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}#{}", self.version, self.file, self.classes.join("."), self.method)?;
        if let Some(p) = &self.param_types {
            write!(f, "({})", p.join(", "))?;
        }
        Ok(())
    }
}

impl MethodLocator {
    /// The unique declaration in `decls` matching this locator.
    pub fn resolve<'d>(&self, decls: &'d FileDecls) -> Result<&'d MethodDecl> {
        let wanted: Option<Vec<String>> = self
            .param_types
            .as_ref()
            .map(|ps| ps.iter().map(|p| crate::lang::syntax::normalize_text(p)).collect());
        let hits: Vec<&MethodDecl> = decls
            .methods
            .iter()
            .filter(|m| m.name == self.method && m.classes == self.classes)
            .filter(|m| {
                wanted
                    .as_ref()
                    .is_none_or(|w| m.params.iter().map(|p| &p.type_ref.text).eq(w.iter()))
            })
            .collect();
        match hits.as_slice() {
            [one] => Ok(one),
            [] => Err(Error::LocatorNotFound(self.to_string())),
            many => Err(Error::LocatorAmbiguous(self.to_string(), many.len())),
        }
    }
}

/// A located method: its signature, raw texts and declaration record.
#[derive(Debug, Clone)]
pub struct ParsedMethod {
    pub signature: MethodSignature,
    /// Body block text, braces included; empty for abstract methods.
    pub body: String,
    /// Full declaration text from modifiers to closing brace.
    pub declaration: String,
    pub decl: MethodDecl,
}

pub fn parse_method(source: &str, locator: &MethodLocator) -> Result<ParsedMethod> {
    let tree = parse(source);
    if has_errors(&tree) {
        return Err(Error::Parse(format!("{} does not parse", locator.file)));
    }
    let decls = FileDecls::from_tree(&tree, source);
    let decl = locator.resolve(&decls)?.clone();
    Ok(ParsedMethod {
        signature: MethodSignature::from_decl(&decl),
        body: decl.body.map(|b| b.text(source).to_string()).unwrap_or_default(),
        declaration: decl.span.text(source).to_string(),
        decl,
    })
}

/// A focal method before and after the change.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FocalChange {
    pub original: MethodSignature,
    pub updated: MethodSignature,
    pub kinds: SynBCKind,
    /// Canonical body texts.
    pub original_body: String,
    pub updated_body: String,
    /// Canonical full declarations, used for the focal diff.
    pub original_decl: String,
    pub updated_decl: String,
    pub locator_pre: MethodLocator,
    pub locator_post: MethodLocator,
}

impl FocalChange {
    pub fn from_snapshot(snapshot: &RepoSnapshot, pre: &MethodLocator, post: &MethodLocator) -> Result<Self> {
        let before = parse_method(snapshot.file(Version::Pre, &pre.file)?, pre)?;
        let after = parse_method(snapshot.file(Version::Post, &post.file)?, post)?;
        Self::from_parsed(&before, &after, pre.clone(), post.clone())
    }

    pub fn from_parsed(
        before: &ParsedMethod,
        after: &ParsedMethod,
        locator_pre: MethodLocator,
        locator_post: MethodLocator,
    ) -> Result<Self> {
        Ok(FocalChange {
            kinds: diff_signatures(&before.signature, &after.signature),
            original: before.signature.clone(),
            updated: after.signature.clone(),
            original_body: canonicalize_fragment(&before.body)?,
            updated_body: canonicalize_fragment(&after.body)?,
            original_decl: canonicalize_fragment(&before.declaration)?,
            updated_decl: canonicalize_fragment(&after.declaration)?,
            locator_pre,
            locator_post,
        })
    }

    pub fn obsolete_params(&self) -> Result<Vec<ParameterDecl>> {
        get_obsolete_params(&self.original, &self.updated)
    }

    /// Diff of the canonical declarations.
    pub fn focal_diff(&self, context: usize) -> DiffText {
        unified_diff(&self.original_decl, &self.updated_decl, context)
    }
}
