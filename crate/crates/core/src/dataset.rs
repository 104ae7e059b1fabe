//! Benchmark manifests and sample hygiene checks.
//!
//! A manifest is a JSON array of entries:
//!
//! ```json
//! [{
//!   "id": "alluxio-mount",
//!   "project": "alluxio",
//!   "commit": "8cc5a292",
//!   "pre": "fig1/pre",
//!   "post": "fig1/post",
//!   "focal_pre":  {"file": "a/B.java", "classes": ["B"], "method": "mount", "param_types": ["X"]},
//!   "focal_post": {"file": "a/B.java", "classes": ["B"], "method": "mount"},
//!   "test":       {"file": "a/BTest.java", "classes": ["BTest"], "method": "mount"},
//!   "ground_truth": "@Test public void mount() { ... }",
//!   "ground_truth_path": "fig1/ground_truth.java"
//! }]
//! ```
//!
//! Paths are relative to the manifest's directory. `param_types` is optional;
//! `ground_truth` and `ground_truth_path` are alternatives.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::lexer::lex_lossy;
use crate::lang::syntax::{has_errors, parse, wrap_member, FileDecls};
use crate::signature::MethodLocator;
use crate::snapshot::{normalize_newlines, Version};

pub const RULE_INCOMPLETE_ENTRY: &str = "incomplete entry";
pub const RULE_FOCAL_MISSING: &str = "focal missing";
pub const RULE_INCOMPLETE_TEST: &str = "incomplete test";
pub const RULE_SIGNATURE_ONLY: &str = "signature-only focal";
pub const RULE_FOCAL_NOT_USED: &str = "focal not used";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocatorRecord {
    pub file: String,
    #[serde(default)]
    pub classes: Vec<String>,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_types: Option<Vec<String>>,
}

impl LocatorRecord {
    pub fn at(&self, version: Version) -> MethodLocator {
        MethodLocator {
            file: self.file.clone(),
            classes: self.classes.clone(),
            method: self.method.clone(),
            param_types: self.param_types.clone(),
            version,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub project: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal_pre: Option<LocatorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal_post: Option<LocatorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<LocatorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth_path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairSample {
    pub id: String,
    pub pre_root: PathBuf,
    pub post_root: PathBuf,
    pub focal_pre: MethodLocator,
    pub focal_post: MethodLocator,
    pub test: MethodLocator,
    pub ground_truth: Option<String>,
    pub project: Option<String>,
    pub commit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub id: String,
    pub rule: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadedManifest {
    pub samples: Vec<RepairSample>,
    pub rejected: Vec<Rejection>,
}

/// Parses manifest text without checking the entries.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    serde_json::from_str(text).map_err(|e| Error::ManifestParse(e.to_string()))
}

fn read(path: &Path) -> Option<String> {
    std::fs::read_to_string(path).ok().map(|t| normalize_newlines(&t))
}

fn reject(id: &str, rule: &str) -> Error {
    Error::Validation { id: id.to_string(), rule: rule.to_string() }
}

/// Resolves paths of one entry and applies the hygiene rules.
pub fn validate_entry(entry: &ManifestEntry, base: &Path) -> Result<RepairSample> {
    let id = entry.id.as_str();
    let (Some(pre), Some(post), Some(fpre), Some(fpost), Some(test)) =
        (&entry.pre, &entry.post, &entry.focal_pre, &entry.focal_post, &entry.test)
    else {
        return Err(reject(id, RULE_INCOMPLETE_ENTRY));
    };
    let pre_root = base.join(pre);
    let post_root = base.join(post);
    if !pre_root.is_dir() || !post_root.is_dir() {
        return Err(reject(id, RULE_INCOMPLETE_ENTRY));
    }
    let ground_truth = match (&entry.ground_truth, &entry.ground_truth_path) {
        (Some(g), _) => Some(normalize_newlines(g)),
        (None, Some(p)) => Some(read(&base.join(p)).ok_or_else(|| reject(id, RULE_INCOMPLETE_ENTRY))?),
        (None, None) => None,
    };

    let focal_pre = fpre.at(Version::Pre);
    let focal_post = fpost.at(Version::Post);
    let mut focal_name = String::new();
    for (root, loc) in [(&pre_root, &focal_pre), (&post_root, &focal_post)] {
        let text = read(&root.join(&loc.file)).ok_or_else(|| reject(id, RULE_FOCAL_MISSING))?;
        let decls = FileDecls::from_source(&text);
        let m = loc.resolve(&decls).map_err(|_| reject(id, RULE_FOCAL_MISSING))?;
        let has_body = m
            .body
            .is_some_and(|b| lex_lossy(b.text(&text)).len() > 2);
        if !has_body {
            return Err(reject(id, RULE_SIGNATURE_ONLY));
        }
        if loc.version == Version::Pre {
            focal_name = m.name.clone();
        }
    }

    let test_loc = test.at(Version::Pre);
    let test_text = read(&pre_root.join(&test_loc.file)).ok_or_else(|| reject(id, RULE_INCOMPLETE_TEST))?;
    let tree = parse(&test_text);
    let decls = FileDecls::from_tree(&tree, &test_text);
    let t = test_loc.resolve(&decls).map_err(|_| reject(id, RULE_INCOMPLETE_TEST))?;
    let Some(body) = t.body else {
        return Err(reject(id, RULE_INCOMPLETE_TEST));
    };
    let body_tokens = lex_lossy(body.text(&test_text));
    if body_tokens.len() <= 2 || has_errors(&parse(&wrap_member(t.span.text(&test_text)))) {
        return Err(reject(id, RULE_INCOMPLETE_TEST));
    }
    if !body_tokens.iter().any(|tok| tok.is_ident() && tok.text == focal_name) {
        return Err(reject(id, RULE_FOCAL_NOT_USED));
    }

    Ok(RepairSample {
        id: id.to_string(),
        pre_root,
        post_root,
        focal_pre,
        focal_post,
        test: test_loc,
        ground_truth,
        project: entry.project.clone(),
        commit: entry.commit.clone(),
    })
}

/// Loads and validates a manifest, keeping entry order. Invalid entries are
/// reported, not fatal.
pub fn load_manifest(path: &Path) -> Result<LoadedManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let entries = parse_manifest(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut out = LoadedManifest::default();
    for entry in &entries {
        match validate_entry(entry, base) {
            Ok(s) => out.samples.push(s),
            Err(Error::Validation { id, rule }) => {
                tracing::warn!(%id, %rule, "sample rejected");
                out.rejected.push(Rejection { id, rule });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
