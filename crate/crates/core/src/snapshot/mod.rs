//! Immutable pre/post source trees.

pub mod canon;
pub mod diff;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use walkdir::WalkDir;

use crate::error::{Error, Result};

pub use canon::{canonicalize, canonicalize_fragment, canonicalize_with_cursor, CursorPos};
pub use diff::{unified_diff, DiffText};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Version {
    Pre,
    Post,
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Version::Pre => "pre",
            Version::Post => "post",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub text: String,
    /// Hex SHA-256 of `text` taken at load.
    pub hash: String,
}

impl SourceFile {
    fn new(text: String) -> Self {
        let hash = sha256_hex(text.as_bytes());
        SourceFile { text, hash }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Two versions of a repository's Java sources, keyed by `/`-separated
/// relative path.
#[derive(Debug, Clone, Default)]
pub struct RepoSnapshot {
    roots: [PathBuf; 2],
    files: [BTreeMap<String, SourceFile>; 2],
}

fn slot(v: Version) -> usize {
    match v {
        Version::Pre => 0,
        Version::Post => 1,
    }
}

impl RepoSnapshot {
    /// Loads every `*.java` file below the two roots. Line endings are
    /// normalized to LF; files that are not valid UTF-8 are rejected.
    pub fn load(pre_root: &Path, post_root: &Path) -> Result<Self> {
        Ok(RepoSnapshot {
            roots: [pre_root.to_path_buf(), post_root.to_path_buf()],
            files: [load_tree(pre_root)?, load_tree(post_root)?],
        })
    }

    /// Builds a snapshot from in-memory `(path, text)` pairs.
    pub fn from_sources<P, T>(pre: impl IntoIterator<Item = (P, T)>, post: impl IntoIterator<Item = (P, T)>) -> Self
    where
        P: Into<String>,
        T: Into<String>,
    {
        let build = |items: Vec<(String, String)>| {
            items
                .into_iter()
                .map(|(p, t)| (p, SourceFile::new(normalize_newlines(&t))))
                .collect()
        };
        let pre = pre.into_iter().map(|(p, t)| (p.into(), t.into())).collect();
        let post = post.into_iter().map(|(p, t)| (p.into(), t.into())).collect();
        RepoSnapshot {
            roots: Default::default(),
            files: [build(pre), build(post)],
        }
    }

    pub fn root(&self, v: Version) -> &Path {
        &self.roots[slot(v)]
    }

    pub fn file(&self, v: Version, path: &str) -> Result<&str> {
        self.get(v, path)
            .ok_or_else(|| Error::FileNotInSnapshot(format!("{v}:{path}")))
    }

    pub fn get(&self, v: Version, path: &str) -> Option<&str> {
        self.files[slot(v)].get(path).map(|f| f.text.as_str())
    }

    pub fn hash(&self, v: Version, path: &str) -> Option<&str> {
        self.files[slot(v)].get(path).map(|f| f.hash.as_str())
    }

    /// Relative paths in lexicographic order.
    pub fn paths(&self, v: Version) -> impl Iterator<Item = &str> {
        self.files[slot(v)].keys().map(String::as_str)
    }

    pub fn files(&self, v: Version) -> impl Iterator<Item = (&str, &str)> {
        self.files[slot(v)].iter().map(|(p, f)| (p.as_str(), f.text.as_str()))
    }

    /// Recomputes every hash and compares it with the one taken at load.
    pub fn verify(&self) -> bool {
        self.files
            .iter()
            .flat_map(|m| m.values())
            .all(|f| sha256_hex(f.text.as_bytes()) == f.hash)
    }
}

pub fn normalize_newlines(text: &str) -> String {
    text.replace("\r\n", "\n").replace('\r', "\n")
}

fn load_tree(root: &Path) -> Result<BTreeMap<String, SourceFile>> {
    let mut out = BTreeMap::new();
    if !root.is_dir() {
        return Err(Error::io(
            format!("snapshot root {}", root.display()),
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ));
    }
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::io(format!("walking {}", root.display()), e.into()))?;
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().is_none_or(|e| e != "java") {
            continue;
        }
        let bytes = std::fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let text = String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8(path.to_path_buf()))?;
        let rel = path
            .strip_prefix(root)
            .expect("walkdir yields paths below its root")
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        out.insert(rel, SourceFile::new(normalize_newlines(&text)));
    }
    Ok(out)
}
