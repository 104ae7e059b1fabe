//! Line diffs: hunk construction, rendering, parsing and patching.
//!
//! The edit script comes from `similar` (Myers); hunks keep each line's
//! original terminator so that patching reproduces the target byte for byte.

use serde::{Deserialize, Serialize};
use similar::{capture_diff_slices, Algorithm, DiffOp};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineKind {
    Context,
    Delete,
    Insert,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffLine {
    pub kind: LineKind,
    /// Line text including its terminator, if it had one.
    pub raw: String,
    /// 0-based line index in the old (context, delete) or new (insert) text.
    pub index: usize,
}

impl DiffLine {
    pub fn text(&self) -> &str {
        self.raw.strip_suffix('\n').unwrap_or(&self.raw)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hunk {
    /// 0-based index of the first old line covered by the hunk.
    pub old_start: usize,
    pub old_len: usize,
    pub new_start: usize,
    pub new_len: usize,
    pub lines: Vec<DiffLine>,
}

impl Hunk {
    pub fn deleted(&self) -> impl Iterator<Item = &DiffLine> {
        self.lines.iter().filter(|l| l.kind == LineKind::Delete)
    }

    pub fn inserted(&self) -> impl Iterator<Item = &DiffLine> {
        self.lines.iter().filter(|l| l.kind == LineKind::Insert)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffText {
    pub hunks: Vec<Hunk>,
}

/// Renders a changed line as `- text` / `+ text` with indentation trimmed.
pub fn changed_line(line: &DiffLine) -> String {
    let sign = match line.kind {
        LineKind::Delete => '-',
        LineKind::Insert => '+',
        LineKind::Context => ' ',
    };
    format!("{sign} {}", line.text().trim())
}

/// Lines of a changed-lines rendering carrying `sign`, without the sign.
pub fn changed_text(rendered: &str, sign: char) -> String {
    rendered
        .lines()
        .filter_map(|l| l.strip_prefix(sign))
        .map(|l| l.strip_prefix(' ').unwrap_or(l))
        .collect::<Vec<_>>()
        .join("\n")
}

impl DiffText {
    pub fn is_empty(&self) -> bool {
        self.hunks.is_empty()
    }

    /// Standard unified-diff body (no file headers).
    pub fn render_unified(&self) -> String {
        let mut out = String::new();
        for h in &self.hunks {
            let start = |s: usize, len: usize| if len == 0 { s } else { s + 1 };
            out.push_str(&format!(
                "@@ -{},{} +{},{} @@\n",
                start(h.old_start, h.old_len),
                h.old_len,
                start(h.new_start, h.new_len),
                h.new_len
            ));
            for l in &h.lines {
                out.push(match l.kind {
                    LineKind::Context => ' ',
                    LineKind::Delete => '-',
                    LineKind::Insert => '+',
                });
                out.push_str(l.text());
                out.push('\n');
                if !l.raw.ends_with('\n') {
                    out.push_str("\\ No newline at end of file\n");
                }
            }
        }
        out
    }

    /// Only deleted and inserted lines, one per line, indentation trimmed.
    pub fn render_changed(&self) -> String {
        self.hunks
            .iter()
            .map(render_hunk_changed)
            .filter(|s| !s.is_empty())
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Parses the output of [`DiffText::render_unified`].
    pub fn parse_unified(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("malformed diff: {msg}"));
        let mut hunks: Vec<Hunk> = Vec::new();
        let mut old_idx = 0;
        let mut new_idx = 0;
        for line in text.split_inclusive('\n') {
            let body = line.strip_suffix('\n').unwrap_or(line);
            if let Some(header) = body.strip_prefix("@@ -") {
                let header = header.strip_suffix(" @@").ok_or_else(|| bad("hunk header"))?;
                let (old, new) = header.split_once(" +").ok_or_else(|| bad("hunk header"))?;
                let range = |r: &str| -> Result<(usize, usize)> {
                    let (s, l) = r.split_once(',').ok_or_else(|| bad("range"))?;
                    let s: usize = s.parse().map_err(|_| bad("range"))?;
                    let l: usize = l.parse().map_err(|_| bad("range"))?;
                    Ok((if l == 0 { s } else { s - 1 }, l))
                };
                let (os, ol) = range(old)?;
                let (ns, nl) = range(new)?;
                old_idx = os;
                new_idx = ns;
                hunks.push(Hunk {
                    old_start: os,
                    old_len: ol,
                    new_start: ns,
                    new_len: nl,
                    lines: Vec::new(),
                });
                continue;
            }
            let hunk = hunks.last_mut().ok_or_else(|| bad("line outside hunk"))?;
            if body == "\\ No newline at end of file" {
                let last = hunk.lines.last_mut().ok_or_else(|| bad("stray marker"))?;
                last.raw.pop();
                continue;
            }
            let (kind, index) = match body.chars().next() {
                Some(' ') => (LineKind::Context, old_idx),
                Some('-') => (LineKind::Delete, old_idx),
                Some('+') => (LineKind::Insert, new_idx),
                _ => return Err(bad("line prefix")),
            };
            match kind {
                LineKind::Context => {
                    old_idx += 1;
                    new_idx += 1;
                }
                LineKind::Delete => old_idx += 1,
                LineKind::Insert => new_idx += 1,
            }
            hunk.lines.push(DiffLine {
                kind,
                raw: format!("{}\n", &body[1..]),
                index,
            });
        }
        Ok(DiffText { hunks })
    }

    /// Applies the diff to `old`, checking every context and deleted line.
    pub fn apply(&self, old: &str) -> Result<String> {
        let lines: Vec<&str> = old.split_inclusive('\n').collect();
        let mut out = String::with_capacity(old.len());
        let mut cursor = 0;
        for h in &self.hunks {
            if h.old_start < cursor || h.old_start > lines.len() {
                return Err(Error::Parse("hunk out of order or out of range".into()));
            }
            for l in &lines[cursor..h.old_start] {
                out.push_str(l);
            }
            cursor = h.old_start;
            for l in &h.lines {
                match l.kind {
                    LineKind::Context | LineKind::Delete => {
                        if lines.get(cursor) != Some(&l.raw.as_str()) {
                            return Err(Error::Parse(format!("patch does not apply at line {}", cursor + 1)));
                        }
                        if l.kind == LineKind::Context {
                            out.push_str(&l.raw);
                        }
                        cursor += 1;
                    }
                    LineKind::Insert => out.push_str(&l.raw),
                }
            }
        }
        for l in &lines[cursor..] {
            out.push_str(l);
        }
        Ok(out)
    }
}

pub fn render_hunk_changed(h: &Hunk) -> String {
    h.lines
        .iter()
        .filter(|l| l.kind != LineKind::Context)
        .map(changed_line)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Line diff of `a` against `b` with `context` lines around each change.
pub fn unified_diff(a: &str, b: &str, context: usize) -> DiffText {
    let old: Vec<&str> = a.split_inclusive('\n').collect();
    let new: Vec<&str> = b.split_inclusive('\n').collect();
    let ops = capture_diff_slices(Algorithm::Myers, &old, &new);

    // Flatten into one entry per line: (kind, old index, new index).
    let mut entries: Vec<(LineKind, usize, usize)> = Vec::new();
    for op in ops {
        match op {
            DiffOp::Equal { old_index, new_index, len } => {
                entries.extend((0..len).map(|k| (LineKind::Context, old_index + k, new_index + k)));
            }
            DiffOp::Delete { old_index, old_len, new_index } => {
                entries.extend((0..old_len).map(|k| (LineKind::Delete, old_index + k, new_index)));
            }
            DiffOp::Insert { old_index, new_index, new_len } => {
                entries.extend((0..new_len).map(|k| (LineKind::Insert, old_index, new_index + k)));
            }
            DiffOp::Replace { old_index, old_len, new_index, new_len } => {
                entries.extend((0..old_len).map(|k| (LineKind::Delete, old_index + k, new_index)));
                entries.extend((0..new_len).map(|k| (LineKind::Insert, old_index + old_len, new_index + k)));
            }
        }
    }

    let changed: Vec<usize> = (0..entries.len())
        .filter(|&i| entries[i].0 != LineKind::Context)
        .collect();
    let mut ranges: Vec<(usize, usize)> = Vec::new();
    for &i in &changed {
        let lo = i.saturating_sub(context);
        let hi = (i + context + 1).min(entries.len());
        match ranges.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => ranges.push((lo, hi)),
        }
    }

    let hunks = ranges
        .into_iter()
        .map(|(lo, hi)| {
            let slice = &entries[lo..hi];
            let (_, o0, n0) = slice[0];
            let lines: Vec<DiffLine> = slice
                .iter()
                .map(|&(kind, o, n)| DiffLine {
                    kind,
                    raw: match kind {
                        LineKind::Insert => new[n].to_string(),
                        _ => old[o].to_string(),
                    },
                    index: if kind == LineKind::Insert { n } else { o },
                })
                .collect();
            let old_len = lines.iter().filter(|l| l.kind != LineKind::Insert).count();
            let new_len = lines.iter().filter(|l| l.kind != LineKind::Delete).count();
            Hunk {
                old_start: o0,
                old_len,
                new_start: n0,
                new_len,
                lines,
            }
        })
        .collect();
    DiffText { hunks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs_give_empty_diff() {
        assert!(unified_diff("a\nb\n", "a\nb\n", 3).is_empty());
    }

    #[test]
    fn zero_context_shows_only_changes() {
        let a = "x\nmount(a, MountOptions.defaults());\ny\n";
        let b = "x\nmount(a, MountPOptions.getDefaultInstance());\ny\n";
        let d = unified_diff(a, b, 0);
        assert_eq!(
            d.render_changed(),
            "- mount(a, MountOptions.defaults());\n+ mount(a, MountPOptions.getDefaultInstance());"
        );
        assert_eq!(d.hunks[0].old_start, 1);
        assert!(d.hunks[0].lines.iter().all(|l| l.kind != LineKind::Context));
    }

    #[test]
    fn unified_rendering_and_parse_round_trip() {
        let a = "1\n2\n3\n4\n5\n6\n7\n8\n9\n10";
        let b = "1\n2\nthree\n4\n5\n6\n7\n8\n9\nten";
        let d = unified_diff(a, b, 1);
        let text = d.render_unified();
        assert_eq!(
            text,
            "@@ -2,3 +2,3 @@\n 2\n-3\n+three\n 4\n@@ -9,2 +9,2 @@\n 9\n-10\n\\ No newline at end of file\n+ten\n\\ No newline at end of file\n"
        );
        let parsed = DiffText::parse_unified(&text).unwrap();
        assert_eq!(parsed.apply(a).unwrap(), b);
        assert_eq!(d.apply(a).unwrap(), b);
    }

    #[test]
    fn insertions_into_empty_file() {
        let d = unified_diff("", "a\nb\n", 3);
        assert_eq!(d.render_unified(), "@@ -0,0 +1,2 @@\n+a\n+b\n");
        assert_eq!(DiffText::parse_unified(&d.render_unified()).unwrap().apply("").unwrap(), "a\nb\n");
    }

    #[test]
    fn apply_rejects_mismatched_base() {
        let d = unified_diff("a\nb\n", "a\nc\n", 0);
        assert!(d.apply("a\nx\n").is_err());
    }
}
