//! Scoring context chunks against queries and keeping the most relevant.

mod lexical;
mod remote;

use serde::{Deserialize, Serialize};

pub use lexical::{idf, lexical_scores, tokenize};
pub use remote::{min_max, RemoteScorer, REMOTE_TIMEOUT};

use crate::collect::{ContextChunk, TROCtxBundle, TypeTags};
use crate::error::Result;
use crate::query::QuerySet;
use crate::snapshot::diff::changed_text;

pub const DEFAULT_K: usize = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScorerKind {
    #[default]
    Lexical,
    Remote,
}

pub enum Scorer {
    Lexical,
    Remote(RemoteScorer),
}

impl Scorer {
    pub fn kind(&self) -> ScorerKind {
        match self {
            Scorer::Lexical => ScorerKind::Lexical,
            Scorer::Remote(_) => ScorerKind::Remote,
        }
    }

    /// One score per document, order-aligned.
    pub fn score(&self, query: &str, docs: &[&str]) -> Result<Vec<f64>> {
        match self {
            Scorer::Lexical => Ok(lexical_scores(query, docs)),
            Scorer::Remote(r) => r.score(query, docs),
        }
    }

    /// Scores with the lexical scorer when the remote service fails.
    fn score_or_fallback(&self, query: &str, docs: &[&str], flags: &mut Vec<String>) -> Vec<f64> {
        match self.score(query, docs) {
            Ok(s) => s,
            Err(e) => {
                let flag = format!("remote scorer failed ({e}); lexical scores used");
                tracing::warn!("{flag}");
                if !flags.contains(&flag) {
                    flags.push(flag);
                }
                lexical_scores(query, docs)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredChunk {
    pub chunk: ContextChunk,
    pub score: f64,
    pub query_used: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RankedGroup {
    pub label: String,
    pub chunks: Vec<ScoredChunk>,
    /// Kept in collection order because there was no query.
    #[serde(default)]
    pub unranked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedClassGroup {
    pub type_name: String,
    pub tags: TypeTags,
    pub group: RankedGroup,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RankedBundle {
    pub class_ctx: Vec<RankedClassGroup>,
    pub usage_ctx: RankedGroup,
    pub env_ctx_focal: RankedGroup,
    pub env_ctx_test: RankedGroup,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl RankedBundle {
    /// The selected chunks with scores dropped.
    pub fn to_bundle(&self) -> TROCtxBundle {
        let plain = |g: &RankedGroup| g.chunks.iter().map(|s| s.chunk.clone()).collect::<Vec<_>>();
        TROCtxBundle {
            class_ctx: self
                .class_ctx
                .iter()
                .map(|c| crate::collect::ClassCtxGroup {
                    type_name: c.type_name.clone(),
                    tags: c.tags,
                    chunks: plain(&c.group),
                    warning: None,
                })
                .collect(),
            usage_ctx: plain(&self.usage_ctx),
            env_ctx_focal: plain(&self.env_ctx_focal),
            env_ctx_test: plain(&self.env_ctx_test),
            warnings: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.groups().all(|g| g.chunks.is_empty())
    }

    /// Groups in prompt order: class contexts, usages, focal and test
    /// environments.
    pub fn groups(&self) -> impl Iterator<Item = &RankedGroup> {
        self.class_ctx
            .iter()
            .map(|c| &c.group)
            .chain([&self.usage_ctx, &self.env_ctx_focal, &self.env_ctx_test])
    }

    pub fn groups_mut(&mut self) -> impl Iterator<Item = &mut RankedGroup> {
        self.class_ctx
            .iter_mut()
            .map(|c| &mut c.group)
            .chain([&mut self.usage_ctx, &mut self.env_ctx_focal, &mut self.env_ctx_test])
    }
}

/// Indices of the `k` best scores, best first; ties keep collection order.
pub fn top_k(scores: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    idx.truncate(k);
    idx
}

fn unranked(chunks: &[ContextChunk], k: usize) -> Vec<ScoredChunk> {
    chunks
        .iter()
        .take(k)
        .map(|c| ScoredChunk { chunk: c.clone(), score: 0.0, query_used: String::new() })
        .collect()
}

/// Per-chunk best score over `queries` and the query reaching it. Scores are
/// computed over `docs`, which may hold several documents per chunk; `owner`
/// maps each document to its chunk.
fn best_over_queries(
    scorer: &Scorer,
    queries: &[&str],
    docs: &[&str],
    owner: &[usize],
    n_chunks: usize,
    flags: &mut Vec<String>,
) -> Vec<(f64, String)> {
    let mut best = vec![(f64::NEG_INFINITY, String::new()); n_chunks];
    for q in queries {
        let scores = scorer.score_or_fallback(q, docs, flags);
        for (d, s) in scores.into_iter().enumerate() {
            let slot = &mut best[owner[d]];
            if s > slot.0 {
                *slot = (s, q.to_string());
            }
        }
    }
    for b in &mut best {
        if b.0 == f64::NEG_INFINITY {
            b.0 = 0.0;
        }
    }
    best
}

fn rank_group(
    label: String,
    chunks: &[ContextChunk],
    queries: &[&str],
    docs_of: impl Fn(&ContextChunk) -> Vec<String>,
    scorer: &Scorer,
    k: usize,
    flags: &mut Vec<String>,
) -> RankedGroup {
    let queries: Vec<&str> = queries.iter().copied().filter(|q| !q.trim().is_empty()).collect();
    if chunks.is_empty() {
        return RankedGroup { label, chunks: Vec::new(), unranked: false };
    }
    if queries.is_empty() {
        return RankedGroup { label, chunks: unranked(chunks, k), unranked: true };
    }
    let mut docs = Vec::new();
    let mut owner = Vec::new();
    for (i, c) in chunks.iter().enumerate() {
        for d in docs_of(c) {
            docs.push(d);
            owner.push(i);
        }
    }
    let doc_refs: Vec<&str> = docs.iter().map(String::as_str).collect();
    let best = best_over_queries(scorer, &queries, &doc_refs, &owner, chunks.len(), flags);
    let scores: Vec<f64> = best.iter().map(|b| b.0).collect();
    let picked = top_k(&scores, k)
        .into_iter()
        .map(|i| ScoredChunk { chunk: chunks[i].clone(), score: best[i].0, query_used: best[i].1.clone() })
        .collect();
    RankedGroup { label, chunks: picked, unranked: false }
}

fn group_label(chunks: &[ContextChunk], fallback: &str) -> String {
    chunks.first().map_or_else(|| fallback.to_string(), |c| c.group_label.clone())
}

pub const USAGE_LABEL: &str = "Usages of the focal method";
pub const ENV_FOCAL_LABEL: &str = "Changes around the focal method";
pub const ENV_TEST_LABEL: &str = "Changes around the test method";

/// Selects the retained contexts: constructors of new types always, plus
/// the `k` best chunks of every group.
pub fn select_troctx(bundle: &TROCtxBundle, queries: &QuerySet, scorer: &Scorer, k: usize) -> RankedBundle {
    let mut flags = Vec::new();
    let mut class_ctx = Vec::new();
    for g in &bundle.class_ctx {
        let mut qs: Vec<&str> = Vec::new();
        if g.tags.param {
            qs.extend(queries.param_op_queries.iter().map(String::as_str));
        }
        if g.tags.ret {
            qs.extend(queries.ret_op_queries.iter().map(String::as_str));
        }
        let (ctors, others): (Vec<ContextChunk>, Vec<ContextChunk>) =
            g.chunks.iter().cloned().partition(|c| c.is_constructor);
        let label = group_label(&g.chunks, &format!("Defined in class {}", g.type_name));
        let mut ranked = rank_group(label, &others, &qs, |c| vec![c.scoring_text().to_string()], scorer, k, &mut flags);
        let kept_ctors = ctors
            .into_iter()
            .map(|c| ScoredChunk { chunk: c, score: 1.0, query_used: String::new() });
        ranked.chunks = kept_ctors.chain(ranked.chunks).collect();
        class_ctx.push(RankedClassGroup { type_name: g.type_name.clone(), tags: g.tags, group: ranked });
    }
    let stmts = [queries.obsolete_stmts.as_str()];
    let usage_ctx = rank_group(
        USAGE_LABEL.to_string(),
        &bundle.usage_ctx,
        &stmts,
        |c| vec![changed_text(&c.text, '-'), changed_text(&c.text, '+')],
        scorer,
        k,
        &mut flags,
    );
    let env_ctx_focal = rank_group(
        ENV_FOCAL_LABEL.to_string(),
        &bundle.env_ctx_focal,
        &[queries.synbc_analysis.as_str()],
        |c| vec![c.text.clone()],
        scorer,
        k,
        &mut flags,
    );
    let env_ctx_test = rank_group(
        ENV_TEST_LABEL.to_string(),
        &bundle.env_ctx_test,
        &stmts,
        |c| vec![c.text.clone()],
        scorer,
        k,
        &mut flags,
    );
    for g in [&usage_ctx, &env_ctx_focal, &env_ctx_test] {
        if g.unranked {
            flags.push(format!("{}: unranked", g.label));
        }
    }
    for g in &class_ctx {
        if g.group.unranked {
            flags.push(format!("{}: unranked", g.group.label));
        }
    }
    RankedBundle { class_ctx, usage_ctx, env_ctx_focal, env_ctx_test, k, flags }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_k_ties_keep_order() {
        assert_eq!(top_k(&[0.5, 0.9, 0.5, 0.9], 3), [1, 3, 0]);
        assert_eq!(top_k(&[0.1], 3), [0]);
    }
}
