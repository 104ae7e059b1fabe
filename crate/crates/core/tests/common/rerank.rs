//! Random context bundles and query sets for reranking invariants.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use synbc_core::collect::{ChunkKind, ClassCtxGroup, ContextChunk, TROCtxBundle, TypeTags};
use synbc_core::query::QuerySet;
use synbc_core::rerank::{lexical_scores, select_troctx, RankedGroup, Scorer};
use synbc_core::resolver::Location;
use synbc_core::snapshot::{CursorPos, Version};

const WORDS: [&str; 10] = ["get", "Default", "Instance", "Mount", "Options", "set", "Read", "Only", "builder", "size"];

fn chunk(kind: ChunkKind, text: String, is_constructor: bool, line: usize) -> ContextChunk {
    ContextChunk {
        kind,
        signature_form: None,
        origin: Location::at("F.java", Version::Post, CursorPos::new(line, 0)),
        group_label: "group".into(),
        is_constructor,
        text,
    }
}

fn ident() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(WORDS.to_vec()), 1..4).prop_map(|w| w.concat())
}

fn class_chunks() -> impl Strategy<Value = Vec<ContextChunk>> {
    prop::collection::vec((ident(), any::<bool>()), 0..9).prop_map(|items| {
        items
            .into_iter()
            .enumerate()
            .map(|(i, (name, ctor_coin))| {
                let ctor = ctor_coin && i % 3 == 0;
                let text = if ctor { format!("public Type({name} arg);") } else { format!("public int {name}();") };
                chunk(ChunkKind::ClassCtx, text, ctor, i)
            })
            .collect()
    })
}

fn diff_chunks(kind: ChunkKind) -> impl Strategy<Value = Vec<ContextChunk>> {
    prop::collection::vec((ident(), ident()), 0..7).prop_map(move |items| {
        items
            .into_iter()
            .enumerate()
            .map(|(i, (a, b))| chunk(kind, format!("- x.{a}();\n+ x.{b}();"), false, i))
            .collect()
    })
}

pub fn bundle() -> impl Strategy<Value = TROCtxBundle> {
    (
        prop::collection::vec((class_chunks(), any::<bool>()), 0..3),
        diff_chunks(ChunkKind::UsageCtx),
        diff_chunks(ChunkKind::EnvCtxFocal),
        diff_chunks(ChunkKind::EnvCtxTest),
    )
        .prop_map(|(groups, usage_ctx, env_ctx_focal, env_ctx_test)| TROCtxBundle {
            class_ctx: groups
                .into_iter()
                .enumerate()
                .map(|(i, (chunks, ret))| ClassCtxGroup {
                    type_name: format!("T{i}"),
                    tags: TypeTags { param: !ret, ret },
                    chunks,
                    warning: None,
                })
                .collect(),
            usage_ctx,
            env_ctx_focal,
            env_ctx_test,
            warnings: Vec::new(),
        })
}

pub fn queries() -> impl Strategy<Value = QuerySet> {
    (
        prop::collection::vec(ident().prop_map(|s| format!("{s}()")), 0..3),
        prop::collection::vec(ident().prop_map(|s| format!("{s}()")), 0..3),
        ident(),
        ident(),
    )
        .prop_map(|(p, r, a, s)| QuerySet {
            param_op_queries: p,
            ret_op_queries: r,
            synbc_analysis: format!("The method {a} changed."),
            obsolete_stmts: format!("x.{s}();"),
            ..QuerySet::default()
        })
}

/// Best lexical score of each document over the queries.
fn relevance(docs: &[String], queries: &[String]) -> Vec<f64> {
    let refs: Vec<&str> = docs.iter().map(String::as_str).collect();
    let mut best = vec![0.0f64; docs.len()];
    for q in queries {
        for (b, s) in best.iter_mut().zip(lexical_scores(q, &refs)) {
            *b = b.max(s);
        }
    }
    best
}

/// Checks top-k selection of `pool` into `kept` against independent scores.
fn check_selection(kept: &RankedGroup, pool: &[ContextChunk], scores: &[f64], k: usize) -> Result<(), TestCaseError> {
    prop_assert_eq!(kept.chunks.len(), k.min(pool.len()));
    let picked: Vec<usize> = kept
        .chunks
        .iter()
        .map(|s| pool.iter().position(|c| *c == s.chunk).expect("kept chunk comes from the group"))
        .collect();
    for w in picked.windows(2) {
        prop_assert!(scores[w[0]] > scores[w[1]] || (scores[w[0]] == scores[w[1]] && w[0] < w[1]));
    }
    let floor = picked.iter().map(|&i| scores[i]).fold(f64::INFINITY, f64::min);
    for i in (0..pool.len()).filter(|i| !picked.contains(i)) {
        prop_assert!(scores[i] <= floor + 1e-12);
    }
    Ok(())
}

/// Selection keeps every constructor plus the k best of the other chunks of
/// each group, ordered by independently computed relevance.
pub fn check_rerank(b: &TROCtxBundle, q: &QuerySet, k: usize) -> Result<(), TestCaseError> {
    let ranked = select_troctx(b, q, &Scorer::Lexical, k);
    prop_assert_eq!(ranked.class_ctx.len(), b.class_ctx.len());
    for (group, rg) in b.class_ctx.iter().zip(&ranked.class_ctx) {
        let (ctors, others): (Vec<_>, Vec<_>) = group.chunks.iter().cloned().partition(|c| c.is_constructor);
        let got = &rg.group.chunks;
        prop_assert_eq!(got.len(), ctors.len() + k.min(others.len()));
        for (s, c) in got.iter().zip(&ctors) {
            prop_assert_eq!(&s.chunk, c);
            prop_assert_eq!(s.score, 1.0);
        }
        let qs: Vec<String> = if group.tags.param { q.param_op_queries.clone() } else { q.ret_op_queries.clone() };
        let rest = RankedGroup { chunks: got[ctors.len()..].to_vec(), ..rg.group.clone() };
        if qs.is_empty() {
            prop_assert!(rest.chunks.is_empty() || rg.group.unranked);
            let firsts: Vec<&ContextChunk> = rest.chunks.iter().map(|s| &s.chunk).collect();
            prop_assert_eq!(firsts, others.iter().take(k).collect::<Vec<_>>());
        } else {
            let texts: Vec<String> = others.iter().map(|c| c.scoring_text().to_string()).collect();
            check_selection(&rest, &others, &relevance(&texts, &qs), k)?;
        }
    }

    let stmts = vec![q.obsolete_stmts.clone()];
    // Usage chunks score as the better of their deleted and inserted halves.
    let halves: Vec<String> = b
        .usage_ctx
        .iter()
        .flat_map(|c| {
            let lines: Vec<&str> = c.text.lines().collect();
            [lines[0][2..].to_string(), lines[1][2..].to_string()]
        })
        .collect();
    let per_half = relevance(&halves, &stmts);
    let usage_scores: Vec<f64> = per_half.chunks(2).map(|p| p[0].max(p[1])).collect();
    check_selection(&ranked.usage_ctx, &b.usage_ctx, &usage_scores, k)?;

    let texts = |cs: &[ContextChunk]| cs.iter().map(|c| c.text.clone()).collect::<Vec<_>>();
    let focal_scores = relevance(&texts(&b.env_ctx_focal), std::slice::from_ref(&q.synbc_analysis));
    check_selection(&ranked.env_ctx_focal, &b.env_ctx_focal, &focal_scores, k)?;
    check_selection(&ranked.env_ctx_test, &b.env_ctx_test, &relevance(&texts(&b.env_ctx_test), &stmts), k)?;
    Ok(())
}
