//! BLEU over code tokens.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lang::lexer::lex_lossy;

pub const MAX_N: usize = 4;

/// Code-aware tokens: identifiers, keywords and literals whole, each
/// operator or separator on its own, comments dropped.
pub fn code_tokens(text: &str) -> Vec<String> {
    lex_lossy(text).into_iter().map(|t| t.text.to_string()).collect()
}

fn ngram_counts<T: AsRef<str>>(tokens: &[T], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w.iter().map(AsRef::as_ref).collect()).or_default() += 1;
        }
    }
    counts
}

/// Clipped n-gram matches and candidate n-gram total, each gram weighted by
/// `weight` when `n` is 1.
pub(crate) fn clipped<T: AsRef<str>>(
    candidate: &[T],
    reference: &[T],
    n: usize,
    weight: &dyn Fn(&str) -> f64,
) -> (f64, f64) {
    let cand = ngram_counts(candidate, n);
    let refc = ngram_counts(reference, n);
    let mut matched = 0.0;
    let mut total = 0.0;
    for (gram, &c) in &cand {
        let w = if n == 1 { weight(gram[0]) } else { 1.0 };
        matched += w * c.min(refc.get(gram).copied().unwrap_or(0)) as f64;
        total += w * c as f64;
    }
    (matched, total)
}

/// Corpus BLEU: n-gram statistics are summed over all pairs. The 1-gram
/// precision is unsmoothed; higher orders use add-one smoothing.
pub fn corpus_bleu_weighted<T: AsRef<str>>(
    pairs: &[(Vec<T>, Vec<T>)],
    max_n: usize,
    weight: &dyn Fn(&str) -> f64,
) -> Result<f64> {
    let (c_len, r_len): (usize, usize) = pairs.iter().fold((0, 0), |(c, r), (a, b)| (c + a.len(), r + b.len()));
    if r_len == 0 {
        return Err(Error::EmptyReference);
    }
    if c_len == 0 {
        return Ok(0.0);
    }
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let (m, t) = pairs.iter().fold((0.0, 0.0), |(m, t), (c, r)| {
            let (mm, tt) = clipped(c, r, n, weight);
            (m + mm, t + tt)
        });
        let p = if n == 1 { m / t } else { (m + 1.0) / (t + 1.0) };
        if p == 0.0 {
            return Ok(0.0);
        }
        log_sum += p.ln();
    }
    let bp = if c_len > r_len { 1.0 } else { (1.0 - r_len as f64 / c_len as f64).exp() };
    Ok((bp * (log_sum / max_n as f64).exp()).clamp(0.0, 1.0))
}

pub fn corpus_bleu<T: AsRef<str>>(pairs: &[(Vec<T>, Vec<T>)], max_n: usize) -> Result<f64> {
    corpus_bleu_weighted(pairs, max_n, &|_| 1.0)
}

/// Sentence BLEU of token sequences.
pub fn bleu<T: AsRef<str> + Clone>(candidate: &[T], reference: &[T], max_n: usize) -> Result<f64> {
    corpus_bleu(&[(candidate.to_vec(), reference.to_vec())], max_n)
}
