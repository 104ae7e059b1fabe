//! Deterministic lexical relevance: cosine similarity of idf-weighted
//! identifier-part sets.

use std::collections::{BTreeSet, HashMap};

/// Case-folded identifier parts: splits on non-alphanumerics, camelCase
/// humps, letter/digit boundaries and underscores; drops a plural `s`.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split(|c: char| !c.is_alphanumeric()) {
        let chars: Vec<char> = word.chars().collect();
        let mut start = 0;
        for i in 1..=chars.len() {
            let boundary = i == chars.len() || {
                let (p, c) = (chars[i - 1], chars[i]);
                let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
                (p.is_lowercase() && c.is_uppercase())
                    || (p.is_uppercase() && c.is_uppercase() && next_lower)
                    || (p.is_alphabetic() != c.is_alphabetic())
            };
            if boundary {
                if start < i {
                    out.push(stem(&chars[start..i].iter().collect::<String>().to_lowercase()));
                }
                start = i;
            }
        }
    }
    out
}

fn stem(word: &str) -> String {
    if word.len() > 3 && word.ends_with('s') && !word.ends_with("ss") {
        word[..word.len() - 1].to_string()
    } else {
        word.to_string()
    }
}

/// `ln(1 + (N - df + 0.5) / (df + 0.5))`.
pub fn idf(n_docs: usize, df: usize) -> f64 {
    (1.0 + (n_docs as f64 - df as f64 + 0.5) / (df as f64 + 0.5)).ln()
}

/// One score in `[0, 1]` per document; document frequencies are taken over
/// `docs` only.
pub fn lexical_scores(query: &str, docs: &[&str]) -> Vec<f64> {
    let sets: Vec<BTreeSet<String>> = docs.iter().map(|d| tokenize(d).into_iter().collect()).collect();
    let mut df: HashMap<&str, usize> = HashMap::new();
    for s in &sets {
        for t in s {
            *df.entry(t.as_str()).or_default() += 1;
        }
    }
    let n = docs.len();
    let w = |t: &str| idf(n, df.get(t).copied().unwrap_or(0));
    let q: BTreeSet<String> = tokenize(query).into_iter().collect();
    let q_norm = q.iter().map(|t| w(t).powi(2)).sum::<f64>().sqrt();
    sets.iter()
        .map(|d| {
            let d_norm = d.iter().map(|t| w(t).powi(2)).sum::<f64>().sqrt();
            if q_norm == 0.0 || d_norm == 0.0 {
                return 0.0;
            }
            let dot: f64 = q.intersection(d).map(|t| w(t).powi(2)).sum();
            (dot / (q_norm * d_norm)).clamp(0.0, 1.0)
        })
        .collect()
}
