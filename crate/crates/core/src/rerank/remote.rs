//! HTTP reranking service client.

use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};

pub const REMOTE_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Deserialize)]
struct ScoreResponse {
    scores: Vec<f64>,
}

pub struct RemoteScorer {
    endpoint: String,
    agent: ureq::Agent,
}

impl RemoteScorer {
    pub fn new(endpoint: impl Into<String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder().timeout_global(Some(timeout)).build().into();
        Self { endpoint: endpoint.into(), agent }
    }

    /// Raw service scores, min-max normalized.
    pub fn score(&self, query: &str, docs: &[&str]) -> Result<Vec<f64>> {
        let body = json!({ "query": query, "documents": docs });
        let mut resp = self
            .agent
            .post(&self.endpoint)
            .send_json(&body)
            .map_err(|e| Error::RemoteScorer(e.to_string()))?;
        let parsed: ScoreResponse = resp
            .body_mut()
            .read_json()
            .map_err(|e| Error::RemoteScorer(e.to_string()))?;
        if parsed.scores.len() != docs.len() {
            return Err(Error::RemoteScorer(format!(
                "expected {} scores, got {}",
                docs.len(),
                parsed.scores.len()
            )));
        }
        Ok(min_max(&parsed.scores))
    }
}

/// Rescales to `[0, 1]`; constant inputs map to all ones.
pub fn min_max(scores: &[f64]) -> Vec<f64> {
    let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi.partial_cmp(&lo) != Some(std::cmp::Ordering::Greater) {
        return vec![1.0; scores.len()];
    }
    scores.iter().map(|s| (s - lo) / (hi - lo)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(min_max(&[2.0, 4.0, 3.0]), [0.0, 1.0, 0.5]);
        assert_eq!(min_max(&[5.0, 5.0]), [1.0, 1.0]);
    }
}
