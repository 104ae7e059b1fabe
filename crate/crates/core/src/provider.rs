//! Chat-completion providers: a live HTTP endpoint and a replay directory.

use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::snapshot::sha256_hex;

pub const ENV_ENDPOINT: &str = "SYNBC_LLM_ENDPOINT";
pub const ENV_MODEL: &str = "SYNBC_LLM_MODEL";
pub const ENV_KEY: &str = "SYNBC_LLM_KEY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        Self { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Self { role: Role::User, content: content.into() }
    }
}

/// The text a replay file is keyed on.
pub fn prompt_text(messages: &[ChatMessage]) -> String {
    messages.iter().map(|m| m.content.as_str()).collect::<Vec<_>>().join("\n\n")
}

/// `sha256(prompt)` as used for replay file names.
pub fn replay_key(messages: &[ChatMessage]) -> String {
    sha256_hex(prompt_text(messages).as_bytes())
}

pub trait LlmProvider: Send + Sync {
    /// One completion; `attempt` distinguishes repeated requests for the
    /// same prompt.
    fn complete(&self, messages: &[ChatMessage], temperature: f64, attempt: usize) -> Result<String>;
}

/// Canned responses stored as `<sha256(prompt)>.txt`. A file named
/// `<sha256(prompt)>.<attempt>.txt` takes precedence for that attempt.
#[derive(Debug, Clone)]
pub struct ReplayProvider {
    pub dir: PathBuf,
}

impl ReplayProvider {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }
}

impl LlmProvider for ReplayProvider {
    fn complete(&self, messages: &[ChatMessage], _temperature: f64, attempt: usize) -> Result<String> {
        let key = replay_key(messages);
        let per_attempt = self.dir.join(format!("{key}.{attempt}.txt"));
        let shared = self.dir.join(format!("{key}.txt"));
        for path in [per_attempt, shared] {
            if path.is_file() {
                return std::fs::read_to_string(&path).map_err(|e| Error::io(path.display().to_string(), e));
            }
        }
        Err(Error::Provider(format!("no replay response for prompt {key}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiveSettings {
    pub endpoint: String,
    pub model: String,
    #[serde(skip_serializing)]
    pub key: String,
}

impl LiveSettings {
    pub fn from_env() -> Option<Self> {
        Some(Self {
            endpoint: std::env::var(ENV_ENDPOINT).ok()?,
            model: std::env::var(ENV_MODEL).ok()?,
            key: std::env::var(ENV_KEY).unwrap_or_default(),
        })
    }
}

pub struct LiveProvider {
    settings: LiveSettings,
    agent: ureq::Agent,
}

impl LiveProvider {
    pub fn new(settings: LiveSettings, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .build()
            .into();
        Self { settings, agent }
    }

    fn request(&self, body: &Value) -> Result<String> {
        let mut req = self.agent.post(&self.settings.endpoint);
        if !self.settings.key.is_empty() {
            req = req.header("Authorization", &format!("Bearer {}", self.settings.key));
        }
        let mut resp = req.send_json(body).map_err(|e| Error::Provider(e.to_string()))?;
        let value: Value = resp
            .body_mut()
            .read_json()
            .map_err(|e| Error::Provider(e.to_string()))?;
        assistant_text(&value).ok_or_else(|| Error::Provider("response has no assistant text".into()))
    }
}

/// Assistant text from a chat-completion response.
pub fn assistant_text(value: &Value) -> Option<String> {
    let candidates = [
        value.pointer("/choices/0/message/content"),
        value.pointer("/message/content"),
        value.pointer("/content"),
    ];
    candidates
        .into_iter()
        .flatten()
        .find_map(|v| v.as_str().map(str::to_string))
}

impl LlmProvider for LiveProvider {
    fn complete(&self, messages: &[ChatMessage], temperature: f64, _attempt: usize) -> Result<String> {
        let body = json!({
            "model": self.settings.model,
            "temperature": temperature,
            "messages": messages,
        });
        self.request(&body).or_else(|e| {
            tracing::warn!(error = %e, "provider request failed, retrying once");
            self.request(&body)
        })
    }
}
