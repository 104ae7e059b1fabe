//! Run configuration shared by all pipeline stages.

use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prompt::DEFAULT_TOKEN_CAP;
use crate::provider::{LiveProvider, LiveSettings, LlmProvider, ReplayProvider};
use crate::repair::{DEFAULT_ATTEMPTS, DEFAULT_TEMPERATURE};
use crate::rerank::{RemoteScorer, Scorer, ScorerKind, DEFAULT_K, REMOTE_TIMEOUT};
use crate::resolver::BackendKind;

const PROVIDER_TIMEOUT: Duration = Duration::from_secs(120);

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderMode {
    Live,
    #[default]
    Replay,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub backend: BackendKind,
    /// Language server command line for the `lsp` backend.
    pub lsp_command: Vec<String>,
    pub scorer: ScorerKind,
    pub scorer_endpoint: Option<String>,
    pub provider: ProviderMode,
    pub replay_dir: Option<PathBuf>,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    #[serde(skip_serializing)]
    pub key: Option<String>,
    pub k: usize,
    pub attempts: usize,
    pub temperature: f64,
    pub token_cap: usize,
    /// `false` renders prompts without references.
    pub use_context: bool,
    pub out: PathBuf,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            backend: BackendKind::Builtin,
            lsp_command: Vec::new(),
            scorer: ScorerKind::Lexical,
            scorer_endpoint: None,
            provider: ProviderMode::Replay,
            replay_dir: None,
            endpoint: None,
            model: None,
            key: None,
            k: DEFAULT_K,
            attempts: DEFAULT_ATTEMPTS,
            temperature: DEFAULT_TEMPERATURE,
            token_cap: DEFAULT_TOKEN_CAP,
            use_context: true,
            out: PathBuf::from("out"),
            jobs: None,
        }
    }
}

/// The settings that shape results, echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub backend: BackendKind,
    pub scorer: ScorerKind,
    pub provider: ProviderMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub k: usize,
    pub attempts: usize,
    pub temperature: f64,
    pub token_cap: usize,
    pub use_context: bool,
}

impl RunConfig {
    /// Fills endpoint, model and key from the environment where unset.
    pub fn with_env(mut self) -> Self {
        if let Some(env) = LiveSettings::from_env() {
            self.endpoint.get_or_insert(env.endpoint);
            self.model.get_or_insert(env.model);
            if !env.key.is_empty() {
                self.key.get_or_insert(env.key);
            }
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.provider {
            ProviderMode::Replay if self.replay_dir.is_none() => {
                return Err(Error::Config("replay mode requires a replay directory".into()))
            }
            ProviderMode::Live if self.endpoint.is_none() || self.model.is_none() => {
                return Err(Error::Config("live mode requires an endpoint and a model".into()))
            }
            _ => {}
        }
        if self.backend == BackendKind::Lsp && self.lsp_command.is_empty() {
            return Err(Error::Config("the lsp backend requires a language server command".into()));
        }
        if self.scorer == ScorerKind::Remote && self.scorer_endpoint.is_none() {
            return Err(Error::Config("the remote scorer requires an endpoint".into()));
        }
        if self.attempts == 0 {
            return Err(Error::Config("attempts must be at least 1".into()));
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            backend: self.backend,
            scorer: self.scorer,
            provider: self.provider,
            model: (self.provider == ProviderMode::Live).then(|| self.model.clone()).flatten(),
            k: self.k,
            attempts: self.attempts,
            temperature: self.temperature,
            token_cap: self.token_cap,
            use_context: self.use_context,
        }
    }

    pub fn build_provider(&self) -> Result<Box<dyn LlmProvider>> {
        self.validate()?;
        Ok(match self.provider {
            ProviderMode::Replay => Box::new(ReplayProvider::new(self.replay_dir.clone().unwrap_or_default())),
            ProviderMode::Live => Box::new(LiveProvider::new(
                LiveSettings {
                    endpoint: self.endpoint.clone().unwrap_or_default(),
                    model: self.model.clone().unwrap_or_default(),
                    key: self.key.clone().unwrap_or_default(),
                },
                PROVIDER_TIMEOUT,
            )),
        })
    }

    pub fn build_scorer(&self) -> Scorer {
        match (self.scorer, &self.scorer_endpoint) {
            (ScorerKind::Remote, Some(endpoint)) => Scorer::Remote(RemoteScorer::new(endpoint.clone(), REMOTE_TIMEOUT)),
            _ => Scorer::Lexical,
        }
    }
}
