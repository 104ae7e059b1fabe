use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("no method matches locator {0}")]
    LocatorNotFound(String),

    #[error("locator {0} matches {1} declarations")]
    LocatorAmbiguous(String, usize),

    #[error("signature change does not touch the parameter list")]
    NotParamChange,

    #[error("cursor {line}:{column} is not on an identifier")]
    CursorNotOnIdentifier { line: usize, column: usize },

    #[error("file {0} is not part of the snapshot")]
    FileNotInSnapshot(String),

    #[error("invalid UTF-8 in {0}")]
    InvalidUtf8(PathBuf),

    #[error("symbol backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("test never invokes focal method `{0}`")]
    FocalInvocationNotFound(String),

    #[error("provider error: {0}")]
    Provider(String),

    #[error("remote scorer error: {0}")]
    RemoteScorer(String),

    #[error("reference is empty")]
    EmptyReference,

    #[error("manifest error: {0}")]
    ManifestParse(String),

    #[error("sample {id} rejected: {rule}")]
    Validation { id: String, rule: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// True for errors caused by bad input rather than by the environment.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation { .. }
                | Error::ManifestParse(_)
                | Error::LocatorNotFound(_)
                | Error::LocatorAmbiguous(..)
                | Error::FocalInvocationNotFound(_)
                | Error::Parse(_)
                | Error::Config(_)
        )
    }
}
