//! Repair support for unit tests broken by method signature changes.
//!
//! The pipeline classifies the focal change, collects repository contexts
//! from a pre/post snapshot, reranks them against queries mined from the
//! obsolete test, renders a repair prompt and scores generated repairs.

pub mod collect;
pub mod config;
pub mod dataset;
pub mod error;
pub mod lang;
pub mod metrics;
pub mod pipeline;
pub mod prompt;
pub mod provider;
pub mod query;
pub mod repair;
pub mod rerank;
pub mod resolver;
pub mod signature;
pub mod snapshot;

pub use error::{Error, Result};
