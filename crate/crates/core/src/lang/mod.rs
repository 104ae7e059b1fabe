//! Java language support: tokenizer, formatter, syntax trees, dataflow.

pub mod dataflow;
pub mod format;
pub mod lexer;
pub mod syntax;
