//! Reranking queries mined from the obsolete test.

mod operation;
mod statement;

use serde::{Deserialize, Serialize};
use tree_sitter::{Node, Tree};

pub use operation::{build_operation_queries, setter_name};
pub use statement::{
    analysis_template, build_statement_queries, fallback_statements, few_shot_exemplars, statement_messages,
    Exemplar, StatementQueries, MAX_STATEMENTS, NO_CHANGE_ANALYSIS,
};

use crate::error::Result;
use crate::lang::syntax::{descendants, parse, wrap_member};
use crate::provider::LlmProvider;
use crate::signature::FocalChange;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuerySource {
    Provider,
    #[default]
    Fallback,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuerySet {
    pub param_op_queries: Vec<String>,
    pub ret_op_queries: Vec<String>,
    pub synbc_analysis: String,
    pub obsolete_stmts: String,
    pub statement_source: QuerySource,
}

/// Builds all queries for one sample. Operation queries are only mined when
/// parameter or return types changed.
pub fn build_queries(focal: &FocalChange, test: &str, provider: Option<&dyn LlmProvider>) -> Result<QuerySet> {
    let (param, ret) = if focal.kinds.param || focal.kinds.ret {
        build_operation_queries(focal, test)?
    } else {
        (Vec::new(), Vec::new())
    };
    let stmts = build_statement_queries(focal, test, provider);
    Ok(QuerySet {
        param_op_queries: param,
        ret_op_queries: ret,
        synbc_analysis: stmts.analysis,
        obsolete_stmts: stmts.statements,
        statement_source: stmts.source,
    })
}

/// A test method parsed inside a synthetic class.
pub(crate) struct ParsedTest {
    pub src: String,
    pub tree: Tree,
}

impl ParsedTest {
    pub fn new(test: &str) -> Self {
        let src = wrap_member(test);
        let tree = parse(&src);
        ParsedTest { src, tree }
    }

    pub fn method(&self) -> Node<'_> {
        descendants(self.tree.root_node())
            .into_iter()
            .find(|n| matches!(n.kind(), "method_declaration" | "constructor_declaration"))
            .unwrap_or_else(|| self.tree.root_node())
    }
}
