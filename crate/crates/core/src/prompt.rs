//! Repair prompt assembly.

use serde::{Deserialize, Serialize};

use crate::metrics::approx_tokens;
use crate::provider::ChatMessage;
use crate::rerank::{RankedBundle, RankedGroup};
use crate::signature::FocalChange;
use crate::snapshot::canonicalize_fragment;

pub const DEFAULT_TOKEN_CAP: usize = 8000;

pub const SYSTEM_TEXT: &str = "You are an expert in Java software evolution.";
pub const TASK_TEXT: &str = "The signature of the focal method changed, so the original test no longer compiles against it. \
Update the test so that it works with the updated focal method and keeps testing the same behavior. \
Reply with the complete repaired test method in a single ```java code block.";
pub const REFERENCE_INTRO: &str = "Use these contexts from the repository as references.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionStyle {
    /// Declarations in one Java block.
    Declarations,
    /// One diff block per chunk.
    Diffs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextSection {
    pub group_label: String,
    pub description: String,
    pub style: SectionStyle,
    pub chunks: Vec<String>,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepairPrompt {
    pub system_text: String,
    pub task_text: String,
    pub original_test_text: String,
    pub focal_diff_text: String,
    pub context_sections: Vec<ContextSection>,
    /// Chunks dropped to respect the token cap.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trimmed: Vec<String>,
}

fn section(group: &RankedGroup, description: String, style: SectionStyle) -> Option<ContextSection> {
    (!group.chunks.is_empty()).then(|| ContextSection {
        group_label: group.label.clone(),
        description,
        style,
        chunks: group.chunks.iter().map(|c| c.chunk.text.clone()).collect(),
        scores: group.chunks.iter().map(|c| c.score).collect(),
    })
}

fn sections(troctx: &RankedBundle) -> Vec<ContextSection> {
    let mut out = Vec::new();
    for c in &troctx.class_ctx {
        let role = match (c.tags.param, c.tags.ret) {
            (true, true) => "parameter and return",
            (false, true) => "return",
            _ => "parameter",
        };
        let description = format!("Accessible members of {}, the new {role} type of the focal method.", c.type_name);
        out.extend(section(&c.group, description, SectionStyle::Declarations));
    }
    out.extend(section(
        &troctx.usage_ctx,
        "How other callers of the focal method were updated.".into(),
        SectionStyle::Diffs,
    ));
    out.extend(section(
        &troctx.env_ctx_focal,
        "Changes in the class of the focal method and its parent classes.".into(),
        SectionStyle::Diffs,
    ));
    out.extend(section(
        &troctx.env_ctx_test,
        "Changes in the class of the test method and its parent classes.".into(),
        SectionStyle::Diffs,
    ));
    out
}

impl RepairPrompt {
    /// The user message.
    pub fn render_user(&self) -> String {
        let mut s = String::new();
        s.push_str("## Task\n");
        s.push_str(&self.task_text);
        s.push_str("\n\n## Original test\n```java\n");
        s.push_str(self.original_test_text.trim_end());
        s.push_str("\n```\n\n## Focal method diff\n```diff\n");
        s.push_str(self.focal_diff_text.trim_end());
        s.push_str("\n```\n");
        if !self.context_sections.is_empty() {
            s.push_str("\n## Reference contexts\n");
            s.push_str(REFERENCE_INTRO);
            s.push('\n');
            for sec in &self.context_sections {
                s.push_str(&format!("\n### {}\n{}\n", sec.group_label, sec.description));
                match sec.style {
                    SectionStyle::Declarations => {
                        s.push_str("```java\n");
                        for c in &sec.chunks {
                            s.push_str(c);
                            s.push('\n');
                        }
                        s.push_str("```\n");
                    }
                    SectionStyle::Diffs => {
                        for c in &sec.chunks {
                            s.push_str("```diff\n");
                            s.push_str(c);
                            s.push_str("\n```\n");
                        }
                    }
                }
            }
        }
        s
    }

    /// System and user text as one document.
    pub fn render(&self) -> String {
        format!("{}\n\n{}", self.system_text, self.render_user())
    }

    pub fn messages(&self) -> Vec<ChatMessage> {
        vec![ChatMessage::system(&self.system_text), ChatMessage::user(self.render_user())]
    }

    pub fn token_count(&self) -> usize {
        approx_tokens(&self.render())
    }

    /// Drops the lowest-scored chunk (the later one on ties) until the prompt
    /// fits `cap` or no chunk is left.
    fn trim_to(&mut self, cap: usize) {
        while self.token_count() > cap {
            let mut worst: Option<(usize, usize, f64)> = None;
            for (si, sec) in self.context_sections.iter().enumerate() {
                for (ci, &score) in sec.scores.iter().enumerate() {
                    if worst.is_none_or(|(_, _, w)| score <= w) {
                        worst = Some((si, ci, score));
                    }
                }
            }
            let Some((si, ci, _)) = worst else { break };
            let sec = &mut self.context_sections[si];
            let dropped = sec.chunks.remove(ci);
            sec.scores.remove(ci);
            tracing::info!(group = %sec.group_label, "prompt over token cap, chunk trimmed");
            self.trimmed.push(dropped);
            if sec.chunks.is_empty() {
                self.context_sections.remove(si);
            }
        }
    }
}

/// Builds the prompt from reranked contexts. An empty bundle gives the
/// prompt without references.
pub fn assemble_prompt(focal: &FocalChange, test: &str, troctx: &RankedBundle, token_cap: usize) -> RepairPrompt {
    let mut prompt = RepairPrompt {
        system_text: SYSTEM_TEXT.to_string(),
        task_text: TASK_TEXT.to_string(),
        original_test_text: canonicalize_fragment(test).unwrap_or_else(|_| test.to_string()),
        focal_diff_text: focal.focal_diff(3).render_unified(),
        context_sections: sections(troctx),
        trimmed: Vec::new(),
    };
    prompt.trim_to(token_cap);
    prompt
}
