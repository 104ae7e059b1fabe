//! Intra-method def-use facts over a syntax tree.
//!
//! Flow-insensitive: every definition and use in the subtree is recorded in
//! source order, without control-flow merging.

use std::collections::HashMap;

use tree_sitter::Node;

use super::syntax::{children, descendants, node_text, normalize_text, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalVar {
    pub name: String,
    /// Declared type text; `None` for inferred lambda parameters and `var`.
    pub type_text: Option<String>,
    pub decl: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Def {
    pub var: String,
    /// Span of the defining construct (declarator, assignment, update).
    pub span: Span,
    pub rhs: Option<Span>,
    /// Variables read by the right-hand side, in source order.
    pub sources: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Flow {
    pub locals: Vec<LocalVar>,
    pub defs: Vec<Def>,
    pub uses: Vec<(String, Span)>,
}

impl Flow {
    pub fn local(&self, name: &str) -> Option<&LocalVar> {
        self.locals.iter().find(|l| l.name == name)
    }

    pub fn defs_of<'f>(&'f self, name: &'f str) -> impl Iterator<Item = &'f Def> + 'f {
        self.defs.iter().filter(move |d| d.var == name)
    }
}

fn is_field(node: Node<'_>, field: &str) -> bool {
    node.parent()
        .and_then(|p| p.child_by_field_name(field))
        .is_some_and(|c| c.id() == node.id())
}

/// True for identifiers used as values: not method / field names, not
/// labels, not declaration names, and not capitalized (type-like) names.
pub fn is_value_identifier(node: Node<'_>, src: &str) -> bool {
    if node.kind() != "identifier" {
        return false;
    }
    if node_text(node, src).starts_with(|c: char| c.is_uppercase()) {
        return false;
    }
    let Some(parent) = node.parent() else {
        return false;
    };
    match parent.kind() {
        "method_invocation" => !is_field(node, "name"),
        "field_access" => !is_field(node, "field"),
        "variable_declarator" | "formal_parameter" | "catch_formal_parameter" | "enhanced_for_statement" => {
            !is_field(node, "name")
        }
        "lambda_expression" => !is_field(node, "parameters"),
        "inferred_parameters"
        | "method_reference"
        | "labeled_statement"
        | "break_statement"
        | "continue_statement"
        | "marker_annotation"
        | "annotation"
        | "scoped_identifier"
        | "method_declaration"
        | "constructor_declaration"
        | "class_declaration"
        | "enum_constant" => false,
        _ => true,
    }
}

fn value_identifiers(node: Node<'_>, src: &str) -> Vec<String> {
    descendants(node)
        .into_iter()
        .filter(|n| is_value_identifier(*n, src))
        .map(|n| node_text(n, src).to_string())
        .collect()
}

fn declared_type(node: Node<'_>, src: &str) -> Option<String> {
    let ty = node.child_by_field_name("type")?;
    let text = normalize_text(node_text(ty, src));
    (text != "var").then_some(text)
}

/// Collects locals, definitions and uses below `root`.
pub fn analyze(root: Node<'_>, src: &str) -> Flow {
    let mut flow = Flow::default();
    let mut def_names = Vec::new();
    for node in descendants(root) {
        match node.kind() {
            "variable_declarator" => {
                let Some(name) = node.child_by_field_name("name") else { continue };
                let var = node_text(name, src).to_string();
                def_names.push(name.id());
                let parent = node.parent();
                if parent.is_some_and(|p| p.kind() == "local_variable_declaration") {
                    flow.locals.push(LocalVar {
                        name: var.clone(),
                        type_text: parent.and_then(|p| declared_type(p, src)),
                        decl: Span::of(name),
                    });
                }
                if let Some(value) = node.child_by_field_name("value") {
                    flow.defs.push(Def {
                        var,
                        span: Span::of(node),
                        rhs: Some(Span::of(value)),
                        sources: value_identifiers(value, src),
                    });
                }
            }
            "formal_parameter" | "catch_formal_parameter" | "enhanced_for_statement" => {
                let Some(name) = node.child_by_field_name("name") else { continue };
                def_names.push(name.id());
                let type_text = if node.kind() == "catch_formal_parameter" {
                    children(node)
                        .into_iter()
                        .find(|c| c.kind() == "catch_type")
                        .map(|t| normalize_text(node_text(t, src)))
                } else {
                    declared_type(node, src)
                };
                let var = node_text(name, src).to_string();
                flow.locals.push(LocalVar {
                    name: var.clone(),
                    type_text,
                    decl: Span::of(name),
                });
                if let Some(value) = node.child_by_field_name("value") {
                    flow.defs.push(Def {
                        var,
                        span: Span::of(node),
                        rhs: Some(Span::of(value)),
                        sources: value_identifiers(value, src),
                    });
                }
            }
            "spread_parameter" => {
                if let Some(decl) = children(node).into_iter().find(|c| c.kind() == "variable_declarator") {
                    if let Some(name) = decl.child_by_field_name("name") {
                        flow.locals.push(LocalVar {
                            name: node_text(name, src).to_string(),
                            type_text: None,
                            decl: Span::of(name),
                        });
                    }
                }
            }
            "lambda_expression" => {
                let Some(params) = node.child_by_field_name("parameters") else { continue };
                let names: Vec<Node<'_>> = if params.kind() == "identifier" {
                    vec![params]
                } else {
                    children(params).into_iter().filter(|c| c.kind() == "identifier").collect()
                };
                for name in names {
                    def_names.push(name.id());
                    flow.locals.push(LocalVar {
                        name: node_text(name, src).to_string(),
                        type_text: None,
                        decl: Span::of(name),
                    });
                }
            }
            "assignment_expression" => {
                let (Some(left), Some(right)) = (node.child_by_field_name("left"), node.child_by_field_name("right"))
                else {
                    continue;
                };
                if left.kind() != "identifier" {
                    continue;
                }
                let var = node_text(left, src).to_string();
                let compound = node
                    .child_by_field_name("operator")
                    .is_some_and(|op| node_text(op, src) != "=");
                let mut sources = Vec::new();
                if compound {
                    sources.push(var.clone());
                } else {
                    def_names.push(left.id());
                }
                sources.extend(value_identifiers(right, src));
                flow.defs.push(Def {
                    var,
                    span: Span::of(node),
                    rhs: Some(Span::of(right)),
                    sources,
                });
            }
            "update_expression" => {
                if let Some(target) = children(node).into_iter().find(|c| c.kind() == "identifier") {
                    let var = node_text(target, src).to_string();
                    flow.defs.push(Def {
                        var: var.clone(),
                        span: Span::of(node),
                        rhs: None,
                        sources: vec![var],
                    });
                }
            }
            _ => {}
        }
    }
    for node in descendants(root) {
        if is_value_identifier(node, src) && !def_names.contains(&node.id()) {
            flow.uses.push((node_text(node, src).to_string(), Span::of(node)));
        }
    }
    flow.defs.sort_by_key(|d| d.span.start);
    flow
}

fn norm<'f>(v: &'f str, names: &mut HashMap<&'f str, usize>) -> String {
    let n = names.len();
    format!("var_{}", names.entry(v).or_insert(n))
}

/// Def-use edges with variable names replaced by `var_<i>` in order of first
/// appearance, so that consistent renaming leaves the edge set unchanged.
/// A definition yields `computedFrom` edges to each source variable; a use
/// following at least one definition yields a `comesFrom` edge.
pub fn normalized_edges(flow: &Flow) -> Vec<(String, &'static str, String)> {
    enum Event<'f> {
        Def(&'f Def),
        Use(&'f str),
    }
    let mut events: Vec<(usize, Event<'_>)> = flow
        .defs
        .iter()
        .map(|d| (d.span.start, Event::Def(d)))
        .chain(flow.uses.iter().map(|(v, s)| (s.start, Event::Use(v.as_str()))))
        .collect();
    events.sort_by_key(|(pos, e)| (*pos, matches!(e, Event::Use(_))));

    let mut names: HashMap<&str, usize> = HashMap::new();
    let mut defined: Vec<&str> = Vec::new();
    let mut edges = Vec::new();
    for (_, event) in &events {
        match event {
            Event::Def(d) => {
                let target = norm(&d.var, &mut names);
                for s in &d.sources {
                    let source = norm(s, &mut names);
                    edges.push((target.clone(), "computedFrom", source));
                }
                defined.push(&d.var);
            }
            Event::Use(v) => {
                let name = norm(v, &mut names);
                if defined.contains(v) {
                    edges.push((name.clone(), "comesFrom", name));
                }
            }
        }
    }
    edges
}
