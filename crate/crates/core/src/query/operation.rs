//! Operation queries: member accesses tied to obsolete parameters (backward
//! over def-use chains) or to the focal return value (forward over aliases).

use std::collections::BTreeSet;

use tree_sitter::Node;

use super::ParsedTest;
use crate::error::{Error, Result};
use crate::lang::dataflow::{analyze, is_value_identifier, Flow};
use crate::lang::syntax::{descendants, named_children, node_at_span, node_text, Span};
use crate::resolver::index::base_type_name;
use crate::signature::{unmatched_indices, FocalChange};

fn upper_camel(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// `setFoo()` for a parameter name or type name `foo`.
pub fn setter_name(base: &str) -> String {
    format!("set{}()", upper_camel(base.trim_start_matches('_')))
}

fn arguments(call: Node<'_>) -> Vec<Node<'_>> {
    call.child_by_field_name("arguments")
        .map(named_children)
        .unwrap_or_default()
        .into_iter()
        .filter(|c| !c.kind().ends_with("comment"))
        .collect()
}

/// Calls of the original focal method inside the test.
fn focal_invocations<'t>(method: Node<'t>, src: &str, focal: &FocalChange) -> Vec<Node<'t>> {
    let sig = &focal.original;
    let arity_ok = |n: usize| {
        if sig.is_varargs() {
            n + 1 >= sig.params.len()
        } else {
            n == sig.params.len()
        }
    };
    descendants(method)
        .into_iter()
        .filter(|n| {
            let name_ok = match n.kind() {
                "method_invocation" => n.child_by_field_name("name").is_some_and(|c| node_text(c, src) == sig.name),
                "object_creation_expression" if sig.is_constructor => n
                    .child_by_field_name("type")
                    .is_some_and(|t| base_type_name(node_text(t, src)) == sig.name),
                _ => false,
            };
            name_ok && arity_ok(arguments(*n).len())
        })
        .collect()
}

fn value_idents(node: Node<'_>, src: &str) -> Vec<String> {
    descendants(node)
        .into_iter()
        .filter(|n| is_value_identifier(*n, src))
        .map(|n| node_text(n, src).to_string())
        .collect()
}

/// Text of a member access whose receiver is a plain identifier accepted by
/// `var` (instance access) or `ty` (static access).
fn access_query(
    node: Node<'_>,
    src: &str,
    var: &dyn Fn(&str) -> bool,
    ty: &dyn Fn(&str) -> bool,
) -> Option<String> {
    let (member, suffix) = match node.kind() {
        "method_invocation" => (node.child_by_field_name("name")?, "()"),
        "field_access" => (node.child_by_field_name("field")?, ""),
        _ => return None,
    };
    let object = node.child_by_field_name("object")?;
    if object.kind() != "identifier" {
        return None;
    }
    let recv = node_text(object, src);
    let member = node_text(member, src);
    if var(recv) {
        Some(format!("{member}{suffix}"))
    } else if ty(recv) {
        Some(format!("{recv}.{member}{suffix}"))
    } else {
        None
    }
}

/// Identifier at the root of a receiver chain such as `a.b().c`.
fn receiver_root<'t>(mut node: Node<'t>) -> Option<Node<'t>> {
    loop {
        match node.kind() {
            "identifier" => return Some(node),
            "method_invocation" | "field_access" => node = node.child_by_field_name("object")?,
            "parenthesized_expression" | "cast_expression" => node = node.named_child(node.named_child_count() as u32 - 1)?,
            _ => return None,
        }
    }
}

fn push_unique(out: &mut Vec<(usize, String)>, offset: usize, text: String) {
    if !out.iter().any(|(_, t)| *t == text) {
        out.push((offset, text));
    }
}

fn param_ops(test: &ParsedTest, flow: &Flow, invocations: &[Node<'_>], focal: &FocalChange) -> Vec<(usize, String)> {
    let src = test.src.as_str();
    let obsolete = unmatched_indices(&focal.original.params, &focal.updated.params);
    let mut types: BTreeSet<String> = obsolete
        .iter()
        .map(|&i| base_type_name(&focal.original.params[i].type_text).to_string())
        .collect();
    let mut vars: BTreeSet<String> = BTreeSet::new();
    let mut exprs: Vec<Span> = Vec::new();
    for call in invocations {
        let args = arguments(*call);
        for &i in &obsolete {
            let Some(arg) = args.get(i) else { continue };
            exprs.push(Span::of(*arg));
            vars.extend(value_idents(*arg, src));
        }
    }
    // Close over definitions of tracked variables.
    let mut visited: BTreeSet<String> = BTreeSet::new();
    while let Some(v) = vars.iter().find(|v| !visited.contains(*v)).cloned() {
        visited.insert(v.clone());
        if let Some(t) = flow.local(&v).and_then(|l| l.type_text.as_deref()) {
            types.insert(base_type_name(t).to_string());
        }
        for def in flow.defs_of(&v) {
            let Some(rhs) = def.rhs else { continue };
            exprs.push(rhs);
            let root = node_at_span(&test.tree, rhs).and_then(receiver_root);
            if let Some(r) = root.filter(|r| is_value_identifier(*r, src)) {
                vars.insert(node_text(r, src).to_string());
            }
        }
    }

    let is_var = |s: &str| vars.contains(s);
    let is_type = |s: &str| types.contains(s) && !vars.contains(s) && flow.local(s).is_none();
    let never = |_: &str| false;
    let mut ops = Vec::new();
    for node in descendants(test.method()) {
        let start = node.start_byte();
        let in_expr = exprs.iter().any(|e| e.start <= start && node.end_byte() <= e.end);
        let q = if in_expr {
            access_query(node, src, &is_var, &is_type)
        } else {
            access_query(node, src, &is_var, &never)
        };
        if let Some(q) = q {
            push_unique(&mut ops, start, q);
        }
    }
    ops
}

fn ret_ops(test: &ParsedTest, flow: &Flow, invocations: &[Node<'_>]) -> Vec<(usize, String)> {
    let src = test.src.as_str();
    let mut vars: BTreeSet<String> = BTreeSet::new();
    let mut ops = Vec::new();
    for call in invocations {
        let mut node = *call;
        while let Some(p) = node.parent().filter(|p| p.kind() == "parenthesized_expression") {
            node = p;
        }
        let Some(parent) = node.parent() else { continue };
        let is = |field: &str| parent.child_by_field_name(field).is_some_and(|c| c.id() == node.id());
        match parent.kind() {
            "variable_declarator" if is("value") => {
                if let Some(n) = parent.child_by_field_name("name") {
                    vars.insert(node_text(n, src).to_string());
                }
            }
            "assignment_expression" if is("right") => {
                if let Some(l) = parent.child_by_field_name("left").filter(|l| l.kind() == "identifier") {
                    vars.insert(node_text(l, src).to_string());
                }
            }
            "method_invocation" if is("object") => {
                if let Some(n) = parent.child_by_field_name("name") {
                    push_unique(&mut ops, n.start_byte(), format!("{}()", node_text(n, src)));
                }
            }
            "field_access" if is("object") => {
                if let Some(n) = parent.child_by_field_name("field") {
                    push_unique(&mut ops, n.start_byte(), node_text(n, src).to_string());
                }
            }
            _ => {}
        }
    }
    // Forward aliases: `y = x` with `x` tracked.
    loop {
        let before = vars.len();
        for def in &flow.defs {
            let Some(rhs) = def.rhs else { continue };
            let Some(n) = node_at_span(&test.tree, rhs) else { continue };
            if n.kind() == "identifier" && vars.contains(node_text(n, src)) {
                vars.insert(def.var.clone());
            }
        }
        if vars.len() == before {
            break;
        }
    }
    let is_var = |s: &str| vars.contains(s);
    let never = |_: &str| false;
    for node in descendants(test.method()) {
        if let Some(q) = access_query(node, src, &is_var, &never) {
            push_unique(&mut ops, node.start_byte(), q);
        }
    }
    ops
}

fn finish(mut ops: Vec<(usize, String)>) -> Vec<String> {
    ops.sort_by_key(|(o, _)| *o);
    ops.into_iter().map(|(_, t)| t).collect()
}

/// `(ParamOpQ, RetOpQ)` for a test method text. Each set is empty unless its
/// kind of change is present.
pub fn build_operation_queries(focal: &FocalChange, test: &str) -> Result<(Vec<String>, Vec<String>)> {
    let parsed = ParsedTest::new(test);
    let method = parsed.method();
    let flow = analyze(method, &parsed.src);
    let invocations = focal_invocations(method, &parsed.src, focal);
    if invocations.is_empty() && (focal.kinds.param || focal.kinds.ret) {
        return Err(Error::FocalInvocationNotFound(focal.original.name.clone()));
    }

    let mut param = Vec::new();
    if focal.kinds.param {
        for p in focal.obsolete_params()? {
            for s in [setter_name(&p.name), setter_name(base_type_name(&p.type_text))] {
                if !param.contains(&s) {
                    param.push(s);
                }
            }
        }
        for q in finish(param_ops(&parsed, &flow, &invocations, focal)) {
            if !param.contains(&q) {
                param.push(q);
            }
        }
    }
    let ret = if focal.kinds.ret {
        finish(ret_ops(&parsed, &flow, &invocations))
    } else {
        Vec::new()
    };
    Ok((param, ret))
}
