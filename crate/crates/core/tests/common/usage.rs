//! Generated caller snapshots for the conditional usage enrichment rule.

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use synbc_core::collect::collect_usage_ctx;
use synbc_core::resolver::index::BuiltinIndex;
use synbc_core::signature::{FocalChange, MethodLocator};
use synbc_core::snapshot::{RepoSnapshot, Version};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Param,
    Ret,
    Norm,
}

/// A caller with `slots` statements around one invocation of the focal
/// method; `changed` marks statements edited by the commit.
#[derive(Debug, Clone)]
pub struct Caller {
    pub kind: Kind,
    slots: usize,
    at: usize,
    changed: Vec<bool>,
    invocation_changed: bool,
}

pub fn caller() -> impl Strategy<Value = Caller> {
    (prop_oneof![Just(Kind::Param), Just(Kind::Ret), Just(Kind::Norm)], 1usize..8)
        .prop_flat_map(|(kind, slots)| {
            (Just(kind), Just(slots), 0..=slots, prop::collection::vec(any::<bool>(), slots), any::<bool>())
        })
        .prop_map(|(kind, slots, at, changed, invocation_changed)| Caller { kind, slots, at, changed, invocation_changed })
}

fn stmt(i: usize, post: bool) -> String {
    if post {
        format!("int v{i} = compute{i}(a, {i});")
    } else {
        format!("int v{i} = compute{i}(a);")
    }
}

fn invocation(post: bool, changed: bool) -> &'static str {
    if post && changed {
        "svc.mount(a, fresh);"
    } else {
        "svc.mount(a, o);"
    }
}

fn caller_source(c: &Caller, post: bool) -> String {
    let mut body = Vec::new();
    for i in 0..=c.slots {
        if i == c.at {
            body.push(invocation(post, c.invocation_changed).to_string());
        }
        if i < c.slots {
            body.push(stmt(i, post && c.changed[i]));
        }
    }
    let lines: Vec<String> = body.iter().map(|s| format!("        {s}")).collect();
    format!("class Caller {{\n    void use(Svc svc, A a, O o, O fresh) {{\n{}\n    }}\n}}\n", lines.join("\n"))
}

fn focal_source(kind: Kind, post: bool) -> String {
    let header = match (kind, post) {
        (_, false) => "void mount(A a, O o)",
        (Kind::Param, true) => "void mount(A a, P o)",
        (Kind::Ret, true) => "int mount(A a, O o)",
        (Kind::Norm, true) => "void mount(A a, O o) throws E",
    };
    let body = if post && kind == Kind::Ret { "run(a); return 0;" } else { "run(a);" };
    format!("class Svc {{\n    {header} {{\n        {body}\n    }}\n}}\n")
}

const TEST: &str = "class SvcTest {\n    void t(Svc svc) {\n        svc.mount(null, null);\n    }\n}\n";
const TYPES: &str = "class A {}\nclass O {}\nclass P {}\nclass E extends Exception {}\n";

/// Changed lines expected in the chunk, straight from the generator.
fn expected(c: &Caller) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let edit = |out: &mut BTreeSet<String>, i: usize| {
        out.insert(format!("- {}", stmt(i, false)));
        out.insert(format!("+ {}", stmt(i, true)));
    };
    if c.invocation_changed {
        out.insert(format!("- {}", invocation(false, true)));
        out.insert(format!("+ {}", invocation(true, true)));
    }
    for i in (0..c.slots).filter(|&i| c.changed[i]) {
        let before = i < c.at;
        match c.kind {
            Kind::Param if before => edit(&mut out, i),
            Kind::Ret if !before => edit(&mut out, i),
            _ => {}
        }
    }
    out
}

fn locator(file: &str, class: &str, method: &str, version: Version) -> MethodLocator {
    MethodLocator { file: file.into(), classes: vec![class.into()], method: method.into(), param_types: None, version }
}

/// Collects usage chunks for one generated caller and checks them against
/// the generator's own record of edits.
pub fn check_usage(c: &Caller) -> Result<(), TestCaseError> {
    let files = |post: bool| {
        vec![
            ("Svc.java".to_string(), focal_source(c.kind, post)),
            ("Caller.java".to_string(), caller_source(c, post)),
            ("SvcTest.java".to_string(), TEST.to_string()),
            ("Types.java".to_string(), TYPES.to_string()),
        ]
    };
    let snapshot = RepoSnapshot::from_sources(files(false), files(true));
    let focal = FocalChange::from_snapshot(
        &snapshot,
        &locator("Svc.java", "Svc", "mount", Version::Pre),
        &locator("Svc.java", "Svc", "mount", Version::Post),
    )
    .unwrap();
    let kind_flags = (focal.kinds.param, focal.kinds.ret, focal.kinds.norm);
    prop_assert_eq!(kind_flags, (c.kind == Kind::Param, c.kind == Kind::Ret, c.kind == Kind::Norm));

    let index = BuiltinIndex::build(&snapshot);
    let usage = collect_usage_ctx(&focal, &locator("SvcTest.java", "SvcTest", "t", Version::Pre), &snapshot, &index).unwrap();
    prop_assert_eq!(usage.usages, 1);
    let want = expected(c);
    if want.is_empty() {
        prop_assert!(usage.chunks.is_empty());
        return Ok(());
    }
    prop_assert_eq!(usage.chunks.len(), 1);
    let text = &usage.chunks[0].text;
    let got: BTreeSet<String> = text.lines().map(String::from).collect();
    prop_assert_eq!(&got, &want, "chunk:\n{}", text);
    // The invocation sits at the end of front growth and at the start of back growth.
    if c.invocation_changed {
        let lines: Vec<&str> = text.lines().collect();
        let last_two = lines[lines.len() - 2..].join("\n");
        let first_two = lines[..2].join("\n");
        let inv = "- svc.mount(a, o);\n+ svc.mount(a, fresh);";
        match c.kind {
            Kind::Param => prop_assert_eq!(last_two, inv),
            Kind::Ret => prop_assert_eq!(first_two, inv),
            Kind::Norm => prop_assert_eq!(text.as_str(), inv),
        }
    }
    Ok(())
}
