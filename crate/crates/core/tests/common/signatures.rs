//! Random signatures, mutations and the tuple-level classification oracle.

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use synbc_core::signature::{parse_method, FocalChange, MethodLocator};
use synbc_core::snapshot::Version;

pub const TYPES: [&str; 7] = ["int", "String", "List<String>", "Map<String, Integer>", "MountOptions", "long[]", "Object"];
const RETURNS: [&str; 5] = ["void", "int", "String", "List<String>", "MountPOptions"];
const MODIFIERS: [&str; 4] = ["public", "static", "final", "synchronized"];
const EXCEPTIONS: [&str; 3] = ["IOException", "TimeoutException", "IllegalStateException"];
const NAMES: [&str; 3] = ["mount", "attach", "run"];

/// Abstract signature tuple; type indices point into `TYPES`.
#[derive(Debug, Clone)]
pub struct Sig {
    name: usize,
    params: Vec<(usize, String)>,
    ret: usize,
    modifiers: BTreeSet<usize>,
    throws: BTreeSet<usize>,
}

fn spaced(ty: &str, loose: bool) -> String {
    if loose {
        ty.replace('<', " < ").replace('>', " >").replace(", ", " ,  ")
    } else {
        ty.to_string()
    }
}

/// Java text of a class holding the method. `loose` varies whitespace and
/// the order of modifiers and exceptions without changing the signature.
fn render(s: &Sig, loose: bool) -> String {
    let mut mods: Vec<&str> = s.modifiers.iter().map(|&m| MODIFIERS[m]).collect();
    let mut throws: Vec<&str> = s.throws.iter().map(|&e| EXCEPTIONS[e]).collect();
    if loose {
        mods.reverse();
        throws.reverse();
    }
    let params: Vec<String> = s.params.iter().map(|(t, n)| format!("{} {n}", spaced(TYPES[*t], loose))).collect();
    let throws = if throws.is_empty() { String::new() } else { format!(" throws {}", throws.join(", ")) };
    let body = if RETURNS[s.ret] == "void" { "log();".to_string() } else { "return null;".to_string() };
    format!(
        "class Host {{\n  {} {} {}({}){} {{\n    {body}\n  }}\n}}\n",
        mods.join(" "),
        spaced(RETURNS[s.ret], loose),
        NAMES[s.name],
        params.join(", "),
        throws
    )
}

pub fn sig() -> impl Strategy<Value = Sig> {
    (
        0..NAMES.len(),
        prop::collection::vec((0..TYPES.len(), 0..4usize), 0..4),
        0..RETURNS.len(),
        prop::collection::btree_set(0..MODIFIERS.len(), 0..3),
        prop::collection::btree_set(0..EXCEPTIONS.len(), 0..2),
    )
        .prop_map(|(name, params, ret, modifiers, throws)| Sig {
            name,
            params: params.into_iter().enumerate().map(|(i, (t, n))| (t, format!("p{i}x{n}"))).collect(),
            ret,
            modifiers,
            throws,
        })
}

#[derive(Debug, Clone)]
pub enum Mutation {
    Rename(usize),
    RetypeParam(usize, usize),
    RenameParam(usize),
    AddParam(usize, usize),
    DropParam(usize),
    Return(usize),
    ToggleModifier(usize),
    ToggleThrows(usize),
}

fn mutation() -> impl Strategy<Value = Mutation> {
    prop_oneof![
        (0..NAMES.len()).prop_map(Mutation::Rename),
        (0..4usize, 0..TYPES.len()).prop_map(|(i, t)| Mutation::RetypeParam(i, t)),
        (0..4usize).prop_map(Mutation::RenameParam),
        (0..5usize, 0..TYPES.len()).prop_map(|(i, t)| Mutation::AddParam(i, t)),
        (0..4usize).prop_map(Mutation::DropParam),
        (0..RETURNS.len()).prop_map(Mutation::Return),
        (0..MODIFIERS.len()).prop_map(Mutation::ToggleModifier),
        (0..EXCEPTIONS.len()).prop_map(Mutation::ToggleThrows),
    ]
}

/// A base signature, up to three mutations and the rendering style.
pub fn pair() -> impl Strategy<Value = (Sig, Vec<Mutation>, bool)> {
    (sig(), prop::collection::vec(mutation(), 0..4), any::<bool>())
}

fn apply(s: &Sig, muts: &[Mutation]) -> Sig {
    let mut s = s.clone();
    for m in muts {
        let n = s.params.len();
        match *m {
            Mutation::Rename(x) => s.name = x,
            Mutation::RetypeParam(i, t) if n > 0 => s.params[i % n].0 = t,
            Mutation::RenameParam(i) if n > 0 => s.params[i % n].1.push_str("Renamed"),
            Mutation::AddParam(i, t) => s.params.insert(i % (n + 1), (t, format!("added{n}"))),
            Mutation::DropParam(i) if n > 0 => {
                s.params.remove(i % n);
            }
            Mutation::Return(r) => s.ret = r,
            Mutation::ToggleModifier(x) => {
                if !s.modifiers.remove(&x) {
                    s.modifiers.insert(x);
                }
            }
            Mutation::ToggleThrows(x)
                if !s.throws.remove(&x) => {
                    s.throws.insert(x);
                }
            _ => {}
        }
    }
    s
}

/// (param, ret, norm) straight from the definitions over the tuples.
fn oracle(a: &Sig, b: &Sig) -> (bool, bool, bool) {
    let types = |s: &Sig| s.params.iter().map(|p| p.0).collect::<Vec<_>>();
    let param = types(a) != types(b);
    let ret = a.ret != b.ret;
    let other = a.name != b.name || a.modifiers != b.modifiers || a.throws != b.throws;
    (param, ret, !param && !ret && other)
}

fn locator(s: &Sig, version: Version) -> MethodLocator {
    MethodLocator {
        file: "Host.java".into(),
        classes: vec!["Host".into()],
        method: NAMES[s.name].into(),
        param_types: None,
        version,
    }
}

/// Classifies the rendered pair and compares against the oracle.
pub fn check_classifier(base: &Sig, muts: &[Mutation], loose: bool) -> Result<(), TestCaseError> {
    let updated = apply(base, muts);
    let pre_loc = locator(base, Version::Pre);
    let post_loc = locator(&updated, Version::Post);
    let before = parse_method(&render(base, false), &pre_loc).unwrap();
    let after = parse_method(&render(&updated, loose), &post_loc).unwrap();
    let change = FocalChange::from_parsed(&before, &after, pre_loc, post_loc).unwrap();
    let (param, ret, norm) = oracle(base, &updated);
    prop_assert_eq!((change.kinds.param, change.kinds.ret, change.kinds.norm), (param, ret, norm));
    prop_assert_eq!(change.obsolete_params().is_ok(), param);
    Ok(())
}
