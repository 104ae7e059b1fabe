//! Random line-oriented files for diff round trips.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use synbc_core::snapshot::{unified_diff, DiffText};

pub fn file() -> impl Strategy<Value = String> {
    let line = prop::sample::select(vec!["a", "b", "c", "  int x = 1;", "}", "", "return y;", "\tfoo(bar);"]);
    (prop::collection::vec(line, 0..30), any::<bool>()).prop_map(|(lines, trailing)| {
        let mut s = lines.join("\n");
        if trailing && !s.is_empty() {
            s.push('\n');
        }
        s
    })
}

pub fn check_round_trip(a: &str, b: &str, context: usize) -> Result<(), TestCaseError> {
    let diff = unified_diff(a, b, context);
    prop_assert_eq!(diff.apply(a).unwrap(), b);
    let reparsed = DiffText::parse_unified(&diff.render_unified()).unwrap();
    prop_assert_eq!(reparsed.apply(a).unwrap(), b);
    prop_assert_eq!(diff.is_empty(), a == b);
    Ok(())
}
