mod common;

use common::usage::{caller, check_usage};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn usage_chunks_grow_only_in_the_direction_of_the_change(c in caller()) {
        check_usage(&c)?;
    }
}
