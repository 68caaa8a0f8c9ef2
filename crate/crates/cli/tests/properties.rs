//! Randomized invariants of the parameter-recheck shift: probing must always
//! move off the declared value and must never land on zero, or the probe
//! would silently test a *more* degenerate system than the declared one.

use involute_cli::recheck::{shift_value, shifted_params};
use involute_core::linalg::ratio;
use proptest::prelude::*;

proptest! {
    #[test]
    fn shift_leaves_the_value_and_avoids_zero(num in -500i64..500, den in 1i64..40) {
        let v = ratio(num, den);
        let shifted = shift_value(&v);
        prop_assert_ne!(&shifted, &v);
        prop_assert_ne!(shifted, ratio(0, 1));
    }

    #[test]
    fn shift_applies_to_every_parameter(values in proptest::collection::btree_map(
        "[a-z]{1,6}",
        (-50i64..50, 1i64..10),
        0..5,
    )) {
        let params: std::collections::BTreeMap<String, _> =
            values.into_iter().map(|(k, (n, d))| (k, ratio(n, d))).collect();
        let shifted = shifted_params(&params);
        prop_assert_eq!(shifted.len(), params.len());
        for (name, value) in &params {
            prop_assert_ne!(&shifted[name], value);
        }
    }
}
