//! Shifted-parameter recheck.
//!
//! The analysis substitutes numeric parameter values before any linear
//! algebra runs, so a declared value sitting at a special point (a mass
//! tuned to zero, a coefficient that collapses a rank) silently changes the
//! answer. The recheck re-runs the analysis with every parameter shifted to
//! a nearby value and compares the invariant part of the two reports.

use involute_core::{AnalysisReport, Rational};
use std::collections::BTreeMap;

/// The shifted probe value: v + 1, skipping over zero (a shift TO zero would
/// manufacture a special point rather than escape one).
pub fn shift_value(v: &Rational) -> Rational {
    let one = Rational::from_integer(1.into());
    let bumped = v + &one;
    if bumped == Rational::from_integer(0.into()) {
        bumped + one
    } else {
        bumped
    }
}

pub fn shifted_params(params: &BTreeMap<String, Rational>) -> BTreeMap<String, Rational> {
    params
        .iter()
        .map(|(name, v)| (name.clone(), shift_value(v)))
        .collect()
}

/// Whether two reports agree on everything that does not depend on the
/// concrete parameter values: completion shape, characters, polynomials, and
/// the derived counts. The completed equations themselves are excluded — they
/// always embed the substituted values.
pub fn invariants_match(a: &AnalysisReport, b: &AnalysisReport) -> bool {
    a.projections == b.projections
        && a.prolongations == b.prolongations
        && a.completed_order == b.completed_order
        && a.dim == b.dim
        && a.rank == b.rank
        && a.beta == b.beta
        && a.alpha == b.alpha
        && a.num_multiplicative == b.num_multiplicative
        && a.hilbert == b.hilbert
        && a.gauge == b.gauge
        && a.corrected_hilbert == b.corrected_hilbert
        && a.alpha_bar == b.alpha_bar
        && a.compatibility == b.compatibility
        && a.strength == b.strength
        && a.compatible == b.compatible
        && a.dof == b.dof
        && a.free_functions == b.free_functions
}

#[cfg(test)]
mod tests {
    use super::*;
    use involute_core::linalg::ratio;

    fn rat(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn shift_moves_off_the_value_and_avoids_zero() {
        assert_eq!(shift_value(&rat(1)), rat(2));
        assert_eq!(shift_value(&rat(0)), rat(1));
        assert_eq!(shift_value(&rat(-1)), rat(1));
        assert_eq!(shift_value(&ratio(-3, 2)), ratio(-1, 2));
    }
}
