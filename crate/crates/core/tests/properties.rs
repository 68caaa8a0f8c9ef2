//! Randomized invariants: the parser must be total (no panics, only
//! structured errors), serialization must be a fixed point of parsing, and
//! the class bookkeeping must partition each jet fiber.

use involute_core::combinatorics::{
    class_size, multi_indices_exact, order_count, to_u64, MultiIndex,
};
use involute_core::linalg::{format_rational, parse_rational, ratio};
use involute_core::{parse, serialize};
use proptest::prelude::*;

proptest! {
    /// Arbitrary bytes never panic the parser.
    #[test]
    fn parser_is_total_on_noise(src in ".{0,160}") {
        let _ = parse(&src);
    }

    /// Token soup drawn from the grammar's own vocabulary explores deep
    /// parser states; still no panics allowed.
    #[test]
    fn parser_is_total_on_token_soup(tokens in proptest::collection::vec(
        prop_oneof![
            Just("system"), Just("coordinates"), Just("fields"), Just("param"),
            Just("gammas"), Just("eq"), Just(":"), Just(";"), Just("{"), Just("}"),
            Just("("), Just(")"), Just("["), Just("]"), Just(","), Just("="),
            Just("+"), Just("-"), Just("*"), Just("/"), Just("d"),
            Just("x"), Just("y"), Just("u"), Just("v"), Just("1"), Just("2"), Just("3/4"),
        ],
        0..60,
    )) {
        let src = tokens.join(" ");
        let _ = parse(&src);
    }

    /// Rational formatting and parsing are mutually inverse.
    #[test]
    fn rational_text_round_trip(num in -10_000i64..10_000, den in 1i64..400) {
        let r = ratio(num, den);
        let text = format_rational(&r);
        prop_assert_eq!(parse_rational(&text).unwrap(), r);
    }

    /// The class sizes partition the top-order fiber: summing over classes
    /// recovers the full count of order-q jet coordinates.
    #[test]
    fn classes_partition_the_fiber(n in 1usize..5, q in 1u32..5, m in 1usize..4) {
        let total: u64 = (1..=n).map(|k| to_u64(&class_size(n, q, m, k))).sum();
        prop_assert_eq!(total, to_u64(&order_count(n, q, m)));
        let monomials = multi_indices_exact(n, q);
        prop_assert_eq!(monomials.len() as u64 * m as u64, total);
    }

    /// Multi-index addition is additive on orders and preserves length.
    #[test]
    fn multi_index_sum_orders(a in proptest::collection::vec(0u32..4, 1..5),
                              b in proptest::collection::vec(0u32..4, 1..5)) {
        let len = a.len().min(b.len());
        let (a, b) = (MultiIndex::new(a[..len].to_vec()), MultiIndex::new(b[..len].to_vec()));
        let sum = a.plus(&b);
        prop_assert_eq!(sum.order(), a.order() + b.order());
        prop_assert_eq!(sum.len(), len);
    }
}

/// (numerator, denominator, field slot, derivative multi-index)
type GeneratedTerm = (i64, i64, usize, Vec<u32>);

#[derive(Debug, Clone)]
struct GeneratedSystem {
    n: usize,
    equations: Vec<Vec<GeneratedTerm>>,
}

fn generated_source(g: &GeneratedSystem) -> String {
    let coords = ["x", "y", "z"];
    let fields = ["u", "v"];
    let mut out = String::from("system generated {\n  coordinates ");
    out.push_str(&coords[..g.n].join(" "));
    out.push_str(";\n  fields u, v;\n");
    for eq in &g.equations {
        out.push_str("  eq:");
        for (i, (num, den, field, index)) in eq.iter().enumerate() {
            let sign = if *num < 0 {
                " - "
            } else if i == 0 {
                " "
            } else {
                " + "
            };
            out.push_str(sign);
            let mag = num.abs();
            if mag != 1 || *den != 1 {
                out.push_str(&mag.to_string());
                if *den != 1 {
                    out.push('/');
                    out.push_str(&den.to_string());
                }
                out.push_str(" * ");
            }
            let derivs: Vec<&str> = index
                .iter()
                .enumerate()
                .flat_map(|(c, k)| vec![coords[c]; *k as usize])
                .collect();
            if !derivs.is_empty() {
                out.push_str("d(");
                out.push_str(&derivs.join(","));
                out.push_str(") ");
            }
            out.push_str(fields[*field]);
        }
        out.push_str(" = 0;\n");
    }
    out.push_str("}\n");
    out
}

fn generated_system() -> impl Strategy<Value = GeneratedSystem> {
    (1usize..=3).prop_flat_map(|n| {
        // Distinct (field, multi-index) keys per equation so independently
        // drawn terms can never cancel to an empty equation.
        let coefficient = (1i64..=9, 1i64..=6, any::<bool>())
            .prop_map(|(num, den, neg)| (if neg { -num } else { num }, den));
        let equation = proptest::collection::btree_map(
            (0usize..2, proptest::collection::vec(0u32..=2, n)),
            coefficient,
            1..4,
        )
        .prop_map(|terms| {
            terms
                .into_iter()
                .map(|((field, index), (num, den))| (num, den, field, index))
                .collect::<Vec<_>>()
        });
        proptest::collection::vec(equation, 1..4)
            .prop_map(move |equations| GeneratedSystem { n, equations })
    })
}

proptest! {
    /// Any well-formed generated source parses, and its serialized form is a
    /// fixed point: parse(serialize(parse(s))) literally reproduces
    /// serialize(parse(s)) and the same coefficient matrix.
    #[test]
    fn serialization_is_a_parse_fixed_point(g in generated_system()) {
        let src = generated_source(&g);
        let first = parse(&src).expect("generated source must parse");
        let text = serialize(&first).unwrap();
        let second = parse(&text).expect("serialized output must parse");
        prop_assert_eq!(serialize(&second).unwrap(), text);
        let q = first.q();
        prop_assert_eq!(first.coefficient_matrix(q), second.coefficient_matrix(q));
    }
}
