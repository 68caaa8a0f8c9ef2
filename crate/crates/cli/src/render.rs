//! Terminal rendering of an analysis report, mirroring the layout of the
//! reference tables: completion shape, characters, Hilbert polynomials, the
//! gauge-corrected data, and the derived counts.

use involute_core::linalg::format_rational;
use involute_core::{AnalysisReport, Rational};
use std::fmt::Write;

fn tuple<T: std::fmt::Display>(values: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn rational_tuple(values: &[Rational]) -> String {
    tuple(values.iter().map(format_rational))
}

pub fn render_report(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}  (n = {}, m = {}, order {})",
        r.name, r.n, r.m, r.input_order
    );
    if r.projections == 0 && r.prolongations == 0 {
        let _ = writeln!(out, "  completion: already involutive");
    } else {
        let _ = writeln!(
            out,
            "  completion: {} projection{}, {} prolongation{} (final order {})",
            r.projections,
            if r.projections == 1 { "" } else { "s" },
            r.prolongations,
            if r.prolongations == 1 { "" } else { "s" },
            r.completed_order,
        );
    }
    if let Some(steps) = &r.trace {
        for (i, s) in steps.iter().enumerate() {
            let _ = writeln!(
                out,
                "    {}. {:?}  order {} -> {}  dim {} -> {}  rank {} -> {}",
                i + 1,
                s.action,
                s.order_before,
                s.order_after,
                s.dim_before,
                s.dim_after,
                s.rank_before,
                s.rank_after,
            );
        }
    }
    let _ = writeln!(
        out,
        "  dim = {}   independent equations = {}",
        r.dim, r.rank
    );
    let _ = writeln!(
        out,
        "  beta  = {}   (multiplicative directions: {})",
        tuple(r.beta.iter()),
        r.num_multiplicative
    );
    let _ = writeln!(out, "  alpha = {}", tuple(r.alpha.iter()));
    let _ = writeln!(out, "  H(r)  = {}", r.hilbert);
    if let Some(g) = &r.gauge {
        let _ = writeln!(out, "  gammas = {}", tuple(r.gammas.iter()));
        let _ = writeln!(out, "  G(r)  = {}", g);
        let _ = writeln!(out, "  H_bar(r) = {}", r.corrected_hilbert);
        let _ = writeln!(out, "  alpha_bar = {}", rational_tuple(&r.alpha_bar));
    }
    let _ = writeln!(
        out,
        "  Z0 = {} ({})   Z1 = {}   dof = {}",
        format_rational(&r.compatibility),
        if r.compatible {
            "compatible"
        } else {
            "INCOMPATIBLE"
        },
        format_rational(&r.strength),
        format_rational(&r.dof),
    );
    let f: Vec<String> = r
        .free_functions
        .iter()
        .map(|v| {
            v.as_ref()
                .map_or_else(|| "n/a".to_string(), format_rational)
        })
        .collect();
    let _ = writeln!(out, "  f = {}", tuple(f));
    if let Some(holds) = r.postulated_bound_holds {
        let _ = writeln!(
            out,
            "  gauge-order bound: {}",
            if holds { "holds" } else { "violated" }
        );
    }
    if let Some(oracle) = &r.oracle {
        let _ = writeln!(
            out,
            "  series oracle (orders 0..{}):",
            oracle.levels + r.completed_order
        );
        for layer in &oracle.layers {
            let mark = if layer.order >= r.completed_order {
                let predicted = r.hilbert.eval_at(layer.order - r.completed_order);
                let actual = Rational::from_integer(layer.parametric.into());
                if predicted == actual {
                    "  = H"
                } else {
                    "  != H"
                }
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "    order {}: principal {}, parametric {}{}",
                layer.order, layer.principal, layer.parametric, mark
            );
        }
        let _ = writeln!(
            out,
            "    solved form stable: {}",
            if oracle.solved_form_stable {
                "yes"
            } else {
                "NO"
            }
        );
    }
    if let Some(special) = r.parameter_special {
        let _ = writeln!(
            out,
            "  parameter recheck: {}",
            if special {
                "invariants CHANGE at shifted values (declared values are special)"
            } else {
                "invariants stable at shifted values"
            }
        );
    }
    for w in &r.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    out
}
