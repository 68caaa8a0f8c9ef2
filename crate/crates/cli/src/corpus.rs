//! The bundled example systems and their reference tables.
//!
//! Each entry embeds its source text, so `involute corpus` works no matter
//! where the binary is invoked, and records the values the analysis must
//! reproduce: completion shape, characters, Hilbert polynomials, the
//! gauge-corrected data, and the degree-of-freedom count. [`verify`]
//! re-analyzes an entry and reports every field that disagrees.

use involute_core::linalg::{format_rational, parse_rational};
use involute_core::{analyze, AnalysisReport, AnalyzeOptions, Polynomial, Rational};

pub struct CorpusEntry {
    /// Listing name; also the file stem under `corpus/`.
    pub name: &'static str,
    /// Source path relative to the repository root.
    pub path: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
    pub expected: Expected,
}

/// Reference values for one entry. Polynomials are coefficient lists in
/// ascending powers of r, written as exact rationals. `gauge`, `corrected`,
/// and `alpha_bar` are `None` for systems without gauge freedom, where the
/// corrected data must coincide with the uncorrected.
pub struct Expected {
    pub projections: u32,
    pub prolongations: u32,
    pub dim: u64,
    pub beta: [u64; 4],
    pub alpha: [u64; 4],
    pub hilbert: &'static [&'static str],
    pub gauge: Option<&'static [&'static str]>,
    pub corrected: Option<&'static [&'static str]>,
    pub alpha_bar: Option<[&'static str; 4]>,
    pub dof: &'static str,
}

pub const ENTRIES: &[CorpusEntry] = &[
    CorpusEntry {
        name: "wave",
        path: "corpus/wave.pde",
        summary: "scalar wave equation; involutive as given",
        source: include_str!("../../../corpus/wave.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 14,
            beta: [0, 0, 0, 1],
            alpha: [4, 3, 2, 0],
            hilbert: &["9", "6", "1"],
            gauge: None,
            corrected: None,
            alpha_bar: None,
            dof: "1",
        },
    },
    CorpusEntry {
        name: "maxwell",
        path: "corpus/maxwell.pde",
        summary: "source-free electromagnetism with one gauge function",
        source: include_str!("../../../corpus/maxwell.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 56,
            beta: [0, 0, 1, 3],
            alpha: [16, 12, 7, 1],
            hilbert: &["36", "73/3", "9/2", "1/6"],
            gauge: Some(&["20", "37/3", "5/2", "1/6"]),
            corrected: Some(&["16", "12", "2"]),
            alpha_bar: Some(["6", "6", "4", "0"]),
            dof: "2",
        },
    },
    CorpusEntry {
        name: "proca",
        path: "corpus/proca.pde",
        summary: "massive vector; completion finds the divergence constraint",
        source: include_str!("../../../corpus/proca.pde"),
        expected: Expected {
            projections: 2,
            prolongations: 0,
            dim: 51,
            beta: [1, 1, 2, 4],
            alpha: [15, 11, 6, 0],
            hilbert: &["32", "20", "3"],
            gauge: None,
            corrected: None,
            alpha_bar: None,
            dof: "3",
        },
    },
    CorpusEntry {
        name: "proca_stueckelberg",
        path: "corpus/proca_stueckelberg.pde",
        summary: "massive vector with its compensating scalar",
        source: include_str!("../../../corpus/proca_stueckelberg.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 70,
            beta: [0, 0, 1, 4],
            alpha: [20, 15, 9, 1],
            hilbert: &["45", "91/3", "11/2", "1/6"],
            gauge: Some(&["20", "37/3", "5/2", "1/6"]),
            corrected: Some(&["25", "18", "3"]),
            alpha_bar: Some(["10", "9", "6", "0"]),
            dof: "3",
        },
    },
    CorpusEntry {
        name: "gr_normal",
        path: "corpus/gr_normal.pde",
        summary: "linearized gravity, normal-form presentation",
        source: include_str!("../../../corpus/gr_normal.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 140,
            beta: [0, 0, 4, 6],
            alpha: [40, 30, 16, 4],
            hilbert: &["90", "184/3", "12", "2/3"],
            gauge: Some(&["80", "148/3", "10", "2/3"]),
            corrected: Some(&["10", "12", "2"]),
            alpha_bar: Some(["0", "6", "4", "0"]),
            dof: "2",
        },
    },
    CorpusEntry {
        name: "cgr",
        path: "corpus/cgr.pde",
        summary: "linearized gravity via the Einstein tensor",
        source: include_str!("../../../corpus/cgr.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 140,
            beta: [0, 0, 4, 6],
            alpha: [40, 30, 16, 4],
            hilbert: &["90", "184/3", "12", "2/3"],
            gauge: Some(&["80", "148/3", "10", "2/3"]),
            corrected: Some(&["10", "12", "2"]),
            alpha_bar: Some(["0", "6", "4", "0"]),
            dof: "2",
        },
    },
    CorpusEntry {
        name: "fp_massless",
        path: "corpus/fp_massless.pde",
        summary: "massless spin-2 operator",
        source: include_str!("../../../corpus/fp_massless.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 140,
            beta: [0, 0, 4, 6],
            alpha: [40, 30, 16, 4],
            hilbert: &["90", "184/3", "12", "2/3"],
            gauge: Some(&["80", "148/3", "10", "2/3"]),
            corrected: Some(&["10", "12", "2"]),
            alpha_bar: Some(["0", "6", "4", "0"]),
            dof: "2",
        },
    },
    CorpusEntry {
        name: "fp_detuned",
        path: "corpus/fp_detuned.pde",
        summary: "spin-2 operator with detuned signs; no gauge identity",
        source: include_str!("../../../corpus/fp_detuned.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 140,
            beta: [0, 0, 0, 10],
            alpha: [40, 30, 20, 0],
            hilbert: &["90", "60", "10"],
            gauge: None,
            corrected: None,
            alpha_bar: None,
            dof: "10",
        },
    },
    CorpusEntry {
        name: "fp_massive",
        path: "corpus/fp_massive.pde",
        summary: "massive spin-2 with the tuned mass term",
        source: include_str!("../../../corpus/fp_massive.pde"),
        expected: Expected {
            projections: 4,
            prolongations: 0,
            dim: 106,
            beta: [8, 7, 10, 10],
            alpha: [32, 23, 10, 0],
            hilbert: &["65", "38", "5"],
            gauge: None,
            corrected: None,
            alpha_bar: None,
            dof: "5",
        },
    },
    CorpusEntry {
        name: "fp_massive_detuned",
        path: "corpus/fp_massive_detuned.pde",
        summary: "massive spin-2 with the wrong-sign trace mass",
        source: include_str!("../../../corpus/fp_massive_detuned.pde"),
        expected: Expected {
            projections: 2,
            prolongations: 0,
            dim: 120,
            beta: [4, 4, 8, 10],
            alpha: [36, 26, 12, 0],
            hilbert: &["74", "44", "6"],
            gauge: None,
            corrected: None,
            alpha_bar: None,
            dof: "6",
        },
    },
    CorpusEntry {
        name: "fp_stueckelberg",
        path: "corpus/fp_stueckelberg.pde",
        summary: "massive spin-2 with compensating vector and scalar",
        source: include_str!("../../../corpus/fp_stueckelberg.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 210,
            beta: [0, 0, 5, 10],
            alpha: [60, 45, 25, 5],
            hilbert: &["135", "275/3", "35/2", "5/6"],
            gauge: Some(&["100", "185/3", "25/2", "5/6"]),
            corrected: Some(&["35", "30", "5"]),
            alpha_bar: Some(["10", "15", "10", "0"]),
            dof: "5",
        },
    },
    CorpusEntry {
        name: "2form",
        path: "corpus/2form.pde",
        summary: "free two-form with reducible gauge freedom",
        source: include_str!("../../../corpus/2form.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 84,
            beta: [0, 1, 2, 3],
            alpha: [24, 17, 10, 3],
            hilbert: &["54", "75/2", "8", "1/2"],
            gauge: Some(&["50", "65/2", "7", "1/2"]),
            corrected: Some(&["4", "5", "1"]),
            alpha_bar: Some(["0", "2", "2", "0"]),
            dof: "1",
        },
    },
    CorpusEntry {
        name: "2form_massive",
        path: "corpus/2form_massive.pde",
        summary: "massive two-form",
        source: include_str!("../../../corpus/2form_massive.pde"),
        expected: Expected {
            projections: 2,
            prolongations: 0,
            dim: 65,
            beta: [4, 5, 6, 6],
            alpha: [20, 13, 6, 0],
            hilbert: &["39", "22", "3"],
            gauge: None,
            corrected: None,
            alpha_bar: None,
            dof: "3",
        },
    },
    CorpusEntry {
        name: "2form_stueckelberg",
        path: "corpus/2form_stueckelberg.pde",
        summary: "massive two-form with its compensating vector",
        source: include_str!("../../../corpus/2form_stueckelberg.pde"),
        expected: Expected {
            projections: 0,
            prolongations: 0,
            dim: 140,
            beta: [0, 1, 3, 6],
            alpha: [40, 29, 17, 4],
            hilbert: &["90", "371/6", "25/2", "2/3"],
            gauge: Some(&["70", "269/6", "19/2", "2/3"]),
            corrected: Some(&["20", "17", "3"]),
            alpha_bar: Some(["6", "8", "6", "0"]),
            dof: "3",
        },
    },
];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

fn rat(s: &str) -> Rational {
    parse_rational(s).expect("reference values are valid rationals")
}

fn poly(coeffs: &[&str]) -> Polynomial {
    Polynomial::from_coeffs(coeffs.iter().map(|c| rat(c)).collect())
}

fn push_mismatch<T: std::fmt::Display>(out: &mut Vec<String>, what: &str, expected: T, got: T) {
    out.push(format!("{what}: expected {expected}, got {got}"));
}

/// Compare a report against the entry's reference values; returns one line
/// per disagreeing field, so an empty result is a pass.
pub fn diff(entry: &CorpusEntry, report: &AnalysisReport) -> Vec<String> {
    let e = &entry.expected;
    let mut out = Vec::new();
    if report.projections != e.projections {
        push_mismatch(&mut out, "projections", e.projections, report.projections);
    }
    if report.prolongations != e.prolongations {
        push_mismatch(
            &mut out,
            "prolongations",
            e.prolongations,
            report.prolongations,
        );
    }
    if report.dim != e.dim {
        push_mismatch(&mut out, "dim", e.dim, report.dim);
    }
    if report.beta != e.beta {
        push_mismatch(
            &mut out,
            "beta",
            format!("{:?}", e.beta),
            format!("{:?}", report.beta),
        );
    }
    if report.alpha != e.alpha {
        push_mismatch(
            &mut out,
            "alpha",
            format!("{:?}", e.alpha),
            format!("{:?}", report.alpha),
        );
    }
    let h = poly(e.hilbert);
    if report.hilbert != h {
        push_mismatch(&mut out, "H", h.to_string(), report.hilbert.to_string());
    }
    match (e.gauge, report.gauge.as_ref()) {
        (None, None) => {}
        (Some(g), Some(rg)) => {
            let g = poly(g);
            if *rg != g {
                push_mismatch(&mut out, "G", g.to_string(), rg.to_string());
            }
        }
        (want, got) => {
            push_mismatch(
                &mut out,
                "G",
                want.map_or("absent".to_string(), |g| poly(g).to_string()),
                got.map_or("absent".to_string(), |g| g.to_string()),
            );
        }
    }
    let corrected = e.corrected.map(poly).unwrap_or_else(|| h.clone());
    if report.corrected_hilbert != corrected {
        push_mismatch(
            &mut out,
            "H_bar",
            corrected.to_string(),
            report.corrected_hilbert.to_string(),
        );
    }
    let alpha_bar: Vec<Rational> = match e.alpha_bar {
        Some(ab) => ab.iter().map(|c| rat(c)).collect(),
        None => e
            .alpha
            .iter()
            .map(|&a| Rational::from_integer(a.into()))
            .collect(),
    };
    if report.alpha_bar != alpha_bar {
        push_mismatch(
            &mut out,
            "alpha_bar",
            format!(
                "{:?}",
                alpha_bar.iter().map(format_rational).collect::<Vec<_>>()
            ),
            format!(
                "{:?}",
                report
                    .alpha_bar
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
            ),
        );
    }
    if !report.compatible || !report.compatibility.eq(&Rational::from_integer(0.into())) {
        out.push(format!(
            "compatibility: expected Z0 = 0, got Z0 = {}",
            format_rational(&report.compatibility)
        ));
    }
    let dof = rat(e.dof);
    if report.dof != dof {
        push_mismatch(
            &mut out,
            "dof",
            format_rational(&dof),
            format_rational(&report.dof),
        );
    }
    out
}

/// Analyze one entry and diff it against its reference table. `Err` carries a
/// parse or completion failure, which for bundled sources is itself a defect.
pub fn verify(entry: &CorpusEntry) -> Result<(AnalysisReport, Vec<String>), String> {
    let system = involute_core::parser::parse_named(entry.source, Some(entry.path))
        .map_err(|e| e.to_string())?;
    let report = analyze(&system, &AnalyzeOptions::default()).map_err(|e| e.to_string())?;
    let mismatches = diff(entry, &report);
    Ok((report, mismatches))
}
