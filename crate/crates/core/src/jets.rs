//! Jet-level operations: prolongation, the principal symbol, Cartan
//! characters, involutivity of the symbol, and projection of prolonged
//! systems back down (which is where integrability conditions surface).
//!
//! Everything here assumes the declared coordinates are generic for the
//! system at hand (the class-descending pivot counts are only meaningful in
//! such coordinates). Degenerate coordinate choices do not break any single
//! operation, but they can make the completion loop built on top of these
//! primitives prolong forever; the loop's step budget turns that into an
//! error instead of a hang.

use num_bigint::BigInt;

use crate::combinatorics::{binomial, class_size, fiber_dim, multi_indices_up_to, order_count};
use crate::linalg::RationalMatrix;
use crate::system::{jet_coordinates_exact, JetCoordinate, LinearEquation, PDESystem, SystemError};

/// The principal symbol: coefficients of the order-q derivatives only, one
/// row per equation (rows of lower-order equations are zero rows), columns
/// in canonical order over the order-q jet coordinates.
pub struct SymbolMatrix {
    pub matrix: RationalMatrix,
    pub order: u32,
}

/// Cartan characters at one order: for each class k (1-based), β^(k) counts
/// the class-k pivots of the reduced symbol and α^(k) the remaining
/// (parametric) class-k coordinates, so α^(k) + β^(k) is the class size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Characters {
    pub n: usize,
    pub q: u32,
    pub beta: Vec<BigInt>,
    pub alpha: Vec<BigInt>,
}

impl Characters {
    /// Number of multiplicative variables of the reduced symbol, Σ k·β^(k):
    /// the rank the prolonged symbol must reach for involutivity.
    pub fn num_multiplicative(&self) -> BigInt {
        self.beta
            .iter()
            .enumerate()
            .map(|(i, b)| BigInt::from(i + 1) * b)
            .sum()
    }
}

/// Formal derivative of a linear equation by the multi-index `nu`: every
/// term's derivative index is raised by `nu`, coefficients untouched.
pub fn formal_derivative(eq: &LinearEquation, nu: &crate::MultiIndex) -> LinearEquation {
    LinearEquation::from_terms(eq.coefficients().iter().map(|(coord, coeff)| {
        (
            JetCoordinate::new(coord.field, coord.index.plus(nu)),
            coeff.clone(),
        )
    }))
    .expect("a derivative of a non-trivial equation is non-trivial")
}

/// Prolongation: the original equations together with all their formal
/// derivatives up to total order `r`. The result is regarded as a system of
/// order q + r even though the originals remain at their own orders.
pub fn prolong(s: &PDESystem, r: u32) -> PDESystem {
    let mut equations = Vec::new();
    for eq in s.equations() {
        for nu in multi_indices_up_to(s.n(), r) {
            if nu.order() == 0 {
                equations.push(eq.clone());
            } else {
                equations.push(formal_derivative(eq, &nu));
            }
        }
    }
    s.with_equations(equations)
        .expect("prolongation preserves system validity")
        .assume_order(s.q() + r)
        .expect("prolonged equations cannot exceed order q + r")
}

pub fn symbol(s: &PDESystem) -> SymbolMatrix {
    let q = s.q();
    let labels = jet_coordinates_exact(s.n(), q, s.m());
    let position: std::collections::HashMap<&JetCoordinate, usize> =
        labels.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let rows = s
        .equations()
        .iter()
        .map(|eq| {
            eq.coefficients()
                .iter()
                .filter(|(coord, _)| coord.order() == q)
                .map(|(coord, coeff)| (position[coord], coeff.clone()))
                .collect()
        })
        .collect();
    SymbolMatrix {
        matrix: RationalMatrix::from_sparse_rows(labels.len(), rows).with_labels(labels),
        order: q,
    }
}

/// Dimension of the symbol's solution space at order q: the order-q
/// coordinate count minus the symbol rank.
pub fn dim_s(s: &PDESystem) -> BigInt {
    order_count(s.n(), s.q(), s.m()) - BigInt::from(symbol(s).matrix.rank())
}

/// Cartan characters of the system's symbol, classes 1..n.
pub fn characters(s: &PDESystem) -> Characters {
    let n = s.n();
    let q = s.q();
    let sym = symbol(s);
    let labels = sym.matrix.labels().unwrap();
    let mut beta = vec![BigInt::from(0u8); n];
    for pc in sym.matrix.pivot_columns() {
        let k = labels[pc]
            .class()
            .expect("order-q columns with q ≥ 1 always have a class");
        beta[k - 1] += 1;
    }
    let alpha = (1..=n)
        .map(|k| class_size(n, q, s.m(), k) - &beta[k - 1])
        .collect();
    Characters { n, q, beta, alpha }
}

/// Involutivity test for the symbol: the prolonged symbol's rank equals the
/// number of multiplicative variables Σ k·β^(k).
pub fn symbol_involutive(s: &PDESystem) -> bool {
    let expected = characters(s).num_multiplicative();
    let prolonged_rank = BigInt::from(symbol(&prolong(s, 1)).matrix.rank());
    prolonged_rank == expected
}

/// Does projecting the once-prolonged system back down cut the solution set
/// further? Compares dim R(prolong) − dim S(prolong) against dim R: strict
/// inequality means the prolongation carries lower-order information (an
/// integrability condition) that the original equations do not.
pub fn has_integrability_conditions(s: &PDESystem) -> bool {
    let p = prolong(s, 1);
    let dim_rp = fiber_dim(p.n(), p.q(), p.m()) - BigInt::from(p.coefficient_matrix(p.q()).rank());
    let projected_dim = dim_rp - dim_s(&p);
    projected_dim < s.dim_r()
}

/// Project a system down to order `target`: row-reduce the full coefficient
/// matrix (columns are order-descending, so pivots of order ≤ target lead
/// rows that involve only order-≤ target coordinates) and keep exactly those
/// rows. The result is regarded as a system of order `target`.
pub fn project(s: &PDESystem, target: u32) -> Result<PDESystem, SystemError> {
    assert!(target <= s.q(), "projection cannot raise the order");
    let matrix = s.coefficient_matrix(s.q());
    let labels = matrix.labels().unwrap().to_vec();
    let reduced = matrix.rref();
    let mut equations = Vec::new();
    for (row, &pc) in reduced.pivot_cols.iter().enumerate() {
        if labels[pc].order() <= target {
            equations.push(LinearEquation::from_terms(
                reduced
                    .matrix
                    .row(row)
                    .iter()
                    .map(|(c, v)| (labels[*c as usize].clone(), v.clone())),
            )?);
        }
    }
    s.with_equations(equations)?.assume_order(target)
}

/// Characters of the r-fold prolongation, computed from the characters at
/// order q alone. Valid once the symbol is involutive; `r ≥ 1`.
pub fn propagate_characters(c: &Characters, r: u32) -> Characters {
    assert!(r >= 1, "propagation needs r ≥ 1");
    let n = c.n;
    let combine = |v: &[BigInt]| -> Vec<BigInt> {
        (1..=n)
            .map(|k| {
                (k..=n)
                    .map(|i| {
                        binomial((r as u64) + (i as u64) - (k as u64) - 1, (r as u64) - 1)
                            * &v[i - 1]
                    })
                    .sum()
            })
            .collect()
    };
    Characters {
        n,
        q: c.q + r,
        beta: combine(&c.beta),
        alpha: combine(&c.alpha),
    }
}
