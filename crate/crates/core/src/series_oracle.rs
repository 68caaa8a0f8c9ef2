//! An independent check on the character machinery: solve the system
//! order-by-order as a formal power series. Reducing the coefficient matrix
//! of a prolonged system splits each derivative order into principal
//! coordinates (pivots — determined by lower data) and parametric ones (free
//! Taylor coefficients). For an involutive system the parametric count at
//! order q + r must equal the Hilbert polynomial at r; the comparison is done
//! by callers so that this module stays independent of the counting code. It
//! shares only the exact linear algebra kernel.

use serde::Serialize;

use crate::jets::prolong;
use crate::system::{JetCoordinate, PDESystem};

/// The order-`order` slice of a truncated power-series solution.
#[derive(Clone, Debug)]
pub struct TaylorLayer {
    pub order: u32,
    /// Pivot coordinates: Taylor coefficients determined by the equations.
    pub principal: Vec<JetCoordinate>,
    /// Free Taylor coefficients at this order.
    pub parametric: Vec<JetCoordinate>,
}

/// Per-layer counts plus the solved-form stability verdict, in the shape the
/// analysis report embeds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub levels: u32,
    pub layers: Vec<LayerCounts>,
    pub solved_form_stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerCounts {
    pub order: u32,
    pub principal: u64,
    pub parametric: u64,
}

/// Classify every jet coordinate of order ≤ q + `levels` as principal or
/// parametric, using one joint reduction of the `levels`-fold prolongation.
pub fn classify_layers(s: &PDESystem, levels: u32) -> Vec<TaylorLayer> {
    let p = prolong(s, levels);
    let top = p.q();
    let matrix = p.coefficient_matrix(top);
    let labels = matrix.labels().unwrap();
    let mut principal = vec![false; labels.len()];
    for pc in matrix.pivot_columns() {
        principal[pc] = true;
    }
    let mut layers: Vec<TaylorLayer> = (0..=top)
        .map(|order| TaylorLayer {
            order,
            principal: Vec::new(),
            parametric: Vec::new(),
        })
        .collect();
    for (i, coord) in labels.iter().enumerate() {
        let layer = &mut layers[coord.order() as usize];
        if principal[i] {
            layer.principal.push(coord.clone());
        } else {
            layer.parametric.push(coord.clone());
        }
    }
    layers
}

/// Pivot coordinates of the `level`-fold prolongation.
fn pivot_set(s: &PDESystem, level: u32) -> std::collections::BTreeSet<JetCoordinate> {
    let p = prolong(s, level);
    let matrix = p.coefficient_matrix(p.q());
    let labels = matrix.labels().unwrap();
    matrix
        .pivot_columns()
        .into_iter()
        .map(|pc| labels[pc].clone())
        .collect()
}

/// Does the principal/parametric split stabilize as the truncation deepens?
/// For each level ℓ < `levels`, the pivot coordinates of the ℓ-fold
/// prolongation must be exactly the order-≤ q+ℓ pivots of the (ℓ+1)-fold
/// one. A system that fails this is missing lower-order information: some
/// Taylor coefficient that looks free at one truncation depth is constrained
/// at the next, so truncated series solving would silently over-count.
/// Involutive systems pass at every depth.
pub fn solved_form_condition_check(s: &PDESystem, levels: u32) -> bool {
    let q = s.q();
    let mut current = pivot_set(s, 0);
    for level in 0..levels {
        let next = pivot_set(s, level + 1);
        let cutoff = q + level;
        let restricted: std::collections::BTreeSet<JetCoordinate> = next
            .iter()
            .filter(|c| c.order() <= cutoff)
            .cloned()
            .collect();
        if current != restricted {
            return false;
        }
        current = next;
    }
    true
}

/// Counts-only view of `classify_layers` plus the stability verdict.
pub fn oracle_summary(s: &PDESystem, levels: u32) -> OracleSummary {
    let layers = classify_layers(s, levels)
        .into_iter()
        .map(|layer| LayerCounts {
            order: layer.order,
            principal: layer.principal.len() as u64,
            parametric: layer.parametric.len() as u64,
        })
        .collect();
    OracleSummary {
        levels,
        layers,
        solved_form_stable: solved_form_condition_check(s, levels),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::system::{FieldDecl, LinearEquation};
    use crate::MultiIndex;

    fn jc(field: usize, entries: &[u32]) -> JetCoordinate {
        JetCoordinate::new(field, MultiIndex::new(entries.to_vec()))
    }

    fn wave() -> PDESystem {
        let eq = LinearEquation::from_terms(vec![
            (jc(1, &[2, 0, 0, 0]), rat(1)),
            (jc(1, &[0, 2, 0, 0]), rat(1)),
            (jc(1, &[0, 0, 2, 0]), rat(1)),
            (jc(1, &[0, 0, 0, 2]), rat(-1)),
        ])
        .unwrap();
        PDESystem::new(
            "wave",
            vec!["x".into(), "y".into(), "z".into(), "t".into()],
            vec![FieldDecl::scalar("phi")],
            vec![],
            vec![eq],
        )
        .unwrap()
    }

    #[test]
    fn wave_layers_split_as_expected() {
        let layers = classify_layers(&wave(), 2);
        let counts: Vec<(u32, usize, usize)> = layers
            .iter()
            .map(|l| (l.order, l.principal.len(), l.parametric.len()))
            .collect();
        // Orders 0 and 1 are untouched; at order q+r one coordinate per
        // prolongation level is principal: 10-1, 20-4, 35-10 split.
        assert_eq!(
            counts,
            vec![(0, 0, 1), (1, 0, 4), (2, 1, 9), (3, 4, 16), (4, 10, 25)]
        );
        // The principal coordinate at order 2 is the leading one, phi_tt.
        assert_eq!(layers[2].principal, vec![jc(1, &[0, 0, 0, 2])]);
    }

    #[test]
    fn wave_split_is_stable() {
        assert!(solved_form_condition_check(&wave(), 3));
    }

    #[test]
    fn hidden_condition_breaks_stability() {
        // v_y + u = 0, v_x = 0 hides u_x = 0; at truncation depth 0 the
        // coefficient u_x looks free, one level deeper it is principal.
        let e1 =
            LinearEquation::from_terms(vec![(jc(2, &[0, 1]), rat(1)), (jc(1, &[0, 0]), rat(1))])
                .unwrap();
        let e2 = LinearEquation::from_terms(vec![(jc(2, &[1, 0]), rat(1))]).unwrap();
        let s = PDESystem::new(
            "hidden",
            vec!["x".into(), "y".into()],
            vec![FieldDecl::scalar("u"), FieldDecl::scalar("v")],
            vec![],
            vec![e1, e2],
        )
        .unwrap();
        assert!(!solved_form_condition_check(&s, 1));
    }

    #[test]
    fn summary_matches_layers() {
        let s = wave();
        let summary = oracle_summary(&s, 1);
        assert_eq!(summary.levels, 1);
        assert!(summary.solved_form_stable);
        assert_eq!(summary.layers.len(), 4);
        assert_eq!(
            summary
                .layers
                .iter()
                .map(|l| l.parametric)
                .collect::<Vec<_>>(),
            vec![1, 4, 9, 16]
        );
    }
}
