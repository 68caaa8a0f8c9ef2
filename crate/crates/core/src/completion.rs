//! Involutive completion: alternate prolongation (when the symbol is not yet
//! involutive) and projection of the once-prolonged system (when it carries
//! integrability conditions) until the system is involutive. Every step is
//! recorded, and the two invariants that make the procedure trustworthy are
//! asserted as it runs:
//!
//! * the dimension drop produced by a projection equals the drop predicted
//!   from the prolonged system alone (dim after = dim R(prolonged) − dim of
//!   the prolonged symbol's solution space), and
//! * projections strictly decrease the dimension, so the procedure cannot
//!   cycle through projections.
//!
//! Termination is guaranteed for systems whose declared coordinates are
//! generic; a step budget converts the degenerate cases into an error.

use serde::Serialize;

use crate::combinatorics::to_u64;
use crate::jets::{dim_s, has_integrability_conditions, project, prolong, symbol_involutive};
use crate::system::{PDESystem, SystemError};

pub const DEFAULT_MAX_STEPS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepAction {
    /// Symbol not involutive: differentiate everything once more.
    Prolong,
    /// Integrability conditions present: prolong once, project back down,
    /// keeping the exposed lower-order equations.
    Project,
}

/// One completion step. Dimensions are of the solution set on the jet fiber
/// at the system's order before/after the step; ranks are of the full
/// coefficient matrix at those orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionStep {
    pub action: StepAction,
    pub order_before: u32,
    pub order_after: u32,
    pub dim_before: u64,
    pub dim_after: u64,
    pub rank_before: u64,
    pub rank_after: u64,
    pub equations_after: u64,
}

/// The full record of a completion run: the steps taken, how many of each
/// kind, and the involutive system that came out.
#[derive(Clone, Debug, Serialize)]
pub struct CompletionTrace {
    pub steps: Vec<CompletionStep>,
    pub prolongations: u32,
    pub projections: u32,
    pub initial_order: u32,
    pub initial_dim: u64,
    pub result: PDESystem,
}

#[derive(Debug, thiserror::Error)]
pub enum CompletionError {
    #[error(
        "completion did not terminate within {max_steps} steps; the declared \
         coordinates are likely degenerate for this system"
    )]
    BudgetExhausted { max_steps: usize },
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Complete `s` to an involutive system, recording every prolongation and
/// projection. `max_steps` bounds the total number of steps of either kind.
pub fn cartan_kuranishi(
    s: &PDESystem,
    max_steps: usize,
) -> Result<CompletionTrace, CompletionError> {
    if s.q() == 0 {
        return Err(SystemError::AlgebraicSystem.into());
    }
    let mut work = s.clone();
    let mut steps = Vec::new();
    let mut prolongations = 0u32;
    let mut projections = 0u32;
    let initial_order = work.q();
    let initial_dim = to_u64(&work.dim_r());

    loop {
        if steps.len() >= max_steps
            && (!symbol_involutive(&work) || has_integrability_conditions(&work))
        {
            return Err(CompletionError::BudgetExhausted { max_steps });
        }

        let order_before = work.q();
        let dim_before = work.dim_r();
        let rank_before = work.independent_equation_count();

        if !symbol_involutive(&work) {
            work = prolong(&work, 1);
            prolongations += 1;
            steps.push(step(
                StepAction::Prolong,
                order_before,
                &dim_before,
                rank_before,
                &work,
            ));
            continue;
        }

        if has_integrability_conditions(&work) {
            let prolonged = prolong(&work, 1);
            let predicted_dim = prolonged.dim_r() - dim_s(&prolonged);
            work = project(&prolonged, order_before)?;
            projections += 1;

            let dim_after = work.dim_r();
            assert_eq!(
                dim_after, predicted_dim,
                "projected dimension must match the drop predicted from the \
                 prolonged system"
            );
            assert!(
                dim_after < dim_before,
                "a projection step must strictly decrease the dimension"
            );
            steps.push(step(
                StepAction::Project,
                order_before,
                &dim_before,
                rank_before,
                &work,
            ));
            continue;
        }

        break;
    }

    // The completed system must still contain every original equation.
    let matrix = work.coefficient_matrix(work.q());
    let labels = matrix.labels().unwrap();
    let position: std::collections::HashMap<_, usize> =
        labels.iter().enumerate().map(|(i, c)| (c, i)).collect();
    for (i, eq) in s.equations().iter().enumerate() {
        let row: Vec<_> = eq
            .coefficients()
            .iter()
            .map(|(coord, coeff)| (position[coord], coeff.clone()))
            .collect();
        assert!(
            matrix.row_space_contains(&row),
            "completion lost original equation {i}"
        );
    }

    Ok(CompletionTrace {
        steps,
        prolongations,
        projections,
        initial_order,
        initial_dim,
        result: work,
    })
}

fn step(
    action: StepAction,
    order_before: u32,
    dim_before: &num_bigint::BigInt,
    rank_before: usize,
    after: &PDESystem,
) -> CompletionStep {
    CompletionStep {
        action,
        order_before,
        order_after: after.q(),
        dim_before: to_u64(dim_before),
        dim_after: to_u64(&after.dim_r()),
        rank_before: rank_before as u64,
        rank_after: after.independent_equation_count() as u64,
        equations_after: after.equations().len() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::characters;
    use crate::linalg::rat;
    use crate::system::{FieldDecl, JetCoordinate, LinearEquation};
    use crate::MultiIndex;
    use num_bigint::BigInt;

    fn jc(field: usize, entries: &[u32]) -> JetCoordinate {
        JetCoordinate::new(field, MultiIndex::new(entries.to_vec()))
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
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

    /// The massive vector field: □A^μ − ∂^μ(∂·A) − A^μ = 0 with unit mass,
    /// signature (+,+,+,−), contravariant components A[1..4] ↔ (x,y,z,t).
    fn massive_vector() -> PDESystem {
        let d = |f: usize, a: usize, b: usize| {
            let mut idx = [0u32; 4];
            idx[a] += 1;
            idx[b] += 1;
            jc(f, &idx)
        };
        let mut eqs = Vec::new();
        for mu in 0..4usize {
            let sign_mu: i64 = if mu == 3 { -1 } else { 1 };
            let mut terms: Vec<(JetCoordinate, crate::Rational)> = Vec::new();
            // □A^mu = Σ_a η^aa ∂_a∂_a A^mu
            for a in 0..4usize {
                let sign_a: i64 = if a == 3 { -1 } else { 1 };
                terms.push((d(mu + 1, a, a), rat(sign_a)));
            }
            // −∂^mu ∂·A = −η^{mu mu} ∂_mu Σ_b ∂_b A^b
            for b in 0..4usize {
                terms.push((d(b + 1, mu, b), rat(-sign_mu)));
            }
            terms.push((jc(mu + 1, &[0, 0, 0, 0]), rat(-1)));
            eqs.push(LinearEquation::from_terms(terms).unwrap());
        }
        PDESystem::new(
            "massive_vector",
            vec!["x".into(), "y".into(), "z".into(), "t".into()],
            vec![FieldDecl::vector("A", 4)],
            vec![],
            eqs,
        )
        .unwrap()
    }

    #[test]
    fn involutive_input_passes_through() {
        let trace = cartan_kuranishi(&wave(), DEFAULT_MAX_STEPS).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!((trace.prolongations, trace.projections), (0, 0));
        let a = trace.result.coefficient_matrix(2);
        let b = wave().coefficient_matrix(2);
        assert_eq!(a.row_space_equal(&b), Ok(true));
    }

    #[test]
    fn pure_prolongation_case() {
        let exx = LinearEquation::from_terms(vec![(jc(1, &[2, 0]), rat(1))]).unwrap();
        let eyy = LinearEquation::from_terms(vec![(jc(1, &[0, 2]), rat(1))]).unwrap();
        let s = PDESystem::new(
            "pair",
            vec!["x".into(), "y".into()],
            vec![FieldDecl::scalar("phi")],
            vec![],
            vec![exx, eyy],
        )
        .unwrap();
        let trace = cartan_kuranishi(&s, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!((trace.prolongations, trace.projections), (1, 0));
        assert_eq!(trace.result.q(), 3);
        assert_eq!(characters(&trace.result).beta, big(&[3, 1]));
    }

    #[test]
    fn massive_vector_needs_two_projections() {
        let s = massive_vector();
        let trace = cartan_kuranishi(&s, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!((trace.prolongations, trace.projections), (0, 2));
        assert_eq!(trace.initial_dim, 56);
        let dims: Vec<(u64, u64)> = trace
            .steps
            .iter()
            .map(|st| (st.dim_before, st.dim_after))
            .collect();
        assert_eq!(dims, vec![(56, 55), (55, 51)]);
        assert!(trace
            .steps
            .iter()
            .all(|st| st.action == StepAction::Project));

        let done = &trace.result;
        assert_eq!(done.q(), 2);
        assert_eq!(done.dim_r(), BigInt::from(51));
        let c = characters(done);
        assert_eq!(c.beta, big(&[1, 1, 2, 4]));
        assert_eq!(c.alpha, big(&[15, 11, 6, 0]));
        assert!(symbol_involutive(done));
        assert!(!has_integrability_conditions(done));

        // The divergence constraint ∂·A = 0 is part of the completed system.
        let matrix = done.coefficient_matrix(2);
        let labels = matrix.labels().unwrap();
        let col = |coord: &JetCoordinate| labels.iter().position(|c| c == coord).unwrap();
        let divergence = vec![
            (col(&jc(1, &[1, 0, 0, 0])), rat(1)),
            (col(&jc(2, &[0, 1, 0, 0])), rat(1)),
            (col(&jc(3, &[0, 0, 1, 0])), rat(1)),
            (col(&jc(4, &[0, 0, 0, 1])), rat(1)),
        ];
        assert!(matrix.row_space_contains(&divergence));
    }

    #[test]
    fn degenerate_coordinates_exhaust_the_budget() {
        // v_y + u = 0, v_x = 0: the projection exposes u_x = 0, after which
        // u has no y-derivative information at any order in these
        // coordinates — the symbol never becomes involutive.
        let e1 =
            LinearEquation::from_terms(vec![(jc(2, &[0, 1]), rat(1)), (jc(1, &[0, 0]), rat(1))])
                .unwrap();
        let e2 = LinearEquation::from_terms(vec![(jc(2, &[1, 0]), rat(1))]).unwrap();
        let s = PDESystem::new(
            "degenerate",
            vec!["x".into(), "y".into()],
            vec![FieldDecl::scalar("u"), FieldDecl::scalar("v")],
            vec![],
            vec![e1, e2],
        )
        .unwrap();
        let err = cartan_kuranishi(&s, 6).unwrap_err();
        assert!(matches!(
            err,
            CompletionError::BudgetExhausted { max_steps: 6 }
        ));
    }
}
