//! System representation: jet coordinates, linear equations over them, and
//! validated PDE systems with their canonical coefficient matrices.
//!
//! A jet coordinate pairs a dependent-field index (1-based) with a derivative
//! multi-index. Columns of every matrix in this crate follow one canonical
//! ordering — derivative order descending, then class descending, then
//! reverse-lexicographic on the multi-index, then field index ascending — so
//! that pivot counts per class can be read off a reduced matrix directly.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::combinatorics::{fiber_dim, multi_indices_exact, revlex_cmp, MultiIndex};
use crate::linalg::{format_rational, parse_rational, Rational, RationalMatrix};

/// One coordinate `u^{(field)}_{index}` on a jet fiber. `field` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JetCoordinate {
    pub field: usize,
    pub index: MultiIndex,
}

impl JetCoordinate {
    pub fn new(field: usize, index: MultiIndex) -> Self {
        assert!(field >= 1, "field indices are 1-based");
        JetCoordinate { field, index }
    }

    pub fn order(&self) -> u32 {
        self.index.order()
    }

    /// Class of the underlying multi-index; `None` for order zero.
    pub fn class(&self) -> Option<usize> {
        self.index.class()
    }
}

impl fmt::Display for JetCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order() == 0 {
            write!(f, "u{}", self.field)
        } else {
            let parts: Vec<String> = self
                .index
                .as_slice()
                .iter()
                .map(|e| e.to_string())
                .collect();
            write!(f, "u{}_({})", self.field, parts.join(","))
        }
    }
}

/// Canonical column comparator: order descending, class descending, revlex
/// ascending, field ascending. Total order on coordinates of one system.
pub fn jet_column_cmp(a: &JetCoordinate, b: &JetCoordinate) -> Ordering {
    b.order()
        .cmp(&a.order())
        .then_with(|| b.class().unwrap_or(0).cmp(&a.class().unwrap_or(0)))
        .then_with(|| revlex_cmp(&a.index, &b.index))
        .then_with(|| a.field.cmp(&b.field))
}

/// All jet coordinates of exactly order `ord` for `m` fields over `n`
/// independent variables, in canonical column order.
pub fn jet_coordinates_exact(n: usize, ord: u32, m: usize) -> Vec<JetCoordinate> {
    let mut indices = multi_indices_exact(n, ord);
    indices.sort_by(|a, b| {
        b.class()
            .unwrap_or(0)
            .cmp(&a.class().unwrap_or(0))
            .then_with(|| revlex_cmp(a, b))
    });
    let mut out = Vec::with_capacity(indices.len() * m);
    for idx in indices {
        for field in 1..=m {
            out.push(JetCoordinate::new(field, idx.clone()));
        }
    }
    out
}

/// All jet coordinates of order ≤ `max_order`, canonical column order
/// (highest order first).
pub fn jet_coordinates_up_to(n: usize, max_order: u32, m: usize) -> Vec<JetCoordinate> {
    let mut out = Vec::new();
    for ord in (0..=max_order).rev() {
        out.extend(jet_coordinates_exact(n, ord, m));
    }
    out
}

/// A single linear, constant-coefficient equation: a finite sum
/// Σ c_A · u^{(field)}_{index} = 0 with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearEquation {
    coefficients: BTreeMap<JetCoordinate, Rational>,
}

impl LinearEquation {
    /// Build from a coefficient map; zero coefficients are dropped and an
    /// equation with nothing left is rejected (it carries no information and
    /// usually signals cancellation the author did not intend).
    pub fn new(coefficients: BTreeMap<JetCoordinate, Rational>) -> Result<Self, SystemError> {
        let coefficients: BTreeMap<_, _> = coefficients
            .into_iter()
            .filter(|(_, c)| !num_traits::Zero::is_zero(c))
            .collect();
        if coefficients.is_empty() {
            return Err(SystemError::TrivialEquation);
        }
        Ok(LinearEquation { coefficients })
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (JetCoordinate, Rational)>,
    ) -> Result<Self, SystemError> {
        let mut map: BTreeMap<JetCoordinate, Rational> = BTreeMap::new();
        for (coord, coeff) in terms {
            *map.entry(coord).or_insert_with(num_traits::Zero::zero) += coeff;
        }
        LinearEquation::new(map)
    }

    pub fn coefficients(&self) -> &BTreeMap<JetCoordinate, Rational> {
        &self.coefficients
    }

    /// Highest derivative order appearing in the equation.
    pub fn order(&self) -> u32 {
        self.coefficients.keys().map(|c| c.order()).max().unwrap()
    }
}

/// One declared dependent field: a scalar (`components: None`) or a
/// multi-component symbol like `A[4]` (`components: Some(4)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDecl {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
}

impl FieldDecl {
    pub fn scalar(name: impl Into<String>) -> Self {
        FieldDecl {
            name: name.into(),
            components: None,
        }
    }

    pub fn vector(name: impl Into<String>, components: usize) -> Self {
        FieldDecl {
            name: name.into(),
            components: Some(components),
        }
    }

    fn len(&self) -> usize {
        self.components.unwrap_or(1)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("a system needs at least one independent variable")]
    NoCoordinates,
    #[error("a system needs at least one dependent field")]
    NoFields,
    #[error("a system needs at least one equation")]
    NoEquations,
    #[error("duplicate name '{0}'")]
    DuplicateName(String),
    #[error("field declaration '{0}' has zero components")]
    EmptyFieldDecl(String),
    #[error("equation term uses field index {field} but the system has {m} components")]
    FieldIndexOutOfRange { field: usize, m: usize },
    #[error("equation term has a {got}-variable multi-index in a {expected}-variable system")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("equation reduces to 0 = 0; every term cancelled")]
    TrivialEquation,
    #[error("gauge-generator counts must end with a positive entry")]
    TrailingZeroGamma,
    #[error("cannot treat an order-{actual} system as order {requested}")]
    OrderTooSmall { requested: u32, actual: u32 },
    #[error("the system is purely algebraic (order 0); analysis needs at least one derivative")]
    AlgebraicSystem,
    #[error("bad coefficient: {0}")]
    BadCoefficient(String),
}

/// A linear, constant-coefficient PDE system: named independent variables
/// (the last one is the evolution direction), declared fields, optional
/// gauge-generator counts γ_ℓ, and the equations themselves. The system's
/// order is the highest derivative order present (it can be raised
/// explicitly after a projection, never lowered).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDESystem {
    name: String,
    coordinates: Vec<String>,
    fields: Vec<FieldDecl>,
    gammas: Vec<u64>,
    equations: Vec<LinearEquation>,
    order: u32,
}

impl PDESystem {
    pub fn new(
        name: impl Into<String>,
        coordinates: Vec<String>,
        fields: Vec<FieldDecl>,
        gammas: Vec<u64>,
        equations: Vec<LinearEquation>,
    ) -> Result<Self, SystemError> {
        let name = name.into();
        if coordinates.is_empty() {
            return Err(SystemError::NoCoordinates);
        }
        if fields.is_empty() {
            return Err(SystemError::NoFields);
        }
        if equations.is_empty() {
            return Err(SystemError::NoEquations);
        }
        let mut seen = std::collections::HashSet::new();
        for name in coordinates.iter().chain(fields.iter().map(|f| &f.name)) {
            if !seen.insert(name.clone()) {
                return Err(SystemError::DuplicateName(name.clone()));
            }
        }
        for f in &fields {
            if f.components == Some(0) {
                return Err(SystemError::EmptyFieldDecl(f.name.clone()));
            }
        }
        if let Some(last) = gammas.last() {
            if *last == 0 {
                return Err(SystemError::TrailingZeroGamma);
            }
        }
        let n = coordinates.len();
        let m: usize = fields.iter().map(FieldDecl::len).sum();
        let mut order = 0;
        for eq in &equations {
            for coord in eq.coefficients().keys() {
                if coord.field > m {
                    return Err(SystemError::FieldIndexOutOfRange {
                        field: coord.field,
                        m,
                    });
                }
                if coord.index.len() != n {
                    return Err(SystemError::DimensionMismatch {
                        expected: n,
                        got: coord.index.len(),
                    });
                }
            }
            order = order.max(eq.order());
        }
        Ok(PDESystem {
            name,
            coordinates,
            fields,
            gammas,
            equations,
            order,
        })
    }

    /// Return the same system regarded as having order `order` (≥ the largest
    /// order actually present). Projections use this to stay at a fixed order
    /// even when the surviving equations all have lower order.
    pub fn assume_order(mut self, order: u32) -> Result<Self, SystemError> {
        if order < self.order {
            return Err(SystemError::OrderTooSmall {
                requested: order,
                actual: self.order,
            });
        }
        self.order = order;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn fields(&self) -> &[FieldDecl] {
        &self.fields
    }

    pub fn gammas(&self) -> &[u64] {
        &self.gammas
    }

    pub fn equations(&self) -> &[LinearEquation] {
        &self.equations
    }

    /// Number of independent variables.
    pub fn n(&self) -> usize {
        self.coordinates.len()
    }

    /// Number of dependent components (multi-component fields flattened).
    pub fn m(&self) -> usize {
        self.fields.iter().map(FieldDecl::len).sum()
    }

    /// System order q: the highest derivative order present, unless raised
    /// via `assume_order`.
    pub fn q(&self) -> u32 {
        self.order
    }

    /// Display label of 1-based component `field`: `A[2]`, `Phi`, ...
    pub fn field_label(&self, field: usize) -> String {
        let mut offset = 0usize;
        for f in &self.fields {
            let len = f.len();
            if field <= offset + len {
                return match f.components {
                    None => f.name.clone(),
                    Some(_) => format!("{}[{}]", f.name, field - offset),
                };
            }
            offset += len;
        }
        panic!("field index {field} out of range");
    }

    /// Resolve a field name plus optional component to its 1-based flat index.
    pub fn field_index(&self, name: &str, component: Option<usize>) -> Option<usize> {
        let mut offset = 0usize;
        for f in &self.fields {
            let len = f.len();
            if f.name == name {
                return match (f.components, component) {
                    (None, None) => Some(offset + 1),
                    (Some(k), Some(c)) if c >= 1 && c <= k => Some(offset + c),
                    _ => None,
                };
            }
            offset += len;
        }
        None
    }

    /// The coefficient matrix over the full jet fiber of order ≤ `max_order`,
    /// one row per equation, columns in canonical order and labeled.
    pub fn coefficient_matrix(&self, max_order: u32) -> RationalMatrix {
        assert!(
            max_order >= self.order,
            "matrix order {max_order} cannot represent an order-{} system",
            self.order
        );
        let labels = jet_coordinates_up_to(self.n(), max_order, self.m());
        let position: std::collections::HashMap<&JetCoordinate, usize> =
            labels.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let rows = self
            .equations
            .iter()
            .map(|eq| {
                eq.coefficients()
                    .iter()
                    .map(|(coord, coeff)| (position[coord], coeff.clone()))
                    .collect()
            })
            .collect();
        RationalMatrix::from_sparse_rows(labels.len(), rows).with_labels(labels)
    }

    /// Rank of the coefficient matrix at the system's own order: the number
    /// of genuinely independent equations.
    pub fn independent_equation_count(&self) -> usize {
        self.coefficient_matrix(self.order).rank()
    }

    /// Dimension of the solution set cut out of the order-q jet fiber:
    /// fiber dimension minus coefficient-matrix rank.
    pub fn dim_r(&self) -> BigInt {
        fiber_dim(self.n(), self.order, self.m()) - BigInt::from(self.independent_equation_count())
    }

    /// Replace the equations, keeping metadata; the order is re-inferred.
    pub fn with_equations(&self, equations: Vec<LinearEquation>) -> Result<Self, SystemError> {
        PDESystem::new(
            self.name.clone(),
            self.coordinates.clone(),
            self.fields.clone(),
            self.gammas.clone(),
            equations,
        )
    }
}

// ---------------------------------------------------------------------------
// JSON form. Coefficients cross the wire as exact "p/q" strings; term lists
// are emitted in coefficient-map order, which is canonical.

#[derive(Serialize, Deserialize)]
struct TermDto {
    field: usize,
    index: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct SystemDto {
    name: String,
    coordinates: Vec<String>,
    fields: Vec<FieldDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    gammas: Vec<u64>,
    order: u32,
    equations: Vec<Vec<TermDto>>,
}

impl Serialize for PDESystem {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let dto = SystemDto {
            name: self.name.clone(),
            coordinates: self.coordinates.clone(),
            fields: self.fields.clone(),
            gammas: self.gammas.clone(),
            order: self.order,
            equations: self
                .equations
                .iter()
                .map(|eq| {
                    eq.coefficients()
                        .iter()
                        .map(|(coord, coeff)| TermDto {
                            field: coord.field,
                            index: coord.index.as_slice().to_vec(),
                            coeff: format_rational(coeff),
                        })
                        .collect()
                })
                .collect(),
        };
        dto.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PDESystem {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let dto = SystemDto::deserialize(de)?;
        let equations = dto
            .equations
            .into_iter()
            .map(|terms| {
                let pairs = terms
                    .into_iter()
                    .map(|t| {
                        let coeff =
                            parse_rational(&t.coeff).map_err(SystemError::BadCoefficient)?;
                        Ok((JetCoordinate::new(t.field, MultiIndex::new(t.index)), coeff))
                    })
                    .collect::<Result<Vec<_>, SystemError>>()?;
                LinearEquation::from_terms(pairs)
            })
            .collect::<Result<Vec<_>, SystemError>>()
            .map_err(serde::de::Error::custom)?;
        PDESystem::new(dto.name, dto.coordinates, dto.fields, dto.gammas, equations)
            .and_then(|s| s.assume_order(dto.order))
            .map_err(serde::de::Error::custom)
    }
}
