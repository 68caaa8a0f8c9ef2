//! Exact-arithmetic analysis of linear, constant-coefficient PDE systems.
//!
//! The pipeline: parse or build a [`PDESystem`], complete it to involutive
//! form with [`cartan_kuranishi`] (alternating prolongation and projection),
//! then read off Cartan characters, Hilbert polynomials, gauge corrections,
//! compatibility/strength coefficients, and degrees of freedom via
//! [`analyze`]. A power-series solver in [`series_oracle`] classifies Taylor
//! coefficients independently of the character machinery and is used to
//! cross-check it.
//!
//! All arithmetic is exact: coefficients are arbitrary-precision rationals
//! and every rank, dimension, and polynomial is computed without tolerances.

pub mod combinatorics;
pub mod completion;
pub mod counting;
pub mod jets;
pub mod linalg;
pub mod parser;
pub mod series_oracle;
pub mod system;

pub use combinatorics::MultiIndex;
pub use completion::{cartan_kuranishi, CompletionError, CompletionTrace};
pub use counting::{analyze, AnalysisReport, AnalyzeOptions, Polynomial};
pub use jets::{characters, prolong, symbol, Characters, SymbolMatrix};
pub use linalg::{Rational, RationalMatrix, RowOp, RowOps};
pub use parser::{
    parse, parse_with_effective_params, parse_with_params, serialize, ParseError, SourceSpan,
};
pub use system::{FieldDecl, JetCoordinate, LinearEquation, PDESystem};
