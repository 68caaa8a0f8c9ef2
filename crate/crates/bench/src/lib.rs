//! Shared fixtures for the benchmarks: a few bundled systems embedded as
//! source text, spanning the cheap, the projection-heavy, and the large.

/// Scalar wave equation: the smallest complete run.
pub const WAVE: &str = include_str!("../../../corpus/wave.pde");

/// Massive symmetric tensor: the most projection-heavy completion.
pub const FP_MASSIVE: &str = include_str!("../../../corpus/fp_massive.pde");

/// Vector field with a gauge declaration: exercises the corrected counts.
pub const MAXWELL: &str = include_str!("../../../corpus/maxwell.pde");

/// Largest bundled system by equation count and fiber size.
pub const FP_STUECKELBERG: &str = include_str!("../../../corpus/fp_stueckelberg.pde");

pub fn parsed(src: &str) -> involute_core::PDESystem {
    involute_core::parse(src).expect("bundled source must parse")
}
