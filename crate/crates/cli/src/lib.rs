//! Library half of the `involute` binary: the bundled corpus with its
//! reference tables, terminal rendering for analysis reports, and the
//! shifted-parameter recheck. `main` stays a thin argument layer so the
//! integration tests can drive the same code paths in-process.

pub mod corpus;
pub mod recheck;
pub mod render;
