//! A laboratory for the vector-matrix-vector (uTMv) query model.
//!
//! The only sanctioned access to a hidden n x n matrix is the metered
//! bilinear form u^T M v over the matrix's scalar domain. On top of that
//! oracle this crate provides:
//!
//! - sublinear property testers for linear-algebra structure (diagonal,
//!   symmetric, unitary, exact trace),
//! - column-statistics testers (all-ones column, identical columns, exact
//!   majority, permutation, doubly stochastic, negative-entry scan),
//! - simulated standard graph queries (degree, edge existence, k-th
//!   neighbor, uniform edge sampling, exact edge count) and a star tester,
//! - brute-force-verified constructions of the reduction gadgets behind the
//!   matching lower bounds, and
//! - a seeded experiment harness that checks query budgets and estimates
//!   success probabilities, emitting reproducible CSV.
//!
//! Every randomized component takes an explicit 64-bit seed; query budgets
//! are observable through per-oracle ledgers.

pub mod domain;
mod error;
pub mod gadgets;
pub mod graph;
pub mod harness;
pub mod inspect;
pub mod instances;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod rng;
pub mod stats;

pub use domain::{DomainKind, Scalar, ScalarDomain};
pub use error::{Error, Result};
pub use matrix::{DenseMatrix, QueryVector};
pub use oracle::{BilinearOracle, QueryLedger, TestReport, Verdict, Witness};
