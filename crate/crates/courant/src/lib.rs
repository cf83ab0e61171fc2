//! Exact symbolic toolkit for Courant algebroids over polynomial coordinate
//! charts.
//!
//! Everything here computes over ℚ or ℚ(i) with no floating point and no
//! approximation: structure constructors build bracket tables from generating
//! data, and verification routines certify algebraic identities (axioms,
//! matched-pair conditions, compatibility systems, integrability tests) by
//! exact polynomial equality. Checks run a deterministic frame pass followed
//! by a seeded randomized pass, so reports are byte-identical for a fixed
//! seed; failures carry minimized witnesses.

pub mod axioms;
pub mod calculus;
pub mod chart;
pub mod connection;
pub mod courant;
pub mod error;
pub mod exec;
pub mod expr;
pub mod dirac;
pub mod linalg;
pub mod complex;
pub mod matched;
pub mod regular;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod verify;

pub use calculus::{DiffForm, VectorField};
pub use chart::ChartContext;
pub use courant::{CourantStructure, Section};
pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial};
pub use report::{CheckResult, VerificationReport, Witness};
pub use scalar::{Scalar, ScalarField};
pub use verify::{SampleSpec, DEFAULT_SEED};
