//! Crate-wide error type.
//!
//! Construction-time validation (shapes, invertibility, closedness
//! preconditions) reports through [`Error`]; verification outcomes are *not*
//! errors — they are carried by reports (see [`crate::verify`]).

use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two objects that must live over the same chart do not.
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    /// A vector, section, or table has the wrong length for its bundle.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// A constant matrix that must be invertible is singular.
    #[error("singular matrix: {0}")]
    SingularMatrix(String),
    /// The pairing matrix is not symmetric.
    #[error("pairing is not symmetric")]
    AsymmetricPairing,
    /// A twist 3-form fails the closedness precondition.
    #[error("twist form is not closed; pass force=true to build anyway")]
    NonClosedTwist,
    /// The imaginary unit or a complex scalar appeared over a rational chart.
    #[error("complex scalar used over a rational chart")]
    FieldMismatch,
    /// Split frames are not mutually orthogonal under the host pairing.
    #[error("split frames are not mutually orthogonal: {0}")]
    NotOrthogonal(String),
    /// A restricted pairing of a split is non-constant or singular.
    #[error("restricted pairing is degenerate: {0}")]
    DegenerateRestriction(String),
    /// No candidate normalization makes the regular construction consistent.
    #[error("no candidate normalization passes the audit")]
    NoConsistentNormalization,
    /// More than one candidate normalization passes the audit (data too
    /// degenerate to pin the constant).
    #[error("normalization audit is ambiguous: all of {0:?} pass")]
    AmbiguousNormalization(Vec<String>),
    /// The curvature-source 4-form is nonzero, so the structure has no flat
    /// decomposition.
    #[error("structure is not flat: the curvature source 4-form is nonzero")]
    NotFlat,
    /// Supplied algebraic data violates one of its defining laws
    /// (antisymmetry, Jacobi, invariance, or a compatibility condition).
    #[error("incompatible data: {0}; pass force=true to build anyway")]
    IncompatibleData(String),
    /// A claimed spanning-frame certificate fails (combined determinant is not
    /// a nonzero constant).
    #[error("bad complement certificate: {0}")]
    BadComplementCertificate(String),
    /// A claimed subbundle is not closed under the bracket.
    #[error("frame is not integrable: {0}")]
    NotIntegrable(String),
    /// The host pairing does not have split signature (required for maximal
    /// isotropic subbundles of half rank over real charts).
    #[error("host pairing does not have split signature")]
    NotSplitSignature,
    /// Input of mixed bidegree where a pure (1,0) or (0,1) object is required.
    #[error("mixed bidegree input: {0}")]
    MixedBidegree(String),
    /// Expression parse failure (byte offset into the parsed string).
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    /// An identifier in an expression does not name a coordinate or frame
    /// element in scope.
    #[error("unknown name `{name}` at offset {offset}")]
    UnknownName { offset: usize, name: String },
    /// Internal invariant violation; indicates a bug in this crate.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
