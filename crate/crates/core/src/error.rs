//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two labeled objects do not share the same ordered basis.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    /// A state that must be normalized is not.
    #[error("state not normalized: |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    /// A projection or filter was asked to keep nothing.
    #[error("empty label set")]
    EmptyLabelSet,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A density operator failed its trace/Hermiticity/positivity checks.
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A mode shift or reflection would leave the declared OAM window.
    /// Signals an under-sized photon space, never silent truncation.
    #[error(
        "OAM window overflow in {element}: mode {from} maps to {to}, outside window [{lo}, {hi}]"
    )]
    WindowOverflow {
        element: String,
        from: i32,
        to: i32,
        lo: i32,
        hi: i32,
    },

    /// Amplitude found on a path an element requires to be empty.
    #[error("routing conflict in {element}: {detail}")]
    RoutingConflict { element: String, detail: String },

    /// A post-selected circuit map is not proportional to an isometry on the
    /// computational subspace.
    #[error("structural failure: {0}")]
    StructuralFailure(String),

    /// All amplitude was removed by truncation or post-selection.
    #[error("zero norm after {0}")]
    ZeroNorm(String),

    #[error("zero counts: {0}")]
    ZeroCounts(String),

    /// A documented precondition on an input state was violated.
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
