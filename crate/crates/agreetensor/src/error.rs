//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Unnormalized model weights sum to zero; no probability tensor exists.
    #[error("total mass is zero; no normalized tensor exists")]
    ZeroMass,

    #[error("negative entry at cell ({0}, {1}, {2})")]
    NegativeEntry(usize, usize, usize),

    #[error("entries sum to {got}, expected 1")]
    NotNormalized { got: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Chance agreement equals 1, leaving kappa's denominator zero.
    #[error("degenerate chance agreement; kappa is undefined")]
    DegenerateChance,

    #[error("monomial degree {0} exceeds the supported bound {1}")]
    DegreeTooLarge(usize, usize),

    #[error("matrix criterion hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("enumeration budget exceeded: {needed} monomials (budget {budget})")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("unsupported n={0} for this operation")]
    UnsupportedN(usize),

    #[error("unsupported family {0} for this operation")]
    UnsupportedFamily(String),

    /// Entrywise product of two points has no nonzero coordinate.
    #[error("Hadamard product undefined: every coordinate product is zero")]
    NotDefined,

    /// Parameter transfer requires a strictly interior point.
    #[error("boundary parameter point: {0}")]
    BoundaryPoint(String),

    #[error("support mismatch: probability is zero at cell ({0}, {1}, {2}) with positive count")]
    SupportMismatch(usize, usize, usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
