//! One error type for the whole crate.
//!
//! Engines never panic on validated input; every precondition breach surfaces
//! as a variant here. Work-bound breaches ([`Error::WindowTooLarge`],
//! [`Error::WorkBoundExceeded`]) are kept distinct from input errors so
//! callers can map them to a dedicated exit path.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the exact engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u16, u16),
    #[error("{0} is not a prime in [2, 2^16)")]
    InvalidModulus(u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("exponent {0} exceeds the bound ±2^20")]
    ExponentOverflow(i64),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("coefficients must not all be zero")]
    AllZeroCoefficients,
    #[error("points must be distinct")]
    DuplicatePoints,
    #[error("at least {0} points required")]
    TooFewPoints(usize),
    #[error("site set must be nonempty")]
    EmptySites,
    #[error("box lower corner must be ≤ upper corner componentwise")]
    InvalidBox,
    #[error("conflicting values assigned to site {0}")]
    ConflictingAssignment(String),
    #[error("cylinder sites must lie inside the window")]
    SitesOutsideWindow,
    #[error("window enumeration size p^{cells} exceeds 2^{bound_log2}")]
    WindowTooLarge { cells: u64, bound_log2: u32 },
    #[error("dilation factor must be at least 1")]
    ZeroDilation,
    #[error("empty scan range")]
    EmptyRange,
    #[error("generators and group elements must be nonzero")]
    ZeroValue,
    #[error("equation coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("equation needs at least 2 terms")]
    TooFewTerms,
    #[error("degeneracy classification supports at most 20 terms, got {0}")]
    TooManyTerms(usize),
    #[error("prime factor of {0} exceeds the factoring bound 10^12")]
    FactorBoundExceeded(String),
    #[error("integer overflow in exact lattice arithmetic")]
    IntegerOverflow,
    #[error("search needs {needed} candidates, exceeding the work bound {bound}")]
    WorkBoundExceeded { needed: u64, bound: u64 },
    #[error("values do not satisfy the equation")]
    EquationNotSatisfied,
    #[error("subset indices must be nonempty, distinct, proper, and within 1..=k")]
    InvalidSubset,
    #[error("denominator must be nonzero")]
    ZeroDenominator,
}
