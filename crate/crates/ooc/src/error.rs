//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors raised by field construction, code generation, and verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The given modulus is not prime.
    #[error("{0} is not prime")]
    NotPrime(u64),
    /// A field or enumeration size exceeds the configured ceiling.
    #[error("size {size} exceeds enumeration ceiling {ceiling}")]
    CeilingExceeded { size: u128, ceiling: u128 },
    /// `T` does not divide the group order.
    #[error("{t} does not divide {group_order}")]
    NotADivisor { t: u64, group_order: u64 },
    /// The multiplicative order of zero is undefined.
    #[error("multiplicative order of zero is undefined")]
    ZeroElement,
    /// Two matrices do not share the same (lambda, T) shape.
    #[error("shape mismatch: ({0}x{1}) vs ({2}x{3})")]
    ShapeMismatch(u32, u32, u32, u32),
    /// An operation that needs at least one codeword got none.
    #[error("family is empty")]
    EmptyFamily,
    /// Parameters violate a construction precondition.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// A polynomial expected to be monic is not.
    #[error("polynomial is not monic")]
    NotMonic,
    /// A closed-form count produced a non-integer intermediate value.
    #[error("non-divisible result in {context}: {numerator} not divisible by {divisor}")]
    NonDivisibleResult {
        context: &'static str,
        numerator: i128,
        divisor: i128,
    },
    /// A loaded code failed validation.
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    /// Two phase sequences have different lengths.
    #[error("sequence length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    /// Two cubic-family coefficient triples share the same quadratic coefficient.
    #[error("duplicate quadratic coefficient a = {0}")]
    DuplicateA(u64),
    /// The mode count must be an odd prime.
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    /// The mode count must be a power of two.
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(u64),
    /// A bent-recurrence parameter violates one of the construction's equations.
    #[error("recurrence condition violated: {0}")]
    ConditionViolated(String),
    /// A bent-sequence family exceeds its provable maximum size.
    #[error("family of size {requested} exceeds maximum {max}")]
    FamilyTooLarge { requested: usize, max: usize },
    /// A family file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
