//! Error type shared by every module of the crate.

use thiserror::Error;

/// Coarse classification used by the CLI to pick an exit code and by the
/// C API to pick a status code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed or inconsistent input (bad document, bad field descriptor).
    Validation,
    /// A resource guard tripped (degree, extension size, state-space size).
    Guard,
    /// A mathematical precondition does not hold for the given input.
    Precondition,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("degree too large: {0}")]
    DegreeTooLarge(String),
    #[error("not periodic: {0}")]
    NotPeriodic(String),
    #[error("operation requires a finite field, not the rationals")]
    RationalFieldUnsupported,
    #[error("negative time is not admissible for a semigroup representation")]
    NegativeTimeForSemigroup,
    #[error("wrong time group: {0}")]
    WrongTimeGroup(String),
    #[error("generator has infinite order")]
    InfiniteOrder,
    #[error("extension too large: {0}")]
    ExtensionTooLarge(String),
    #[error("state space too large: {0}")]
    StateSpaceTooLarge(String),
    #[error("rotation form is undefined in characteristic two")]
    CharacteristicTwo,
    #[error("unsupported time group: {0}")]
    UnsupportedGroup(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus polynomial is not irreducible")]
    NotIrreducible,
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            FieldMismatch(..) | DimensionMismatch(..) | UnsupportedGroup(..) | NotPrime(..)
            | NotIrreducible | InvalidDocument(..) | InvalidElement(..) | UnsupportedField(..) => {
                ErrorCategory::Validation
            }
            DegreeTooLarge(..) | ExtensionTooLarge(..) | StateSpaceTooLarge(..) => {
                ErrorCategory::Guard
            }
            DivisionByZero | SingularMatrix | BothZero | ZeroPolynomial | NotPeriodic(..)
            | RationalFieldUnsupported | NegativeTimeForSemigroup | WrongTimeGroup(..)
            | InfiniteOrder | CharacteristicTwo => ErrorCategory::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
