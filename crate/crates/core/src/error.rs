use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("the prime {0} is not supported by this operation")]
    UnsupportedPrime(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("argument `{0}` must be nonzero")]
    ZeroArgument(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is not Hermitian at ({row}, {col})")]
    HermitianViolation { row: usize, col: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("lattice is not integral for the form")]
    NotIntegral,
    #[error("invalid imaginary quadratic field: {0}")]
    InvalidField(String),
    #[error("entry ({row}, {col}) does not lie in the ring of integers")]
    NotInRingOfIntegers { row: usize, col: usize },
    #[error("could not factor {remainder} by trial division up to {bound}")]
    FactorizationLimit { remainder: String, bound: u64 },
    #[error("enumeration limit exceeded: {what} reached {reached} (limit {limit})")]
    EnumerationLimit {
        what: &'static str,
        reached: u64,
        limit: u64,
    },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::UnsupportedPrime(_) => "unsupported-prime",
            Error::Precondition(_) => "precondition",
            Error::ZeroArgument(_) => "zero-argument",
            Error::DivisionByZero => "division-by-zero",
            Error::HermitianViolation { .. } => "hermitian-violation",
            Error::SingularMatrix => "singular-matrix",
            Error::Dimension(_) => "dimension-mismatch",
            Error::NotIntegral => "nonintegral",
            Error::InvalidField(_) => "invalid-field",
            Error::NotInRingOfIntegers { .. } => "not-in-ring-of-integers",
            Error::FactorizationLimit { .. } => "factorization-limit",
            Error::EnumerationLimit { .. } => "enumeration-limit",
            Error::InvalidContext(_) => "invalid-context",
            Error::Parse(_) => "parse",
            Error::Schema { .. } => "schema",
            Error::Internal(_) => "internal",
        }
    }

    /// Resource errors are the ones caused by configurable limits rather
    /// than by the mathematical input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::FactorizationLimit { .. } | Error::EnumerationLimit { .. }
        )
    }

    /// Location of the offending entry, when the error refers to one.
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            Error::HermitianViolation { row, col } | Error::NotInRingOfIntegers { row, col } => {
                Some((*row, *col))
            }
            _ => None,
        }
    }
}
