use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("exponent vectors of lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("free module rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("cannot parse polynomial at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("d^{degree} composed with d^{} is not zero", degree - 1)]
    NotAComplex { degree: i64 },
    #[error("square at degree {degree} does not commute")]
    NotAChainMap { degree: i64 },
    #[error("matrix does not induce a well-defined module map (relation column {column})")]
    IllDefinedMap { column: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
}
