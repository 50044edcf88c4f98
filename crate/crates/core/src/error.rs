use thiserror::Error;

/// Errors surfaced by field construction, arithmetic, and the verification
/// harness. Parse errors carry a byte offset into the offending input;
/// hypothesis violations are kept distinct so callers can map them to their
/// own exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus has degree {got}, expected {want}")]
    ModulusDegree { got: usize, want: usize },

    #[error("modulus {0} is not irreducible")]
    ReducibleModulus(String),

    #[error("modulus must be monic, got {0}")]
    NonMonicModulus(String),

    #[error("{what} would exceed the supported bound {bound}")]
    TooLarge { what: String, bound: u64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("operation requires a nonzero element")]
    ZeroElement,

    #[error("operation requires a polynomial of degree >= 1, got {0}")]
    ConstantInput(String),

    #[error("polynomial {0} has zero constant term")]
    ZeroConstantTerm(String),

    #[error("{divisor} does not divide {dividend}")]
    NotADivisor { divisor: String, dividend: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown check name: {0}")]
    UnknownCheck(String),

    #[error("no subfield embedding: {0}")]
    NoEmbedding(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
