use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^31")]
    BadPrime(u64),
    #[error("extension degree {0} is outside the supported range 1..={max}", max = crate::ff::MAX_EXT_DEGREE)]
    BadDegree(usize),
    #[error("field of order {p}^{k} does not fit the enumeration range")]
    FieldTooLarge { p: u64, k: usize },
    #[error("modulus polynomial is not monic irreducible of the declared degree")]
    ReducibleModulus,
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("element does not lie in the subfield")]
    NotInSubfield,
    #[error("invalid branch locus: {0}")]
    InvalidLocus(String),
    #[error("repeated value {0}")]
    Repeated(String),
    #[error("inconsistent invariants: genus {g}, p-rank {f}, a-number {a}")]
    InconsistentInvariants { g: usize, f: usize, a: usize },
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("enumeration of {0} elements exceeds the counting bound")]
    EnumerationTooLarge(u128),
    #[error("non-integral L-polynomial coefficient at index {0}")]
    NonIntegral(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
