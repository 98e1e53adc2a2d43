use thiserror::Error;

/// Errors raised by field, polynomial and theorem-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime characteristic")]
    InvalidCharacteristic(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live at different field levels")]
    LevelMismatch,
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("zero has no multiplicative order")]
    ZeroHasNoOrder,
    #[error("no element of order {d}: it does not divide the group order {group_order}")]
    NoSuchRoot { d: u64, group_order: u64 },
    #[error("the quadratic extension is only available for odd q")]
    TowerUnavailable,
    #[error("gcd(0, 0) is undefined")]
    UndefinedGcd,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree, monic and nonconstant")]
    NotSquarefree,
    #[error("polynomial is not a product of distinct irreducibles of degree {0}")]
    NotEqualDegree(usize),
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("even characteristic is not supported by this operation")]
    EvenCharacteristicUnsupported,
    #[error("characteristic {r} divides the cyclotomic index {d}")]
    CharacteristicDividesIndex { r: u64, d: u64 },
    #[error("characteristic {r} divides n; coprime part {coprime_part}")]
    CharacteristicDividesN {
        r: u64,
        n: u64,
        r_part: u32,
        coprime_part: u64,
    },
    #[error("lifting-the-exponent precondition fails for p = {p}, a = {a}")]
    LtePreconditionFailed { p: u64, a: u64 },
    #[error("{a} and {m} are not coprime")]
    NotCoprime { a: u64, m: u64 },
    #[error("{value} has the prime factor {prime}, which does not divide q^2 - 1")]
    NotInSparseFamily { value: u64, prime: u64 },
    #[error("{p} divides q^2 - 1, so X^{p} - 1 is 3-sparse and has no witness")]
    NoWitnessExists { p: u64 },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
