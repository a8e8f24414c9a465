use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("prime {0} exceeds the supported range")]
    PrimeTooLarge(u64),
    #[error("p = {p} is a bad prime for {rep}")]
    BadPrime { rep: String, p: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular system (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },
    #[error("enumeration of {required} elements exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("unknown representation '{0}'")]
    UnknownRep(String),
    #[error("unknown orbit label '{0}'")]
    UnknownLabel(String),
    #[error("unknown subspace '{0}'")]
    UnknownSubspace(String),
    #[error("{0} is not defined for this representation")]
    UnsupportedInvariant(&'static str),
    #[error("group element is not invertible")]
    NotInvertible,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("interpolation disagrees at holdout prime {prime}, entry ({row}, {col})")]
    DegreeBound { prime: u64, row: usize, col: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
