use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("gram matrix must be square and non-empty")]
    NotSquare,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix has an odd diagonal entry")]
    NotEven,
    #[error("n must be at least 2, got {0}")]
    InvalidN(u64),
    #[error("spanning vectors are linearly dependent")]
    DependentSpan,
    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
    #[error("vector is not orthogonal to v")]
    NotInVPerp,
    #[error("degenerate form")]
    Degenerate,
    #[error("form is not indefinite (signature ({0},{1}))")]
    NotIndefinite(u8, u8),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("search ceiling {ceiling} exceeded: {context}")]
    CeilingExceeded { ceiling: BigInt, context: String },
    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,
    #[error("reflection vector must have square 2, got {0}")]
    BadReflection(BigInt),
    #[error("divisibility failure: {0}")]
    Divisibility(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
