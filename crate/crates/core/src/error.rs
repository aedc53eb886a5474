use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid prime modulus {0}")]
    InvalidPrime(u64),
    #[error("operation not supported in characteristic {0}")]
    UnsupportedCharacteristic(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrices do not commute: {0}")]
    NotCommuting(String),
    #[error("matrix is not in the centralizer")]
    NotInCentralizer,
    #[error("block orders must satisfy k > m >= 1 (got k={k}, m={m})")]
    BadOrders { k: usize, m: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("algebra is not self-centralizing (dimension {dim} < {n})")]
    NotSelfCentralizing { dim: usize, n: usize },
    #[error("matrix is not in the generated algebra")]
    NotInAlgebra,
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("parameter must be nonzero: {0}")]
    ZeroParameter(&'static str),
    #[error("rank of [E F] is {rank}, must be at most {max}")]
    RankTooHigh { rank: usize, max: usize },
    #[error("case {case} does not match characteristic {characteristic}")]
    CharacteristicMismatch { case: String, characteristic: u64 },
    #[error("omega is not a root of w(27w^3-8)")]
    OmegaNotRoot,
    #[error("prime {0} too large for exhaustive enumeration")]
    PrimeTooLarge(u64),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("Q does not satisfy Q^-1 A1^T Q = A1")]
    BadQ,
    #[error("polynomial has a nonzero constant term")]
    ConstantTerm,
    #[error("pair is not in N2(A): {0}")]
    NotInN2(String),
    #[error("sampler failed to resolve the defining equations after {0} attempts")]
    ResolutionFailure(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
