use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field order {0} is not prime")]
    NotPrime(u64),
    #[error("field order {0} exceeds 2^31 - 1")]
    FieldTooLarge(u64),
    #[error("elements from different fields (q={left} vs q={right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("no vector outside the given subspaces (search space exhausted)")]
    SearchExhausted,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("network contains a cycle through edge `{0}`")]
    Cycle(String),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge set must be nonempty")]
    EmptyEdgeSet,
    #[error("level {level} out of range 0..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("code shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("code is not decodable at sink `{0}`")]
    NotDecodable(String),
    #[error("observed symbols are inconsistent with any source input")]
    InconsistentObservation,

    #[error("exhaustive enumeration of {size} inputs exceeds budget {budget}")]
    EnumerationBudget { size: u64, budget: u64 },
    #[error("input is not a rate-{rate} security-level-{level} secure code (fails at {witness})")]
    NotSecure {
        rate: usize,
        level: usize,
        witness: String,
    },
    #[error("field of order {q} too small: need q > {bound}")]
    FieldTooSmall { q: u32, bound: usize },
    #[error("codes are not related by truncation: {0}")]
    UnrelatedCodes(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
