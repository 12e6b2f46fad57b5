use num_bigint::BigUint;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("cycle through variable `{0}`")]
    SlpCycle(String),
    #[error("missing start variable")]
    SlpMissingStart,
    #[error("duplicate rule for `{0}`")]
    SlpDuplicateRule(String),
    #[error("expansion length {0} exceeds limit {1}")]
    ExpansionTooLong(BigUint, u64),
    #[error("position {0} out of range (length {1})")]
    PositionOutOfRange(BigUint, BigUint),
    #[error("invalid range [{0}, {1}]")]
    InvalidRange(BigUint, BigUint),
    #[error("morphism has no image for letter `{0}`")]
    MissingImage(String),
    #[error("sequence is not super-decreasing at index {0}")]
    NotSuperDecreasing(usize),
    #[error("support limit {0} exceeded during compressed evaluation")]
    SupportLimitExceeded(usize),
    #[error("permutation degree mismatch for `{0}`")]
    DegreeMismatch(String),
    #[error("generator map is not inverse-consistent at `{0}`")]
    InvInconsistent(String),
    #[error("input has length {got}, expected {expected}")]
    InputLength { expected: usize, got: usize },
    #[error("circuit is not one-hot on input {0}")]
    NotOneHot(String),
    #[error("copy level {0} exceeds the configured bound {1}")]
    LevelBound(i64, i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
