use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A probability outside the open unit interval, or an unparsable one.
    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("invalid backend: {0}")]
    InvalidBackend(String),

    /// Fixed-precision registers could no longer split an interval into two
    /// non-empty parts.
    #[error("interval width underflow: {0}")]
    Underflow(String),

    #[error("source block has {actual} bits, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("codeword exhausted after {consumed} bits with {decoded} of {expected} source bits decoded")]
    Truncated {
        consumed: usize,
        decoded: usize,
        expected: usize,
    },

    #[error("malformed frame: {0}")]
    MalformedFrame(String),

    #[error("invalid bit sequence: {0}")]
    InvalidBits(String),

    #[error("block length {n} exceeds the limit of {limit}")]
    BlockTooLarge { n: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal consistency check failed. Always a defect.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
