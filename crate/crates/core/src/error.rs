use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set of size {n} exceeds the cap of {cap} for {what}")]
    CapExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("empty ground set: normalized quantities need n >= 1")]
    EmptyGroundSet,

    #[error("ground set mismatch: expected n = {expected}, found n = {found}")]
    GroundSetMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid block sizes: {0}")]
    InvalidSizes(String),

    #[error("set {mask:#x} has bits outside the ground set [{n}]")]
    SetOutOfRange { mask: u64, n: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("value {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("no sign change of the target function in [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    #[error(
        "covering not achieved after {tries} relabelings ({uncovered} permutations uncovered)"
    )]
    CoverageFailed { tries: usize, uncovered: usize },

    #[error("family does not support every permutation of its ground set")]
    NotCovering,

    #[error("family is not in unique mode")]
    NotUnique,

    #[error("base set system is not regularly self-intersecting")]
    NotRegular,

    #[error("semiring is not additively idempotent; overlapping families would over-count")]
    NotIdempotent,

    #[error("relation is not a strict partial order: {0}")]
    NotPartialOrder(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn cap(what: &'static str, n: usize, cap: usize) -> Self {
        Error::CapExceeded { what, n, cap }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors caused by a resource cap rather than malformed input.
    pub fn is_cap_violation(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
