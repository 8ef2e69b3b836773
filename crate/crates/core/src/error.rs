use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty word")]
    EmptyWord,
    #[error("value {value} is outside 1..={n}")]
    OutOfRange { value: usize, n: usize },
    #[error("value {0} appears more than once")]
    Duplicate(usize),
    #[error("cannot parse word {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("position {position} is outside 1..={max}")]
    PositionOutOfRange { position: usize, max: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("closed form not applicable: {0}")]
    NotApplicable(String),
    #[error("degree {n} exceeds the enumeration ceiling {ceiling}")]
    TooLarge { n: usize, ceiling: usize },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
