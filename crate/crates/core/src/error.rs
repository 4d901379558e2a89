use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("words live in different free groups ({left} vs {right})")]
    AmbientMismatch { left: String, right: String },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: String, found: String },

    #[error("word length {len} exceeds the limit of {limit} letters")]
    WordTooLong { len: usize, limit: usize },

    #[error("supplied inverse does not invert the automorphism at generator {generator}")]
    InvalidInverse { generator: String },

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("position {position} out of range for {strands} strands")]
    PositionOutOfRange { position: usize, strands: usize },

    #[error("letter `{letter}` is not part of the {theory} alphabet")]
    IllegalLetter { letter: String, theory: String },

    #[error("theory mismatch: expected {expected}, found {found}")]
    TheoryMismatch { expected: String, found: String },

    #[error("strand mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },

    #[error("relation `{relation}` does not match at index {index}")]
    NoMatch { relation: String, index: usize },

    #[error("Wada type {0} does not extend to welded braids (only types 1 and 2 respect the mixed relation)")]
    UnsupportedWada(u8),

    #[error("presentation has no generator y")]
    MissingY,

    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,

    #[error("enumeration of {evaluations} tuples exceeds the cap of {cap}")]
    CapExceeded { evaluations: u128, cap: u64 },

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}
