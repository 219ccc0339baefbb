use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("letter `{0}` is not in the alphabet")]
    LetterOutsideAlphabet(String),
    #[error("mirror is undefined for letter `{0}`")]
    MirrorUndefined(String),
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("invalid pattern `{name}`: {reason}")]
    InvalidPattern { name: String, reason: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("constraint not in catalog: feature `{feature}` on pattern `{pattern}`")]
    NotInCatalog { feature: String, pattern: String },
    #[error("pattern `{0}` has no reverse pattern in the catalog")]
    NotReversible(String),
    #[error("the empty word has no type")]
    EmptyWord,
    #[error("series needs at least {needed} values, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("index range [{lo}, {hi}] is invalid for a series of length {n}")]
    BadRange { lo: usize, hi: usize, n: usize },
    #[error("window length {m} is invalid for a series of length {n}")]
    BadWindow { m: usize, n: usize },
    #[error("arithmetic overflow while aggregating feature values")]
    Overflow,
    #[error("no presence strategy applies to pattern `{0}`; use the oracle")]
    NoPresenceStrategy(String),
    #[error("equation `{0}` cannot be expressed by the reformulation")]
    ReformulationUnsupported(String),
    #[error("cannot parse series: {0}")]
    SeriesParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
