use thiserror::Error;

/// Everything that can go wrong inside the engine.
///
/// The variants are grouped the way the command line reports them:
/// malformed input (`Parse`, `UnknownVariable`, `Invalid`), mathematical
/// preconditions that fail (`NonUnit`, `NonzeroConstant`,
/// `TruncationTooSmall`, ...) and `Consistency`, which signals that two
/// independent evaluation routes disagreed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },

    #[error("constant term {0} is not a unit")]
    NonUnit(String),

    #[error("inner series has nonzero constant term {0}; composition is undefined")]
    NonzeroConstant(String),

    #[error("truncation order {have} is too small, need at least {need}")]
    TruncationTooSmall { have: usize, need: usize },

    #[error("unknown characteristic series `{0}`")]
    UnknownSeries(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for errors caused by the shape of user input rather than by the
    /// mathematics of a valid request.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::UnknownVariable { .. } | Error::Invalid(_) | Error::UnknownSeries(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
