use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown builtin relation `{0}`")]
    UnknownRelation(String),

    #[error("relation mismatch: expected `{expected}`, found `{found}`")]
    RelationMismatch { expected: String, found: String },

    #[error("finite set element {0} exceeds the encodable bound")]
    ElementTooLarge(String),

    #[error("search exhausted its budget of {budget} stages: {context}")]
    BudgetExhausted { budget: u64, context: String },

    #[error("upper powerspace input must list at least one ideal")]
    EmptyCompact,

    #[error("invalid spec at {path}: {message}")]
    Spec { path: String, message: String },

    #[error("unknown check suite `{0}`")]
    UnknownSuite(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn spec(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Spec {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
