use alloc::string::String;

/// Errors raised by the pipeline stages.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter was outside its accepted domain.
    #[error("invalid parameter `{name}`: {message}")]
    Parameter { name: &'static str, message: String },

    #[error("document id must be non-empty")]
    EmptyId,

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    /// Training needs at least one document of each label.
    #[error("training set lacks {0} documents")]
    MissingClass(&'static str),

    #[error("vocabulary is empty: no training document produced a token")]
    EmptyVocabulary,

    #[error("down-sampling retained no negative training documents")]
    NoNegativesRetained,

    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),

    #[error("feature index {index} out of bounds for dimension {dimension}")]
    IndexOutOfBounds { index: usize, dimension: usize },

    #[error("no score for validation document `{0}`")]
    MissingScore(String),

    #[error("validation set has no relevant documents; recall is undefined")]
    NoRelevant,

    #[error("parameter grid dimension `{0}` is empty")]
    EmptyDimension(&'static str),

    #[error("unknown dimension `{0}`")]
    UnknownDimension(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
