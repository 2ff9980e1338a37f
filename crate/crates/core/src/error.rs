//! Error types shared across the kernel.

use thiserror::Error;

/// Position-tagged syntax error from the formula grammar or a line-oriented
/// input file. Lines and columns are 1-based and counted in characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),

    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),

    #[error("invalid proposition or rule name `{0}`")]
    InvalidName(String),

    #[error("duplicate proposition `{0}`")]
    DuplicateProposition(String),

    #[error("signature has {count} propositions, cap is {cap}")]
    TooManyPropositions { count: usize, cap: usize },

    #[error("invalid rational `{text}`: {reason}")]
    InvalidRational { text: String, reason: String },

    #[error("negative weight for world {world}")]
    NegativeWeight { world: String },

    #[error("duplicate weight entry for world {world}")]
    DuplicateWeightEntry { world: String },

    #[error("total world mass is zero")]
    ZeroTotalMass,

    #[error("context has zero total mass")]
    ZeroMassContext,

    #[error("duplicate rule name `{0}`")]
    DuplicateRuleName(String),

    #[error("duplicate threshold formula `{0}`")]
    DuplicateThreshold(String),

    #[error("{count} default rules exceed the enumeration cap of {cap}")]
    TooManyDefaults { count: usize, cap: usize },

    #[error("{count} rules exceed the enumeration cap of {cap}")]
    TooManyRules { count: usize, cap: usize },

    #[error("{count} generating defaults exceed the ordering cap of {cap}")]
    TooManyGenerating { count: usize, cap: usize },

    #[error("rule `{0}` is not normal")]
    NonNormalRule(String),

    #[error("epsilon must satisfy 0 <= epsilon < 1, got {0}")]
    EpsilonOutOfRange(String),

    #[error("strategy must order every rule exactly once")]
    InvalidStrategy,

    #[error("extension cannot be reached by thresholding at any epsilon < 1")]
    UnrankableExtension,

    #[error("inputs were built over different signatures")]
    SignatureMismatch,

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap this error with the 1-based line number of an input file.
    pub fn at_line(self, line: usize) -> Error {
        match self {
            // A syntax error already carries its position.
            Error::Syntax(_) | Error::AtLine { .. } => self,
            other => Error::AtLine {
                line,
                source: Box::new(other),
            },
        }
    }

    /// The underlying error, with any line wrapper stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
