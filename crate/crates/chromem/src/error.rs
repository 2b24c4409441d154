use thiserror::Error;

/// Errors surfaced by any module of the crate.
///
/// [`Error::code`] gives a stable module-qualified identifier used by the
/// command-line frontend.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("duplicate identifier: {0}")]
    DuplicateIdentifier(String),
    #[error("unknown {kind} `{name}`")]
    UnknownSymbol { kind: &'static str, name: String },
    #[error("missing transition from state `{state}` on color `{color}`")]
    MissingTransition { state: String, color: String },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("automaton is not normalized: {0}")]
    NotNormalized(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("search space too large: {0}")]
    SearchSpaceTooLarge(String),

    #[error("color `{0}` is not in the automaton alphabet")]
    ColorNotInAlphabet(String),
    #[error("vertex `{0}` has no outgoing edge")]
    DanglingVertex(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("graph is empty")]
    EmptyGraph,
    #[error("graph too large for brute-force search: {0}")]
    GraphTooLarge(String),

    #[error("i/o error: {0}")]
    Io(String),

    /// A solver certificate failed re-verification. Indicates a bug, never
    /// an input problem.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable module-qualified error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedDocument(_) => "automaton/MalformedDocument",
            Error::DuplicateIdentifier(_) => "automaton/DuplicateIdentifier",
            Error::UnknownSymbol { .. } => "automaton/UnknownSymbol",
            Error::MissingTransition { .. } => "automaton/MissingTransition",
            Error::AlphabetMismatch(_) => "automaton/AlphabetMismatch",
            Error::NotNormalized(_) => "preorder/NotNormalized",
            Error::InvalidDecomposition(_) => "synth/InvalidDecomposition",
            Error::SearchSpaceTooLarge(_) => "synth/SearchSpaceTooLarge",
            Error::ColorNotInAlphabet(_) => "games/ColorNotInAlphabet",
            Error::DanglingVertex(_) => "games/DanglingVertex",
            Error::InvalidWitness(_) => "games/InvalidWitness",
            Error::EmptyGraph => "hardness/EmptyGraph",
            Error::GraphTooLarge(_) => "hardness/GraphTooLarge",
            Error::Io(_) => "io/Error",
            Error::Internal(_) => "internal/InvariantViolated",
        }
    }
}
