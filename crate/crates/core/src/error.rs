use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong inside the algorithms.
///
/// [`Error::is_input_error`] separates problems with the supplied data or
/// arguments from failures of the computation itself.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidSpace(String),
    UnknownLabel { doc: String, label: String },
    DuplicateId(String),
    InvalidArgument(String),
    InvalidLexicon(String),
    DimensionMismatch { expected: usize, found: usize },
    RepMismatch { expected: crate::WordRep, found: crate::WordRep },
    TooFewDocuments { needed: usize, found: usize },
    EmptyCorpus,
    EmptyVocabulary,
    EmptyLexicon,
    EmptyInput,
    EmptyClass(String),
    UndefinedCorrelation,
    Singular,
    ZeroNorm,
}

impl Error {
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpace(_)
                | Error::UnknownLabel { .. }
                | Error::DuplicateId(_)
                | Error::InvalidArgument(_)
                | Error::InvalidLexicon(_)
                | Error::DimensionMismatch { .. }
                | Error::RepMismatch { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpace(msg) => write!(f, "invalid emotion space: {msg}"),
            Error::UnknownLabel { doc, label } => {
                write!(f, "unknown label {label:?} in votes of document {doc:?}")
            }
            Error::DuplicateId(id) => write!(f, "duplicate id {id:?}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidLexicon(msg) => write!(f, "invalid lexicon: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::RepMismatch { expected, found } => {
                write!(f, "word representation mismatch: lexicon uses {expected}, got {found}")
            }
            Error::TooFewDocuments { needed, found } => {
                write!(f, "too few usable documents: need {needed}, found {found}")
            }
            Error::EmptyCorpus => f.write_str("corpus is empty"),
            Error::EmptyVocabulary => f.write_str("vocabulary is empty after frequency cutoff"),
            Error::EmptyLexicon => f.write_str("lexicon is empty"),
            Error::EmptyInput => f.write_str("empty input"),
            Error::EmptyClass(class) => write!(f, "class {class} has no training rows"),
            Error::UndefinedCorrelation => {
                f.write_str("correlation undefined for a constant series")
            }
            Error::Singular => {
                f.write_str("singular system; use a positive ridge strength")
            }
            Error::ZeroNorm => f.write_str("zero-norm vector"),
        }
    }
}

impl core::error::Error for Error {}
