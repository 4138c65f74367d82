use std::fmt;

use thiserror::Error;

/// Byte range into a source string, used for parse diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {span}: {message}")]
    Parse { message: String, span: SourceSpan },

    #[error("atom `{atom}` is not in the alphabet [{alphabet}]")]
    Alphabet { atom: String, alphabet: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("operation requires a closed term, but variable `{0}` occurs")]
    OpenTerm(String),

    #[error("valuation depth {depth} exceeded by history of length {len}")]
    DepthExceeded { depth: usize, len: usize },

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("invalid valuation description: {0}")]
    Valuation(String),

    #[error("independence of {target} within {set} is an open question")]
    UnresolvedIndependence { set: String, target: String },

    #[error("invalid argument: {0}")]
    InvalidArg(String),
}

pub type Result<T> = std::result::Result<T, Error>;
