use std::fmt;

use crate::multigraph::EdgeId;

/// Errors raised by the model, the solvers and the text formats.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid Hamiltonian cycle: {0}")]
    InvalidCycle(String),
    #[error("instances disagree on vertex count or mode")]
    MismatchedInstances,
    #[error("invalid vertex count {0}: at least 3 vertices are required")]
    InvalidN(usize),
    #[error("edge {0} is already fixed")]
    AlreadyFixed(EdgeId),
    #[error("trail mark {mark} is beyond the trail length {len}")]
    InvalidMark { mark: usize, len: usize },
    #[error("the partial state is not a complete decomposition")]
    NotComplete,
    #[error("exhaustive enumeration is limited to n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Bad token, missing or extra line, wrong label count.
    Syntax,
    /// Well-formed text describing an invalid object.
    Semantic,
}

/// A diagnostic for a malformed instance or certificate file.
/// `line` and `column` are 1-based; column points at the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Syntax,
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn semantic(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Semantic,
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "semantic error",
        };
        write!(
            f,
            "{}:{}: {}: {}",
            self.line, self.column, kind, self.message
        )
    }
}

impl std::error::Error for ParseError {}
