use std::fmt;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("exact counting needs {n} variables but the cap is {cap}")]
    OracleCap { n: usize, cap: usize },
    #[error("benchmark generation infeasible: {0}")]
    Infeasible(String),
    #[error("all sampling weights are zero")]
    ZeroWeights,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// A DNF parse failure, tagged with the 1-based input line.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("missing `p dnf <n> <m>` header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("literal {literal} out of range for {n} variables")]
    LiteralOutOfRange { literal: i64, n: usize },
    #[error("clause contains both x{var} and -x{var}")]
    ContradictoryClause { var: usize },
    #[error("empty clause")]
    EmptyClause,
    #[error("clause not terminated by 0")]
    UnterminatedClause,
    #[error("malformed weight line: {0}")]
    MalformedWeight(String),
    #[error("weight {value} for variable {var} outside [0, 1]")]
    WeightOutOfRange { var: usize, value: f64 },
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCountMismatch { declared: usize, found: usize },
}
