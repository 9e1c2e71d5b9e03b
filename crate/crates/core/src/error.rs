use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A parse failure with the byte offset where it happened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: Option<char>,
}

impl ParseError {
    pub(crate) fn new(position: usize, expected: impl Into<String>, found: Option<char>) -> Self {
        ParseError {
            position,
            expected: expected.into(),
            found,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.found {
            Some(c) => write!(
                f,
                "at offset {}: expected {}, found '{}'",
                self.position, self.expected, c
            ),
            None => write!(
                f,
                "at offset {}: expected {}, found end of input",
                self.position, self.expected
            ),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("system has no equations and no inequalities")]
    EmptySystem,
    #[error("bound requires s = 0 but the system has {0} inequalities")]
    HasInequalities(usize),
    #[error("invalid count: {0}")]
    InvalidCount(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("k-sum has {0} sign alternations, at most one is supported")]
    TooManyAlternations(usize),
    #[error("k-sum has a single term")]
    SingleTerm,
    #[error("k-sum is not in normalized form: {0}")]
    NotNormalized(&'static str),
    #[error("could not certify the result below {bits} bits of working precision")]
    PrecisionExhausted { bits: u32 },
    #[error("evaluation budget exceeded: {used} oracle calls, budget {budget}")]
    BudgetExceeded { used: u64, budget: u64 },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("exponent matrix is singular; the binomial system has no isolated roots")]
    DegenerateSystem,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable identifier, used by the CLI and the C interface.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse_error",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Empty(_) => "empty_input",
            Error::EmptySystem => "empty_system",
            Error::HasInequalities(_) => "has_inequalities",
            Error::InvalidCount(_) => "invalid_count",
            Error::Domain(_) => "domain_error",
            Error::TooManyAlternations(_) => "too_many_alternations",
            Error::SingleTerm => "single_term",
            Error::NotNormalized(_) => "not_normalized",
            Error::PrecisionExhausted { .. } => "precision_exhausted",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NotSquare { .. } => "not_square",
            Error::DegenerateSystem => "degenerate_system",
            Error::Invalid(_) => "invalid_input",
        }
    }

    /// Whether the failure is about malformed input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::DimensionMismatch { .. }
                | Error::Empty(_)
                | Error::EmptySystem
                | Error::InvalidCount(_)
                | Error::NotSquare { .. }
                | Error::Invalid(_)
        )
    }
}
