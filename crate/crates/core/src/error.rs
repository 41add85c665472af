//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A stream ended before the requested number of digits was available.
    #[error("stream supplies too few digits: needed {needed}, had {available}")]
    InsufficientDigits { needed: usize, available: usize },

    /// Operation requires a non-terminated (irrational) stream.
    #[error("operation is undefined on a terminated (rational) stream")]
    TerminatedStream,

    /// A stream of the other expansion kind was supplied.
    #[error("expected a {expected} stream, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },

    /// No digit >= 3 appeared in the supplied window, so no RCF quotient
    /// can be formed; the caller must supply more digits.
    #[error("window contains only the digit 2; supply more digits")]
    AllTwosWindow,

    /// A digit sequence violates the expansion's digit bounds.
    #[error("malformed digit stream: {0}")]
    MalformedStream(String),

    /// A computation exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Interval refinement could not separate a value from an integer.
    #[error("refinement budget exceeded while disambiguating a floor")]
    RefinementBudgetExceeded,

    /// The alphabet has no usable letters for the requested operation.
    #[error("alphabet is empty after removing parabolic letters")]
    EmptyAlphabet,

    /// No seed words satisfy the search conditions.
    #[error("no admissible seed words for the given alphabet and length")]
    NoWords,

    /// Invalid input that should have been caught by the caller.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Schedule parameters violate a required inequality.
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}

impl Error {
    /// True for errors that signal a resource/budget problem rather than a
    /// caller mistake; the CLI maps these to exit code 3.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded(_) | Error::RefinementBudgetExceeded
        )
    }
}
