use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radicand {0} must be a positive non-square integer")]
    InvalidRadicand(String),

    #[error("mismatched radicands {0} and {1}")]
    MismatchedRadicand(String, String),

    #[error("division by zero")]
    ZeroDivisor,

    #[error("{0} is a perfect square")]
    PerfectSquare(String),

    #[error("period of sqrt({d}) exceeds {max_period} partial quotients")]
    PeriodTooLong { d: String, max_period: usize },

    #[error("index {index} out of range (at most {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("word is not palindromic")]
    NotPalindromic,

    #[error("continued fraction evaluation divides by zero")]
    DivisionByZero,

    #[error("normalization did not terminate within {budget} rewrites")]
    NonTerminating { budget: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("closed form is not a unit: {0}")]
    NonUnit(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("sign-flip derivation disagrees with the transcribed family: {0}")]
    NormalizationMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
