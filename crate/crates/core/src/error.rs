use thiserror::Error;

/// Errors raised by the library. Feasibility verdicts of the solvers are
/// ordinary results, not errors; see [`crate::simultaneous::Feasibility`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("unknown constant {0:?} (expected one of sqrt2, sqrt3, sqrt5, phi, e, pi)")]
    UnknownConstant(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("budget exceeded: {needed} denominators needed, scan capped at {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(text: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            text: text.to_string(),
            reason: reason.into(),
        }
    }
}
