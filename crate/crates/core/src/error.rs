use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("bessel J_{n}({x}) is outside the supported range |n| <= 200, |x| <= 500")]
    BesselOutOfRange { n: i32, x: f64 },

    #[error("integration step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("non-finite state encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("mixed unit systems: {0}")]
    UnitMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("too few oscillation peaks: found {found}, need at least 3")]
    TooFewPeaks { found: usize },

    #[error("serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Time at which a numerical failure happened, when the error carries one.
    pub fn failure_time(&self) -> Option<f64> {
        match self {
            Error::StepSizeUnderflow { t } | Error::NonFinite { t } => Some(*t),
            _ => None,
        }
    }
}
