use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidArgument(String),
    /// An evaluator returned a non-finite value.
    EvaluationFailure { at: Vec<f64>, value: f64 },
    /// The integrator's total corner difference is (numerically) zero.
    DegenerateIntegrator,
    /// No grid node satisfied the requested condition up to the resolution cap.
    ResolutionInsufficient { resolution: usize },
    PreconditionViolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::PreconditionViolation(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::EvaluationFailure { at, value } => {
                write!(f, "evaluation failure: value {value} at {at:?}")
            }
            Error::DegenerateIntegrator => f.write_str("degenerate integrator: corner difference is zero"),
            Error::ResolutionInsufficient { resolution } => {
                write!(f, "resolution insufficient (searched up to {resolution})")
            }
            Error::PreconditionViolation(m) => write!(f, "precondition violated: {m}"),
        }
    }
}

impl core::error::Error for Error {}
