use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Reason a fundamental solution cannot be built for a given exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inadmissible {
    /// `beta = n/d`: the Riesz inversion degenerates.
    BetaIsNOverD { n: usize, d: u32 },
    /// `s = -beta` is a pole of the zeta function.
    PoleAtMinusBeta { beta: String, factor: String },
    /// `Z(-beta, f) = 0`, so the candidate solution is identically zero.
    ZetaVanishes,
    /// `-beta` coincides with a candidate pole `-n_E/N_E` of a resolution.
    ResolutionCandidate { big_n: u64, small_n: u64 },
    /// The exponent is not a positive real number.
    NonPositiveBeta,
}

impl fmt::Display for Inadmissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inadmissible::BetaIsNOverD { n, d } => write!(f, "beta = n/d = {n}/{d}"),
            Inadmissible::PoleAtMinusBeta { beta, factor } => {
                write!(f, "pole of Z at s=-{beta}: factor {factor} vanishes")
            }
            Inadmissible::ZetaVanishes => write!(f, "Z(-beta, f) = 0"),
            Inadmissible::ResolutionCandidate { big_n, small_n } => {
                write!(f, "-beta is the candidate pole -{small_n}/{big_n}")
            }
            Inadmissible::NonPositiveBeta => write!(f, "beta must be positive"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("enumeration of {required} points exceeds the budget of {budget}")]
    Budget { required: String, budget: u128 },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("form is not homogeneous of degree {degree}: offending monomials {offending:?}")]
    Homogeneity { degree: u32, offending: Vec<String> },

    #[error("pole: factor {factor} vanishes")]
    Pole { factor: String },

    #[error("divergent pairing: {0}")]
    Divergent(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("inadmissible: {}", join_reasons(.0))]
    Inadmissible(Vec<Inadmissible>),

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("outside the domain of validity: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn join_reasons(r: &[Inadmissible]) -> String {
    r.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub(crate) fn pole(factor: impl Into<String>) -> Self {
        Error::Pole {
            factor: factor.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
