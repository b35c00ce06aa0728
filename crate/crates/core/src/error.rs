use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("exponent p = {0} must lie strictly inside (0, 1)")]
    InvalidExponent(f64),

    #[error("Hölder pair (mu = {mu}, nu = {nu}) must satisfy mu, nu > 1 and 1/mu + 1/nu = 1")]
    InvalidHolderPair { mu: f64, nu: f64 },

    #[error("p * nu = {0} must be < 1")]
    HolderExponentTooLarge(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "quadrature did not reach tolerance {tol:e} within {evaluations} evaluations (error estimate {estimate:e})"
    )]
    QuadratureBudget {
        tol: f64,
        estimate: f64,
        evaluations: usize,
    },

    #[error("could not bracket a minimum after {0} expansions")]
    BracketExpansion(usize),

    #[error("ladder of depth {depth} tops out at level {top}, below the barrier {barrier}")]
    LadderDepthExhausted { depth: usize, top: f64, barrier: f64 },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("unknown law tag `{0}`")]
    UnknownLaw(String),

    #[error("estimator produced a non-finite value")]
    NonFiniteEstimate,

    #[error("{0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(LabError::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn ensure_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(LabError::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
