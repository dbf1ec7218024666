use thiserror::Error;

use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("linear part must be (-y, x)")]
    NonNormalizedLinearPart,
    #[error("order {0} is too small, need at least 2")]
    OrderTooSmall(usize),
    #[error("complex coefficients do not describe a real polynomial")]
    NonRealInput,
    #[error("polynomial is not homogeneous of degree {0}")]
    NotHomogeneous(u32),
    #[error("nonlinear part is not homogeneous")]
    NotQuasiHomogeneous,
    #[error("divergence component of degree {degree} has nonzero circle average {value}")]
    ObstructionNonzeroAverage { degree: u32, value: Rational },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("lambda must be nonzero")]
    LambdaZero,
    #[error("curve is the zero polynomial")]
    ZeroCurve,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("missing parameter `{0}`")]
    MissingParam(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integration step failed at t = {0}")]
    StepFailure(f64),
    #[error("time budget exhausted at t = {0}")]
    TimeBudgetExceeded(f64),
    #[error("angular velocity is not positive at t = {0}")]
    AngleStalled(f64),
    #[error("return-map displacements disagree in sign: {0:?}")]
    Inconsistent(Vec<f64>),
}
