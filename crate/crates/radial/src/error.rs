use lorentz::LorentzError;
use rearrange::RearrangeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadialError {
    #[error("invalid parameter {what} = {value}: {reason}")]
    InvalidParams {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("field constant B = {b} is not below the threshold {b_crit}")]
    ThresholdViolation { b: f64, b_crit: f64 },
    #[error("unsupported case: {0}")]
    Unsupported(&'static str),
    #[error("inner integral of the datum diverges at the origin")]
    DivergentInnerIntegral,
    #[error("finite differences at radius {radius} with step {step} reach the origin")]
    CoordinateSingularity { radius: f64, step: f64 },
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
    #[error(transparent)]
    Rearrange(#[from] RearrangeError),
}
