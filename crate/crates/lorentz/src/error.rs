use rearrange::RearrangeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LorentzError {
    #[error("invalid Lorentz index (m = {m}, q = {q}): {reason}")]
    InvalidIndex { m: f64, q: f64, reason: &'static str },
    #[error("the maximal scale with m = 1 and finite q contains only the zero function")]
    MaximalUnitExponent,
    #[error("norm equivalence needs m > 1, got {0}")]
    EquivalenceExponent(f64),
    #[error("Hardy parameter {what} = {value} is out of range")]
    HardyParameter { what: &'static str, value: f64 },
    #[error("fit window ({lo}, {hi}) is not inside (0, {total}]")]
    Window { lo: f64, hi: f64, total: f64 },
    #[error("only {got} breakpoints in the fit window, at least {needed} needed")]
    InsufficientData { got: usize, needed: usize },
    #[error("profile is not strictly positive at s = {at}")]
    NonPositive { at: f64 },
    #[error(transparent)]
    Rearrange(#[from] RearrangeError),
}
