use radial::RadialError;
use rearrange::RearrangeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid mesh: {0}")]
    Mesh(&'static str),
    #[error("mesh and problem disagree: {0}")]
    Mismatch(&'static str),
    #[error("field constant B = {b} is not below the threshold {b_crit}")]
    ThresholdViolation { b: f64, b_crit: f64 },
    #[error("no convergence after {iterations} iterations (last relative update {final_update:e})")]
    NonConvergence { iterations: usize, final_update: f64 },
    #[error("singular linear system")]
    Singular,
    #[error("diffusion matrix not elliptic in cell {cell:?}: smallest eigenvalue {eigenvalue} below {alpha}")]
    Ellipticity {
        cell: (usize, usize, usize),
        eigenvalue: f64,
        alpha: f64,
    },
    #[error("invalid argument {what}: {reason}")]
    InvalidArgument {
        what: &'static str,
        reason: &'static str,
    },
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error(transparent)]
    Rearrange(#[from] RearrangeError),
}
