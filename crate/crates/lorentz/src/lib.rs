//! Lorentz-type quasi-norms of decreasing profiles.
//!
//! Three scales are provided: the standard `‖f‖_{m,q}` built on `f̄`, the
//! maximal `⌈f⌉_{(m,q)}` built on the running average `f̃`, and the truncated
//! `𝕃^{1,q}` scale. Any of them may be `+∞`, which is a value and not an
//! error. The crate also carries the weighted Hardy transform with its
//! empirically calibrated constant, a power-law exponent fit, and the
//! quadrature used wherever a closed form is not available.

mod error;
mod fit;
mod hardy;
mod index;
mod norms;

pub mod quadrature;

pub use error::LorentzError;
pub use fit::{fit_exponent, fit_line, ExponentFit, MIN_FIT_POINTS};
pub use hardy::{
    hardy_inequality_check, hardy_transform, random_profiles, HardyCheck, HardyConstant,
    HardyParams, HardyTransform, CALIBRATION_SIZE,
};
pub use index::{LorentzIndex, Scale};
pub use norms::{l1q_norm, lorentz_norm, norm_equivalence_check, EquivalenceChain};
