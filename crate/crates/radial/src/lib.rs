//! Closed-form objects for convection and drift problems: smallness
//! thresholds on the singular field, comparison profiles that dominate the
//! rearranged solution and its gradient, the residual of the symmetrized
//! radial problem, exponents beyond the threshold, and the Lorentz
//! regularity each regime predicts.
//!
//! Every profile is a [`BoundProfile`] carrying the constants it was built
//! from, so a discrete solution can be checked against it pointwise and not
//! only by slope.

mod bound;
mod datum;
mod error;
mod params;
mod profiles;
mod regularity;
mod residual;
mod sharpness;
mod thresholds;

pub use bound::BoundProfile;
pub use datum::{Datum, DatumShape, Moment};
pub use error::RadialError;
pub use params::{Kind, ProblemParams};
pub use profiles::{
    convection_gradient_bound, convection_profile, drift_gradient_bound, drift_profile,
    SAFETY_FACTOR,
};
pub use regularity::{predicted_regularity, GradientRegularity, Regularity, RegularityCase};
pub use residual::symmetrized_residual;
pub use sharpness::{sharpness_exponents, GradientPrediction, SharpnessExponents, BORDERLINE_RTOL};
pub use thresholds::{
    choose_delta, convection_threshold, drift_threshold, threshold, DeltaChoice,
};
