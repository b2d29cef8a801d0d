//! Rearrangement calculus on discretized functions.
//!
//! A measurable function on a domain of finite measure is represented as a
//! [`WeightedSample`]: a list of cells, each carrying a value and a positive
//! measure. From a sample one obtains its distribution function, its
//! decreasing rearrangement (a [`DecreasingProfile`] on `(0, |Ω|]`), the
//! running average of that rearrangement, and pseudo-rearrangements of a
//! second function along the level sets of the first.
//!
//! Every integral of a step function in this crate is a finite sum of
//! `value × length` terms; nothing here uses generic quadrature.

mod error;
mod gronwall;
mod ops;
mod profile;
mod sample;
mod sampled;
mod talenti;

pub mod csv;

pub use error::RearrangeError;
pub use gronwall::gronwall_bound;
pub use ops::{
    check_liminf_property, decreasing_rearrangement, distribution_function, maximal_function,
    pseudo_rearrangement, PseudoRearrangement,
};
pub use profile::{log_grid, DecreasingProfile, Head};
pub use sample::WeightedSample;
pub use sampled::{Interpolation, SampledFunction};
pub use talenti::{talenti_check, unit_ball_volume, TalentiLevel, TalentiReport};
