//! Discrete solvers for convection and drift problems.
//!
//! The radial solvers work on the ball with the measure of the domain, in
//! any dimension `N`, with a vertex-centered finite-volume scheme: one
//! banded direct solve for the linear case `p = 2`, damped Picard iteration
//! on the lagged p-Laplacian coefficient otherwise. A small box solver in
//! three dimensions covers the linear convection problem with non-radial
//! coefficients.

mod banded;
mod box3d;
mod energy;
mod error;
mod field;
mod mesh;
mod radial_solve;
mod result;
mod source;
mod truncation;

pub use banded::{BandedLu, BandedMatrix, PIVOT_THRESHOLD};
pub use box3d::{solve_box_convection_3d, BoxProblem, MAX_BOX_CELLS};
pub use energy::{energy_inequality_check, EnergyCheck};
pub use error::SolverError;
pub use field::{FieldSpec, Orientation};
pub use mesh::{RadialMesh, MIN_NODES};
pub use radial_solve::{
    solve_radial_convection, solve_radial_drift, solve_truncated, weak_residual, SolverOptions,
    FULL_STEP_UPDATE, UPWIND_PECLET,
};
pub use result::SolveResult;
pub use source::Source;
pub use truncation::truncation_operators;
