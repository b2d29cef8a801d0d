use std::fmt::Write as _;

use rearrange::csv::fmt17;
use rearrange::{decreasing_rearrangement, DecreasingProfile, WeightedSample};

use crate::{RadialMesh, SolverError};

/// Outcome of a solve.
///
/// For radial solves `u[i]` is the value at node `i` and `grad[i]` the slope
/// magnitude on the cell `(r_{i−1}, r_i]`; the first cell repeats the slope
/// of the second. For box solves both are per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub u: Vec<f64>,
    pub grad: Vec<f64>,
    pub iterations: usize,
    /// Relative max-norm change of the last iterate; zero for a single
    /// linear solve, relative residual for the Krylov solver.
    pub final_update: f64,
    /// Max hat-function residual relative to the ℓ¹ norm of the nodal loads.
    pub weak_residual: f64,
    /// Truncation level `n`; `+∞` for the untruncated problem.
    pub truncation: f64,
}

impl SolveResult {
    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Nodal values as a sample over the mesh cells.
    pub fn u_sample(&self, mesh: &RadialMesh) -> Result<WeightedSample, SolverError> {
        Ok(WeightedSample::with_total(
            &self.u,
            &mesh.cell_measures(),
            mesh.domain_measure(),
        )?)
    }

    pub fn grad_sample(&self, mesh: &RadialMesh) -> Result<WeightedSample, SolverError> {
        Ok(WeightedSample::with_total(
            &self.grad,
            &mesh.cell_measures(),
            mesh.domain_measure(),
        )?)
    }

    /// `ū_h`.
    pub fn rearranged(&self, mesh: &RadialMesh) -> Result<DecreasingProfile, SolverError> {
        Ok(decreasing_rearrangement(&self.u_sample(mesh)?))
    }

    /// `|∇u_h|‾`.
    pub fn rearranged_gradient(&self, mesh: &RadialMesh) -> Result<DecreasingProfile, SolverError> {
        Ok(decreasing_rearrangement(&self.grad_sample(mesh)?))
    }

    /// `# key = value` provenance lines followed by `r,u,grad` rows.
    pub fn csv(&self, mesh: &RadialMesh, provenance: &[(&str, String)]) -> String {
        let mut out = String::new();
        for (k, v) in provenance {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "# nodes = {}", mesh.len());
        let _ = writeln!(out, "# grading = {}", fmt17(mesh.grading()));
        let _ = writeln!(out, "# iterations = {}", self.iterations);
        let _ = writeln!(out, "# final_update = {}", fmt17(self.final_update));
        let _ = writeln!(out, "# weak_residual = {}", fmt17(self.weak_residual));
        let _ = writeln!(out, "# truncation = {}", fmt17(self.truncation));
        out.push_str("r,u,grad\n");
        for ((r, u), g) in mesh.nodes().iter().zip(&self.u).zip(&self.grad) {
            let _ = writeln!(out, "{},{},{}", fmt17(*r), fmt17(*u), fmt17(*g));
        }
        out
    }
}
