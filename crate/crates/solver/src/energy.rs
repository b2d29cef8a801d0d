use radial::ProblemParams;
use rearrange::unit_ball_volume;

use crate::{FieldSpec, RadialMesh, SolveResult, SolverError, Source};

/// Terms of the level-band energy inequality
/// `α∫_{k<|u|<k+h}|∇u|^p ≤ h∫_{|u|>k}|f| + (k+h)^{p−1}∫_{k<|u|<k+h}|E||∇u|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyCheck {
    pub energy: f64,
    pub source: f64,
    pub field: f64,
    /// `energy − source − field`; nonpositive up to quadrature error.
    pub slack: f64,
    /// No cell meets the band; every term is zero.
    pub empty_band: bool,
}

/// Radii in `[a, b]` where the linear interpolant from `va` to `vb` lies in
/// `(lo, hi)`.
fn level_interval(a: f64, b: f64, va: f64, vb: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let at = |v: f64| a + (b - a) * (v - va) / (vb - va);
    let (r1, r2) = if va == vb {
        if va > lo && va < hi {
            (a, b)
        } else {
            return None;
        }
    } else {
        let (x, y) = (at(lo), at(hi));
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        (x.max(a), y.min(b))
    };
    (r2 > r1).then_some((r1, r2))
}

/// Evaluates the three terms on the piecewise-linear interpolant of a
/// radial convection solve; the first cell is flat (`u'(0) = 0`). Level
/// sets are cut exactly inside each cell.
#[allow(clippy::too_many_arguments)]
pub fn energy_inequality_check(
    result: &SolveResult,
    params: &ProblemParams,
    mesh: &RadialMesh,
    field: &FieldSpec,
    source: &Source,
    k: f64,
    h: f64,
) -> Result<EnergyCheck, SolverError> {
    if !(k >= 0.0 && h > 0.0) {
        return Err(SolverError::InvalidArgument {
            what: "level band",
            reason: "needs k ≥ 0 and h > 0",
        });
    }
    let (n, p, alpha) = (params.n(), params.p(), params.alpha());
    let w = unit_ball_volume(mesh.dim());
    let level = result.truncation;
    let nodes = mesh.nodes();
    let (mut energy, mut src, mut fld) = (0.0, 0.0, 0.0);
    let mut empty = true;
    for c in 0..nodes.len() {
        let (a, va) = if c == 0 {
            (0.0, result.u[0].abs())
        } else {
            (nodes[c - 1], result.u[c - 1].abs())
        };
        let (b, vb) = (nodes[c], result.u[c].abs());
        // Sign changes inside a cell are not resolved: |u| is interpolated.
        let slope = (vb - va) / (b - a);
        if let Some((r1, r2)) = level_interval(a, b, va, vb, k, k + h) {
            empty = false;
            energy += alpha * slope.abs().powf(p) * w * (r2.powf(n) - r1.powf(n));
            let e = field.weighted_integral(r1, r2, level).abs() * n * w;
            fld += (k + h).powf(p - 1.0) * slope.abs() * e;
        }
        if let Some((r1, r2)) = level_interval(a, b, va, vb, k, f64::INFINITY) {
            let load = source.loads(mesh.dim(), &[r1, r2], level)?[0];
            src += h * load.abs() * n * w;
        }
    }
    if empty {
        return Ok(EnergyCheck {
            energy: 0.0,
            source: 0.0,
            field: 0.0,
            slack: 0.0,
            empty_band: true,
        });
    }
    Ok(EnergyCheck {
        energy,
        source: src,
        field: fld,
        slack: energy - src - fld,
        empty_band: false,
    })
}
