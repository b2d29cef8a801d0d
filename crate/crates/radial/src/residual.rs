use crate::{Datum, ProblemParams, RadialError};

/// Pointwise residual of the symmetrized linear problem satisfied by
/// `v(x) = v̄(ω_N|x|^N)`, where `v̄(t) = C t^{−γ} ∫_t^{|Ω|} s^{2/N + γ − 1} f̃`.
///
/// The residual is
/// `−v'' − (N−1)v'/r − γN(v'/r + (N−2)v/r²) − C N² ω_N^{2/N} f̄(ω_N r^N)`,
/// with `v'` and `v''` replaced by centered differences of step `step`. The
/// last term carries `f̄`: differentiating `t ↦ t f̃(t)` returns `f̄`, so this
/// is the source for which the identity is exact. Only `p = 2`.
pub fn symmetrized_residual(
    params: &ProblemParams,
    c: f64,
    gamma: f64,
    fbar: &Datum,
    radii: &[f64],
    step: f64,
) -> Result<Vec<f64>, RadialError> {
    if params.p() != 2.0 {
        return Err(RadialError::Unsupported(
            "the symmetrized residual is defined for p = 2",
        ));
    }
    if !(step > 0.0) {
        return Err(RadialError::InvalidParams {
            what: "step",
            value: step,
            reason: "finite-difference step must be positive",
        });
    }
    let n = params.n();
    let w = params.ball_volume();
    let omega = params.omega();
    let outer = params.radius();
    let moment = fbar.ftilde_moment(2.0 / n + gamma, 1.0);
    let v = |r: f64| {
        let t = w * r.powf(n);
        c * t.powf(-gamma) * moment.from(t)
    };
    let source = c * n * n * w.powf(2.0 / n);
    radii
        .iter()
        .map(|&r| {
            if r - step <= 0.0 {
                return Err(RadialError::CoordinateSingularity { radius: r, step });
            }
            if r + step > outer * (1.0 + 1e-12) {
                return Err(RadialError::InvalidParams {
                    what: "radius",
                    value: r,
                    reason: "stencil leaves the symmetrized ball",
                });
            }
            let (lo, mid, hi) = (v(r - step), v(r), v(r + step));
            let d2 = (hi - 2.0 * mid + lo) / (step * step);
            let d1 = (hi - lo) / (2.0 * step);
            let t = (w * r.powf(n)).min(omega);
            Ok(-d2 - (n - 1.0) * d1 / r
                - gamma * n * (d1 / r + (n - 2.0) * mid / (r * r))
                - source * fbar.fbar(t))
        })
        .collect()
}
