use crate::{Interpolation, RearrangeError, SampledFunction};

/// Upper bound for any `φ` with `φ(t) ≤ ρ(t) + γ(t)∫_t^∞ λφ`:
///
/// `t ↦ ρ(t) + γ(t)∫_t^∞ ρ(τ)λ(τ) exp(∫_t^τ λγ) dτ`,
///
/// evaluated with the composite trapezoid rule on the shared abscissae. All
/// three inputs vanish beyond the last abscissa.
pub fn gronwall_bound(
    rho: &SampledFunction,
    gamma: &SampledFunction,
    lambda: &SampledFunction,
) -> Result<SampledFunction, RearrangeError> {
    let t = rho.abscissae();
    for other in [gamma, lambda] {
        if other.abscissae() != t {
            return Err(RearrangeError::Length {
                what: "shared abscissae",
                got: other.len(),
                expected: t.len(),
            });
        }
    }
    for (what, f) in [("gamma", gamma), ("lambda", lambda)] {
        if let Some(i) = f.ordinates().iter().position(|&y| y < 0.0) {
            return Err(RearrangeError::Domain { what, at: t[i] });
        }
    }
    let r = rho.ordinates();
    let g = gamma.ordinates();
    let l = lambda.ordinates();
    let n = t.len();

    // tail[i] = ∫_{t_i}^{t_last} ρλ e^{Λ(τ) − Λ(t_i)} dτ, built right to left so
    // that no exponential is ever taken of a large cumulative.
    let mut tail = vec![0.0; n];
    for i in (0..n - 1).rev() {
        let h = t[i + 1] - t[i];
        let step = 0.5 * h * (l[i] * g[i] + l[i + 1] * g[i + 1]);
        let growth = step.exp();
        let piece = 0.5 * h * (r[i] * l[i] + r[i + 1] * l[i + 1] * growth);
        tail[i] = piece + growth * tail[i + 1];
    }
    let bound = (0..n).map(|i| r[i] + g[i] * tail[i]).collect();
    SampledFunction::new(t.to_vec(), bound, Interpolation::PiecewiseLinear)
}
