use crate::{ProblemParams, RadialError};

/// Relative distance to `(N−1)/N` under which the gradient prediction is
/// reported as borderline.
pub const BORDERLINE_RTOL: f64 = 1e-9;

/// Gradient prediction beyond the threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientPrediction {
    /// Slope of `|∇v|‾`.
    Slope(f64),
    /// `γ(B) = (N−1)/N`: the slope would be `−1`, the edge of integrability.
    Borderline,
    /// `γ(B) > (N−1)/N`: no prediction.
    Unavailable,
}

/// Exponents of the explicit radial solution once the field exceeds the
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessExponents {
    /// `γ(B) = B/(α N ω_N^{1/N})`.
    pub gamma_b: f64,
    /// Slope of `ū`, `−γ(B)`.
    pub u_slope: f64,
    pub gradient: GradientPrediction,
    /// `γ(B)` lies in `((N−2m)/(Nm), 1)`, where the degradation applies.
    pub in_window: bool,
}

/// Exponents for `p = 2` and a field above the threshold.
pub fn sharpness_exponents(params: &ProblemParams) -> Result<SharpnessExponents, RadialError> {
    if params.p() != 2.0 {
        return Err(RadialError::Unsupported(
            "sharpness exponents are defined for p = 2",
        ));
    }
    let n = params.n();
    let gamma_b = params.b() / (params.alpha() * params.sigma());
    let edge = (n - 1.0) / n;
    let gradient = if (gamma_b - edge).abs() <= BORDERLINE_RTOL * edge {
        GradientPrediction::Borderline
    } else if gamma_b < edge {
        GradientPrediction::Slope(-(gamma_b + 1.0 / n))
    } else {
        GradientPrediction::Unavailable
    };
    Ok(SharpnessExponents {
        gamma_b,
        u_slope: -gamma_b,
        gradient,
        in_window: gamma_b > params.critical_exponent() && gamma_b < 1.0,
    })
}
