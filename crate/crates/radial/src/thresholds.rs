use crate::{Kind, ProblemParams, RadialError};

/// `B_crit = α^{1/(p−1)} ω_N^{1/N} (N − pm)/((p−1)m)`.
pub fn convection_threshold(params: &ProblemParams) -> Result<f64, RadialError> {
    let (n, p, m) = (params.n(), params.p(), params.m());
    if m >= n / p {
        return Err(RadialError::InvalidParams {
            what: "m",
            value: m,
            reason: "the convection threshold needs m < N/p",
        });
    }
    Ok(params.alpha().powf(1.0 / (p - 1.0)) * params.ball_volume().powf(1.0 / n) * (n - p * m)
        / ((p - 1.0) * m))
}

/// `B_crit = α ω_N^{1/N} N (m − 1)/m`.
pub fn drift_threshold(params: &ProblemParams) -> Result<f64, RadialError> {
    let (n, m) = (params.n(), params.m());
    if m <= 1.0 {
        return Err(RadialError::Unsupported(
            "the drift threshold vanishes for m = 1",
        ));
    }
    Ok(params.alpha() * params.ball_volume().powf(1.0 / n) * n * (m - 1.0) / m)
}

/// Threshold for the kind of problem `params` describes.
pub fn threshold(params: &ProblemParams) -> Result<f64, RadialError> {
    match params.kind() {
        Kind::Convection => convection_threshold(params),
        Kind::Drift => drift_threshold(params),
    }
}

/// Splitting parameter `δ > 1` and the resulting exponent `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaChoice {
    pub delta: f64,
    pub gamma: f64,
}

/// `δ = √(B_crit/B)` and `γ = δB/(α^{1/(p−1)}σ_N)`, so that `γ` sits strictly
/// between the field's own exponent and the critical one.
///
/// Without a singular field `γ = 0`; `δ` only weighs the bounded part then,
/// and is `2` if that part is present and `+∞` otherwise.
pub fn choose_delta(params: &ProblemParams) -> Result<DeltaChoice, RadialError> {
    let b_crit = convection_threshold(params)?;
    let b = params.b();
    if b >= b_crit {
        return Err(RadialError::ThresholdViolation { b, b_crit });
    }
    if b == 0.0 {
        let delta = if params.f_bound() > 0.0 { 2.0 } else { f64::INFINITY };
        return Ok(DeltaChoice { delta, gamma: 0.0 });
    }
    let delta = (b_crit / b).sqrt();
    let gamma = delta * b / (params.alpha().powf(1.0 / (params.p() - 1.0)) * params.sigma());
    assert!(
        gamma < params.critical_exponent(),
        "γ = {gamma} must stay below the critical exponent"
    );
    Ok(DeltaChoice { delta, gamma })
}
