use rearrange::DecreasingProfile;

use crate::LorentzError;

/// Minimum number of breakpoints a fit window must contain.
pub const MIN_FIT_POINTS: usize = 8;

/// Least-squares line through `(ln s, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard error of the slope; zero for an exact fit.
    pub std_error: f64,
    pub points: usize,
}

/// Fits `value ≈ e^{intercept} s^{slope}` over the breakpoints in
/// `[lo, hi]`. A flat profile reports `r² = 1`.
pub fn fit_exponent(
    profile: &DecreasingProfile,
    window: (f64, f64),
) -> Result<ExponentFit, LorentzError> {
    let (lo, hi) = window;
    let total = profile.total_measure();
    if !(lo > 0.0 && lo < hi && hi <= total * (1.0 + 1e-12)) {
        return Err(LorentzError::Window { lo, hi, total });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&s, &v) in profile.breakpoints().iter().zip(profile.values()) {
        if s < lo || s > hi {
            continue;
        }
        if !(v > 0.0) {
            return Err(LorentzError::NonPositive { at: s });
        }
        xs.push(s.ln());
        ys.push(v.ln());
    }
    fit_line(&xs, &ys)
}

/// Ordinary least squares of `ys` on `xs`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<ExponentFit, LorentzError> {
    let n = xs.len();
    if n < MIN_FIT_POINTS {
        return Err(LorentzError::InsufficientData { got: n, needed: MIN_FIT_POINTS });
    }
    let nf = n as f64;
    let mean_x = xs.iter().sum::<f64>() / nf;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = (syy - slope * sxy).max(0.0);
    // Ordinates equal up to rounding are a perfect (flat) fit.
    let scale = ys.iter().fold(0.0f64, |a, y| a.max(y.abs())).max(1.0);
    let flat = syy <= nf * (16.0 * f64::EPSILON * scale).powi(2);
    let r_squared = if flat { 1.0 } else { 1.0 - residual / syy };
    let std_error = (residual / (nf - 2.0) / sxx).sqrt();
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
        std_error,
        points: n,
    })
}
