use lorentz::LorentzIndex;

use crate::{Kind, ProblemParams, RadialError};

/// Tolerance for recognizing the exponents at which the prediction changes.
const EDGE_TOL: f64 = 1e-12;

/// Which regime of the existence theory applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularityCase {
    /// Data below the energy exponent: Lorentz bounds for `u` and `∇u`.
    BelowEnergy,
    /// Data above the energy exponent: finite energy plus a Lorentz bound
    /// for `u`.
    Energy,
    /// Lowest exponent, `p > 2 − 1/N`, data in `L¹`.
    LowestSummable,
    /// Lowest exponent, `p > 2 − 1/N`, data in `𝕃^{1,q}`.
    LowestLorentz,
    /// Lowest exponent at `p = 2 − 1/N`.
    LowestCritical,
    /// Lowest exponent below `p = 2 − 1/N`.
    LowestSubcritical,
}

impl RegularityCase {
    pub fn label(self) -> &'static str {
        match self {
            RegularityCase::BelowEnergy => "below-energy",
            RegularityCase::Energy => "energy",
            RegularityCase::LowestSummable => "lowest-L1",
            RegularityCase::LowestLorentz => "lowest-L1q",
            RegularityCase::LowestCritical => "lowest-critical-p",
            RegularityCase::LowestSubcritical => "lowest-subcritical-p",
        }
    }
}

/// Gradient regularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientRegularity {
    Lorentz(LorentzIndex),
    /// `∇u ∈ L^p`.
    EnergySpace,
}

/// Predicted integrability of a solution and its gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularity {
    pub case: RegularityCase,
    pub u_index: LorentzIndex,
    pub gradient: GradientRegularity,
    /// Log-log slope of `(1/s)∫₀^s |∇u|‾^{p−1}` implied by the weak-type
    /// gradient exponent; the energy case carries it too.
    pub gradient_average_slope: f64,
}

impl Regularity {
    /// Log-log slope of `ū`.
    pub fn u_slope(&self) -> f64 {
        -1.0 / self.u_index.m()
    }
}

fn unsupported(reason: &'static str) -> RadialError {
    RadialError::Unsupported(reason)
}

/// Lorentz indices predicted for `|u|` and `|∇u|` from `(N, p, m, q)`.
pub fn predicted_regularity(params: &ProblemParams) -> Result<Regularity, RadialError> {
    let (n, p, m, q) = (params.n(), params.p(), params.m(), params.q());
    let energy_exponent = params.sobolev_dual_exponent();
    let lowest = params.lower_exponent();
    if (m - energy_exponent).abs() <= EDGE_TOL * energy_exponent {
        return Err(unsupported("data exactly at the energy exponent"));
    }
    if m < lowest - EDGE_TOL {
        return Err(unsupported("data below the lowest admissible exponent"));
    }
    if m >= n / p {
        return Err(unsupported("data at or above N/p give bounded solutions"));
    }
    let qs = (p - 1.0) * q;
    if (m - lowest).abs() <= EDGE_TOL && params.kind() == Kind::Convection {
        return lowest_case(n, p, q);
    }
    let u_index = LorentzIndex::standard((p - 1.0) * n * m / (n - p * m), qs)?;
    let grad_m = (p - 1.0) * n * m / (n - m);
    let gradient_average_slope = -(p - 1.0) / grad_m;
    if m < energy_exponent {
        Ok(Regularity {
            case: RegularityCase::BelowEnergy,
            u_index,
            gradient: GradientRegularity::Lorentz(LorentzIndex::standard(grad_m, qs)?),
            gradient_average_slope,
        })
    } else {
        Ok(Regularity {
            case: RegularityCase::Energy,
            u_index,
            gradient: GradientRegularity::EnergySpace,
            gradient_average_slope,
        })
    }
}

/// Predictions at `m = max{1, N/(N(p−1)+1)}`.
fn lowest_case(n: f64, p: f64, q: f64) -> Result<Regularity, RadialError> {
    let qs = (p - 1.0) * q;
    let pivot = 2.0 - 1.0 / n;
    let (case, u_m, u_q, grad_m) = if (p - pivot).abs() <= EDGE_TOL {
        if q > n / (n - 1.0) {
            return Err(unsupported("q above N/(N−1) at p = 2 − 1/N"));
        }
        (RegularityCase::LowestCritical, n / (n - 1.0), (n - 1.0) * q / n, 1.0)
    } else if p < pivot {
        if q > 1.0 / (p - 1.0) {
            return Err(unsupported("q above 1/(p−1) below p = 2 − 1/N"));
        }
        (RegularityCase::LowestSubcritical, n / (n - 1.0), qs, 1.0)
    } else {
        let case = if q.is_infinite() {
            RegularityCase::LowestSummable
        } else {
            RegularityCase::LowestLorentz
        };
        (case, (p - 1.0) * n / (n - p), qs, (p - 1.0) * n / (n - 1.0))
    };
    Ok(Regularity {
        case,
        u_index: LorentzIndex::standard(u_m, u_q)?,
        gradient: GradientRegularity::Lorentz(LorentzIndex::standard(grad_m, qs)?),
        gradient_average_slope: -(p - 1.0) / grad_m,
    })
}
