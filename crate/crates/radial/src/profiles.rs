//! Comparison profiles `v`, `z` and the gradient bounds built on them.

use lorentz::quadrature::integrate_log;

use crate::thresholds::{choose_delta, drift_threshold};
use crate::{BoundProfile, Datum, Kind, ProblemParams, RadialError};

/// Multiplier applied where a step of the estimate chain has no explicit
/// constant.
pub const SAFETY_FACTOR: f64 = 2.0;

/// Ratio between the lower quadrature cutoff and the evaluation point in
/// integrals from the origin; the rest is closed by a power-law head.
const HEAD_RATIO: f64 = 1e-14;

const OMEGA_RTOL: f64 = 1e-12;

fn check_datum(params: &ProblemParams, fbar: &Datum) -> Result<(), RadialError> {
    let (a, b) = (params.omega(), fbar.omega());
    if (a - b).abs() > OMEGA_RTOL * a {
        return Err(RadialError::InvalidParams {
            what: "datum measure",
            value: b,
            reason: "the datum must live on (0, |Ω|] of the problem",
        });
    }
    Ok(())
}

fn require_kind(params: &ProblemParams, kind: Kind) -> Result<(), RadialError> {
    if params.kind() != kind {
        return Err(RadialError::Unsupported(match kind {
            Kind::Convection => "convection profile requested for a drift problem",
            Kind::Drift => "drift profile requested for a convection problem",
        }));
    }
    Ok(())
}

/// `∫₀^s g`: log panels down to `HEAD_RATIO·s`, then `g ∝ t^k` with `k`
/// read off `g(ε)` and `g(2ε)`. Nonintegrable heads give `+∞`.
fn integral_from_origin(s: f64, g: impl Fn(f64) -> f64) -> f64 {
    let eps = HEAD_RATIO * s;
    let body = integrate_log(eps, s, &g);
    let (g1, g2) = (g(eps), g(2.0 * eps));
    let head = if g1 == 0.0 {
        0.0
    } else if !(g1.is_finite() && g2 > 0.0) {
        f64::INFINITY
    } else {
        let k = (g2 / g1).log2();
        if k <= -1.0 {
            f64::INFINITY
        } else {
            eps * g1 / (k + 1.0)
        }
    };
    body + head
}

/// `C_δ`: the Young splitting constant. It is 1 when `p ≥ 2`.
fn splitting_constant(p: f64, delta: f64) -> f64 {
    if p >= 2.0 || delta.is_infinite() {
        return 1.0;
    }
    let e = (p - 1.0) / (2.0 - p);
    (1.0 - delta.powf(-e)).powf(-1.0 / e)
}

/// `v(t) = C t^{−γ} ∫_t^{|Ω|} s^{p'/N + γ − 1} f̃(s)^{1/(p−1)} ds`, the
/// comparison profile for the rearranged solution of the convection problem.
pub fn convection_profile(params: &ProblemParams, fbar: &Datum) -> Result<BoundProfile, RadialError> {
    require_kind(params, Kind::Convection)?;
    check_datum(params, fbar)?;
    let choice = choose_delta(params)?;
    let b_crit = crate::convection_threshold(params)?;
    let (n, p, alpha, omega) = (params.n(), params.p(), params.alpha(), params.omega());
    let pc = params.p_conj();
    let sigma = params.sigma();
    let (delta, gamma) = (choice.delta, choice.gamma);
    let alpha_root = alpha.powf(1.0 / (p - 1.0));

    let c_delta = splitting_constant(p, delta);
    let base = 1.0 / (alpha_root * sigma.powf(pc));
    let exp_f = if params.f_bound() == 0.0 {
        1.0
    } else {
        (delta * params.f_bound() * n * omega.powf(1.0 / n) / (alpha_root * sigma)).exp()
    };
    let exp_e = (n * params.b().max(gamma) / (p * (n - p))).exp();
    let c = SAFETY_FACTOR * c_delta * base * exp_f * exp_e;

    let moment = fbar.ftilde_moment(pc / n + gamma, 1.0 / (p - 1.0));
    let evaluator = move |t: f64| {
        let tail = moment.from(t);
        if tail == 0.0 {
            0.0
        } else {
            c * t.powf(-gamma) * tail
        }
    };
    let provenance = vec![
        ("N", n),
        ("p", p),
        ("alpha", alpha),
        ("omega", omega),
        ("B", params.b()),
        ("Fbound", params.f_bound()),
        ("m", params.m()),
        ("B_crit", b_crit),
        ("delta", delta),
        ("gamma", gamma),
        ("C_delta", c_delta),
        ("base", base),
        ("exp_F", exp_f),
        ("exp_E", exp_e),
        ("safety", SAFETY_FACTOR),
        ("C", c),
    ];
    Ok(BoundProfile::new(evaluator, provenance, omega))
}

/// Bound on `(1/s)∫₀^s |∇u|‾^{p−1}` for the convection problem:
///
/// `2[(1/s)∫₀^s (c_a v^{p−1} t^{−(p−1)/N} + c_b f̃ t^{1/N}) +
///  ((1/s)∫_s^{|Ω|} (c_c v^p t^{−p/N} + c_d f̃^{p'} t^{p'/N}))^{1/p'}]`.
///
/// A divergent integral gives `+∞` at that `s`.
pub fn convection_gradient_bound(
    params: &ProblemParams,
    vprof: &BoundProfile,
    fbar: &Datum,
) -> Result<BoundProfile, RadialError> {
    require_kind(params, Kind::Convection)?;
    check_datum(params, fbar)?;
    let (n, p, alpha, omega) = (params.n(), params.p(), params.alpha(), params.omega());
    let (b, f_bound) = (params.b(), params.f_bound());
    let pc = params.p_conj();
    let sigma = params.sigma();

    // Field coefficient after |E| ≤ B s^{−(p−1)/N} plus the bounded part.
    let field = if f_bound > 0.0 {
        2f64.powf(pc - 1.0) * (f_bound.powf(pc) * omega.powf(p / n) + b.powf(pc))
    } else {
        b.powf(pc)
    };
    let split = if field > 0.0 { 2f64.powf(pc - 1.0) } else { 1.0 };
    let c_a = field.powf(1.0 / pc) / alpha;
    let c_b = 1.0 / (alpha * sigma);
    let c_c = split * alpha.powf(-pc) * field;
    let c_d = split * alpha.powf(-pc) * sigma.powf(-pc);

    let near = fbar.ftilde_moment(1.0 + 1.0 / n, 1.0);
    let far = fbar.ftilde_moment(1.0 + pc / n, pc);
    let v = vprof.clone();
    let evaluator = move |s: f64| {
        let head_v = if c_a == 0.0 {
            0.0
        } else {
            c_a * integral_from_origin(s, |t| v.eval(t).powf(p - 1.0) * t.powf(-(p - 1.0) / n))
        };
        let head = (head_v + c_b * near.to(s)) / s;
        let tail_v = if c_c == 0.0 || s >= omega {
            0.0
        } else {
            c_c * integrate_log(s, omega, |t| v.eval(t).powf(p) * t.powf(-p / n))
        };
        let tail = ((tail_v + c_d * far.from(s)) / s).powf(1.0 / pc);
        SAFETY_FACTOR * (head + tail)
    };
    let provenance = vec![
        ("N", n),
        ("p", p),
        ("alpha", alpha),
        ("omega", omega),
        ("B", b),
        ("Fbound", f_bound),
        ("field", field),
        ("c_a", c_a),
        ("c_b", c_b),
        ("c_c", c_c),
        ("c_d", c_d),
        ("gamma", vprof.gamma()),
        ("delta", vprof.delta()),
        ("safety", SAFETY_FACTOR),
        ("C", SAFETY_FACTOR),
    ];
    Ok(BoundProfile::new(evaluator, provenance, omega))
}

/// Constants shared by the drift profile and its gradient bound.
struct DriftSetup {
    /// `κ = B/(ασ_N)`.
    kappa: f64,
    /// `exp((‖ℱ‖_∞ N|Ω|^{1/N} + NB/(p(N−p)))/(ασ_N))`.
    exp_d: f64,
    b_crit: f64,
}

fn drift_setup(params: &ProblemParams, fbar: &Datum) -> Result<DriftSetup, RadialError> {
    require_kind(params, Kind::Drift)?;
    check_datum(params, fbar)?;
    let b_crit = drift_threshold(params)?;
    if params.b() >= b_crit {
        return Err(RadialError::ThresholdViolation {
            b: params.b(),
            b_crit,
        });
    }
    let (n, p) = (params.n(), params.p());
    let a_sigma = params.alpha() * params.sigma();
    let kappa = params.b() / a_sigma;
    let exponent = params.f_bound() * n * params.omega().powf(1.0 / n)
        + n * params.b() / (p * (n - p));
    Ok(DriftSetup {
        kappa,
        exp_d: (exponent / a_sigma).exp(),
        b_crit,
    })
}

/// `J(t) = ∫₀^t f̄(s) s^{−κ} ds`, rejected when it diverges.
fn weighted_mass(fbar: &Datum, kappa: f64) -> Result<crate::Moment, RadialError> {
    let moment = fbar.fbar_moment(1.0 - kappa);
    if !fbar.is_zero() && !moment.to(fbar.omega()).is_finite() {
        return Err(RadialError::DivergentInnerIntegral);
    }
    Ok(moment)
}

/// `z(τ) = C ∫_τ^{|Ω|} t^{p'(1/N − 1) + κ/(p−1)} J(t)^{1/(p−1)} dt`, the
/// comparison profile for the rearranged solution of the drift problem.
pub fn drift_profile(params: &ProblemParams, fbar: &Datum) -> Result<BoundProfile, RadialError> {
    let setup = drift_setup(params, fbar)?;
    let (n, p, alpha, omega) = (params.n(), params.p(), params.alpha(), params.omega());
    let pc = params.p_conj();
    let kappa = setup.kappa;
    let c = SAFETY_FACTOR * setup.exp_d.powf(1.0 / (p - 1.0))
        / (alpha.powf(1.0 / (p - 1.0)) * params.sigma().powf(pc));
    let mass = weighted_mass(fbar, kappa)?;
    let weight = pc * (1.0 / n - 1.0) + kappa / (p - 1.0);
    let zero = fbar.is_zero();
    let evaluator = move |tau: f64| {
        if zero || tau >= omega {
            return 0.0;
        }
        c * integrate_log(tau, omega, |t| {
            t.powf(weight) * mass.to(t).powf(1.0 / (p - 1.0))
        })
    };
    let provenance = vec![
        ("N", n),
        ("p", p),
        ("alpha", alpha),
        ("omega", omega),
        ("B", params.b()),
        ("Fbound", params.f_bound()),
        ("m", params.m()),
        ("B_crit", setup.b_crit),
        ("kappa", kappa),
        ("exp_E", setup.exp_d),
        ("safety", SAFETY_FACTOR),
        ("gamma", kappa),
        ("delta", f64::NAN),
        ("C", c),
    ];
    Ok(BoundProfile::new(evaluator, provenance, omega))
}

/// Bound on `(1/s)∫₀^s |∇w|‾^{p−1}` for the drift problem:
/// `C₁[(1/s)∫₀^s Y + ((1/s)∫_s^{|Ω|} Y^{p'})^{1/p'}]` with
/// `Y(t) = t^{1/N − 1 + κ} J(t)`.
pub fn drift_gradient_bound(params: &ProblemParams, fbar: &Datum) -> Result<BoundProfile, RadialError> {
    let setup = drift_setup(params, fbar)?;
    let (n, p, alpha, omega) = (params.n(), params.p(), params.alpha(), params.omega());
    let pc = params.p_conj();
    let kappa = setup.kappa;
    let c1 = SAFETY_FACTOR * setup.exp_d / (alpha * params.sigma());
    let mass = weighted_mass(fbar, kappa)?;
    let zero = fbar.is_zero();
    let y = move |t: f64| t.powf(1.0 / n - 1.0 + kappa) * mass.to(t);
    let evaluator = move |s: f64| {
        if zero {
            return 0.0;
        }
        let head = integral_from_origin(s, &y) / s;
        let tail = if s >= omega {
            0.0
        } else {
            (integrate_log(s, omega, |t| y(t).powf(pc)) / s).powf(1.0 / pc)
        };
        c1 * (head + tail)
    };
    let provenance = vec![
        ("N", n),
        ("p", p),
        ("alpha", alpha),
        ("omega", omega),
        ("B", params.b()),
        ("Fbound", params.f_bound()),
        ("m", params.m()),
        ("B_crit", setup.b_crit),
        ("kappa", kappa),
        ("exp_E", setup.exp_d),
        ("safety", SAFETY_FACTOR),
        ("gamma", kappa),
        ("delta", f64::NAN),
        ("C", c1),
    ];
    Ok(BoundProfile::new(evaluator, provenance, omega))
}
