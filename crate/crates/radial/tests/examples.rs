use lorentz::{fit_exponent, LorentzIndex};
use radial::*;
use rearrange::{log_grid, DecreasingProfile};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

/// Window deep enough that lower-order terms from `t = |Ω|` are below 1%.
const DEEP: (f64, f64) = (1e-20, 1e-16);

fn slope(bound: &BoundProfile, window: (f64, f64)) -> f64 {
    let grid = log_grid(window.0, window.1, 41);
    fit_exponent(&bound.profile(&grid).unwrap(), window)
        .unwrap()
        .slope
}

fn convection(dim: u32, m: f64, b_fraction: f64) -> ProblemParams {
    let base = ProblemParams::model(Kind::Convection, dim, 2.0, m, f64::INFINITY).unwrap();
    let b_crit = convection_threshold(&base).unwrap();
    base.with_b(b_fraction * b_crit).unwrap()
}

fn drift(dim: u32, m: f64, b_fraction: f64) -> ProblemParams {
    let base = ProblemParams::model(Kind::Drift, dim, 2.0, m, f64::INFINITY).unwrap();
    let b_crit = drift_threshold(&base).unwrap();
    base.with_b(b_fraction * b_crit).unwrap()
}

#[test]
fn convection_threshold_values() {
    let params = convection(4, 1.2, 0.0);
    let expected = (std::f64::consts::PI.powi(2) / 2.0).powf(0.25) * 4.0 / 3.0;
    let got = convection_threshold(&params).unwrap();
    assert!(close(got, expected, 1e-12));
    assert!(close(got, 1.9871, 1e-4));

    let heavy = ProblemParams::new(Kind::Convection, 4, 2.0, 16.0, 16.0, 1.0, 0.0, 0.0, 1.2, 2.0)
        .unwrap();
    assert!(close(convection_threshold(&heavy).unwrap(), 16.0 * got, 1e-12));
    assert!(close(convection_threshold(&heavy).unwrap(), 31.79, 1e-3));

    let near = convection(4, 2.0 - 1e-9, 0.0);
    assert!(convection_threshold(&near).unwrap() < 1e-8);
    assert!(ProblemParams::model(Kind::Convection, 4, 2.0, 2.0, 1.0).is_err());
}

#[test]
fn drift_threshold_values() {
    let params = drift(4, 2.0, 0.0);
    let got = drift_threshold(&params).unwrap();
    assert!(close(got, (std::f64::consts::PI.powi(2) / 2.0).powf(0.25) * 2.0, 1e-12));
    // The quoted 2.9806 is a rounding slip: (π²/2)^{1/4}·2 = 2.98090.
    assert!(close(got, 2.98090, 1e-5));
    assert!(drift_threshold(&drift(4, 1.0 + 1e-9, 0.0)).unwrap() < 1e-8);
    let doubled = ProblemParams::new(Kind::Drift, 4, 2.0, 2.0, 2.0, 1.0, 0.0, 0.0, 2.0, 1.0).unwrap();
    assert!(close(drift_threshold(&doubled).unwrap(), 2.0 * got, 1e-14));
    let conv = convection(4, 1.0, 0.0);
    assert!(matches!(drift_threshold(&conv), Err(RadialError::Unsupported(_))));
}

#[test]
fn delta_choice_rule() {
    let quarter = convection(4, 1.2, 0.25);
    let choice = choose_delta(&quarter).unwrap();
    assert!(close(choice.delta, 2.0, 1e-12));
    assert!(close(choice.gamma, 0.5 * quarter.critical_exponent(), 1e-12));

    let tiny = convection(4, 1.2, 1e-12);
    assert!(choose_delta(&tiny).unwrap().gamma < 1e-6);

    let high = convection(4, 1.2, 0.9);
    let ratio = choose_delta(&high).unwrap().gamma / high.critical_exponent();
    assert!(close(ratio, 0.9f64.sqrt(), 1e-12));
    assert!(ratio < 1.0);

    let over = convection(4, 1.2, 1.0);
    match choose_delta(&over) {
        Err(RadialError::ThresholdViolation { b, b_crit }) => assert_eq!(b, b_crit),
        other => panic!("expected a threshold violation, got {other:?}"),
    }
}

#[test]
fn zero_datum_gives_zero_bounds() {
    let params = convection(4, 1.2, 0.5);
    let zero = Datum::constant(0.0, 1.0).unwrap();
    let v = convection_profile(&params, &zero).unwrap();
    let g = convection_gradient_bound(&params, &v, &zero).unwrap();
    for t in [1e-9, 1e-3, 0.5, 1.0] {
        assert_eq!(v.eval(t), 0.0);
        assert_eq!(g.eval(t), 0.0);
    }
    let dparams = drift(6, 2.0, 0.5);
    let z = drift_profile(&dparams, &zero).unwrap();
    let dg = drift_gradient_bound(&dparams, &zero).unwrap();
    for t in [1e-9, 1e-3, 0.5] {
        assert_eq!(z.eval(t), 0.0);
        assert_eq!(dg.eval(t), 0.0);
    }
}

#[test]
fn convection_profile_slope_for_marcinkiewicz_datum() {
    for fraction in [0.0, 0.5] {
        let params = convection(4, 1.2, fraction);
        let datum = Datum::marcinkiewicz(1.2, 1.0).unwrap();
        let v = convection_profile(&params, &datum).unwrap();
        let s = slope(&v, DEEP);
        assert!(close(s, -1.0 / 3.0, 0.02), "B fraction {fraction}: slope {s}");
        assert!(v.gamma() < params.critical_exponent());
    }
}

#[test]
fn convection_profile_l1_model() {
    let params = convection(4, 1.0, 0.0);
    let exponent = (4.0 - 2.0) / 4.0;
    // A bounded datum keeps v bounded, well inside the L¹ envelope.
    let flat = convection_profile(&params, &Datum::constant(1.0, 1.0).unwrap()).unwrap();
    let scaled: Vec<f64> = [1e-12f64, 1e-8, 1e-4]
        .iter()
        .map(|&t| flat.eval(t) * t.powf(exponent))
        .collect();
    assert!(scaled.windows(2).all(|w| w[0] < w[1]));
    // The extreme L¹ datum reaches it.
    let mass = convection_profile(&params, &Datum::concentrated(1.0, 1.0).unwrap()).unwrap();
    assert!(close(slope(&mass, DEEP), -exponent, 0.02));
}

#[test]
fn convection_gradient_slopes() {
    let params = convection(4, 1.2, 0.5);
    let datum = Datum::marcinkiewicz(1.2, 1.0).unwrap();
    let v = convection_profile(&params, &datum).unwrap();
    let g = convection_gradient_bound(&params, &v, &datum).unwrap();
    let s = slope(&g, DEEP);
    assert!(close(s, -7.0 / 12.0, 0.03), "slope {s}");

    let l1 = convection(4, 1.0, 0.0);
    let mass = Datum::concentrated(1.0, 1.0).unwrap();
    let v = convection_profile(&l1, &mass).unwrap();
    let g = convection_gradient_bound(&l1, &v, &mass).unwrap();
    assert!(close(slope(&g, DEEP), -3.0 / 4.0, 0.03));
}

#[test]
fn drift_profile_slope_and_zero_field_limit() {
    let params = drift(6, 2.0, 0.5);
    let datum = Datum::marcinkiewicz(2.0, 1.0).unwrap();
    let z = drift_profile(&params, &datum).unwrap();
    let s = slope(&z, DEEP);
    assert!(close(s, -1.0 / 6.0, 0.02), "slope {s}");

    // Without a field the weights collapse to s⁰.
    let free = drift(6, 2.0, 0.0);
    let z0 = drift_profile(&free, &datum).unwrap();
    let c = z0.constant();
    for tau in [1e-6f64, 1e-3, 0.3] {
        // ∫_τ^1 t^{−5/3} · 2t^{1/2} dt = 12(τ^{−1/6} − 1).
        let exact = c * 12.0 * (tau.powf(-1.0 / 6.0) - 1.0);
        assert!(close(z0.eval(tau), exact, 1e-10), "{} vs {exact}", z0.eval(tau));
    }
}

#[test]
fn drift_gradient_slopes() {
    // Inside the range where the gradient estimate carries the Lorentz
    // exponent, 1 < m < (p*)'.
    let params = drift(6, 1.25, 0.5);
    let datum = Datum::marcinkiewicz(1.25, 1.0).unwrap();
    let g = drift_gradient_bound(&params, &datum).unwrap();
    let expected = -(6.0 - 1.25) / (6.0 * 1.25);
    assert!(close(slope(&g, DEEP), expected, 0.03));

    // Above (p*)' the energy tail ((1/s)∫_s Y^{p'})^{1/p'} ~ s^{−1/p'} wins.
    let params = drift(6, 2.0, 0.5);
    let datum = Datum::marcinkiewicz(2.0, 1.0).unwrap();
    let g = drift_gradient_bound(&params, &datum).unwrap();
    assert!(close(slope(&g, DEEP), -0.5, 0.03));
}

#[test]
fn drift_gradient_matches_convection_without_field() {
    let datum = Datum::marcinkiewicz(1.25, 1.0).unwrap();
    let dparams = drift(6, 1.25, 0.0);
    let cparams = convection(6, 1.25, 0.0);
    let v = convection_profile(&cparams, &datum).unwrap();
    let conv = convection_gradient_bound(&cparams, &v, &datum).unwrap();
    let drift = drift_gradient_bound(&dparams, &datum).unwrap();
    for s in log_grid(1e-8, 1.0, 20) {
        assert!(close(drift.eval(s), conv.eval(s), 1e-9), "s = {s}");
    }
}

#[test]
fn drift_rejects_divergent_inner_integral() {
    let params = drift(6, 2.0, 0.5);
    let mass = Datum::concentrated(1.0, 1.0).unwrap();
    assert_eq!(drift_profile(&params, &mass).unwrap_err(), RadialError::DivergentInnerIntegral);
    let over = drift(6, 2.0, 1.0);
    assert!(matches!(
        drift_profile(&over, &Datum::constant(1.0, 1.0).unwrap()),
        Err(RadialError::ThresholdViolation { .. })
    ));
}

fn residual_norm(params: &ProblemParams, gamma: f64, datum: &Datum, step: f64) -> f64 {
    let radii: Vec<f64> = (1..=9).map(|k| 0.1 * k as f64 * params.radius()).collect();
    symmetrized_residual(params, 1.0, gamma, datum, &radii, step)
        .unwrap()
        .iter()
        .map(|r| r * r)
        .sum::<f64>()
        .sqrt()
}

#[test]
fn symmetrized_residual_converges_at_second_order() {
    let params = convection(4, 1.2, 0.5);
    let gamma = choose_delta(&params).unwrap().gamma;
    let datum = Datum::marcinkiewicz(1.2, 1.0).unwrap();
    let h = 0.01 * params.radius();
    let coarse = residual_norm(&params, gamma, &datum, h);
    let fine = residual_norm(&params, gamma, &datum, h / 2.0);
    assert!(coarse / fine >= 3.5, "ratio {}", coarse / fine);
}

#[test]
fn symmetrized_residual_trivial_cases() {
    let params = convection(3, 1.2, 0.0);
    let zero = Datum::constant(0.0, 1.0).unwrap();
    let radii = [0.2, 0.4];
    let r = symmetrized_residual(&params, 1.0, 0.0, &zero, &radii, 1e-3).unwrap();
    assert!(r.iter().all(|&x| x == 0.0));

    // γ = 0, constant datum: v is the Poisson solution, quadratic in r.
    let one = Datum::constant(1.0, 1.0).unwrap();
    let h = 1e-2;
    let r = symmetrized_residual(&params, 1.0, 0.0, &one, &radii, h).unwrap();
    let scale = 3.0 * 3.0 * params.ball_volume().powf(2.0 / 3.0);
    assert!(r.iter().all(|&x| x.abs() <= 1e-8 * scale), "{r:?}");

    assert!(matches!(
        symmetrized_residual(&params, 1.0, 0.0, &one, &[1e-3], 1e-2),
        Err(RadialError::CoordinateSingularity { .. })
    ));
    let p3 = ProblemParams::model(Kind::Convection, 4, 1.5, 1.2, 1.0).unwrap();
    assert!(symmetrized_residual(&p3, 1.0, 0.0, &one, &radii, h).is_err());
}

fn sharp(b_over_sigma: f64) -> SharpnessExponents {
    let base = convection(4, 1.2, 0.0);
    sharpness_exponents(&base.with_b(b_over_sigma * base.sigma()).unwrap()).unwrap()
}

#[test]
fn sharpness_examples() {
    let s = sharp(0.5);
    assert!(close(s.gamma_b, 0.5, 1e-14));
    assert!(close(s.u_slope, -0.5, 1e-14));
    assert_eq!(s.gradient, GradientPrediction::Slope(-0.75));
    assert!(s.in_window);

    let critical = sharp(1.0 / 3.0);
    assert!(close(critical.u_slope, -1.0 / 3.0, 1e-12));
    assert!(!critical.in_window);

    assert_eq!(sharp(0.75).gradient, GradientPrediction::Borderline);
    assert_eq!(sharp(0.8).gradient, GradientPrediction::Unavailable);
    assert!(!sharp(1.2).in_window);
}

fn regularity(p: f64, dim: u32, m: f64, q: f64) -> Result<Regularity, RadialError> {
    predicted_regularity(&ProblemParams::model(Kind::Convection, dim, p, m, q).unwrap())
}

fn lorentz(index: &GradientRegularity) -> LorentzIndex {
    match index {
        GradientRegularity::Lorentz(i) => *i,
        GradientRegularity::EnergySpace => panic!("expected a Lorentz index"),
    }
}

#[test]
fn regularity_examples() {
    let r = regularity(2.0, 6, 1.25, f64::INFINITY).unwrap();
    assert_eq!(r.case, RegularityCase::BelowEnergy);
    assert!(close(r.u_index.m(), 15.0 / 7.0, 1e-14));
    assert!(r.u_index.q().is_infinite());
    assert!(close(lorentz(&r.gradient).m(), 30.0 / 19.0, 1e-14));

    let r = regularity(2.0, 6, 2.0, 2.0).unwrap();
    assert_eq!(r.case, RegularityCase::Energy);
    assert_eq!(r.gradient, GradientRegularity::EnergySpace);
    assert!(close(r.u_index.m(), 6.0, 1e-14));
    assert_eq!(r.u_index.q(), 2.0);

    for dim in [3, 4, 6] {
        let n = dim as f64;
        let r = regularity(2.0, dim, 1.0, f64::INFINITY).unwrap();
        assert_eq!(r.case, RegularityCase::LowestSummable);
        assert!(close(r.u_index.m(), n / (n - 2.0), 1e-14));
        assert!(close(lorentz(&r.gradient).m(), n / (n - 1.0), 1e-14));
    }

    let r = regularity(1.7, 5, 10.0 / 9.0, 1.0).unwrap();
    assert_eq!(r.case, RegularityCase::LowestSubcritical);
    assert!(close(r.u_index.m(), 1.25, 1e-12));
    assert!(close(r.u_index.q(), 0.7, 1e-12));
    assert!(close(lorentz(&r.gradient).m(), 1.0, 1e-14));
    assert!(close(lorentz(&r.gradient).q(), 0.7, 1e-12));

    let r = regularity(2.0 - 1.0 / 4.0, 4, 1.0, 1.0).unwrap();
    assert_eq!(r.case, RegularityCase::LowestCritical);
    assert!(close(r.u_index.q(), 0.75, 1e-12));

    assert!(matches!(regularity(2.0, 6, 1.5, 1.0), Err(RadialError::Unsupported(_))));
    assert!(matches!(regularity(1.5, 5, 1.05, 1.0), Err(RadialError::Unsupported(_))));
}

#[test]
fn regularity_slopes_match_profile_exponents() {
    let r = regularity(2.0, 4, 1.2, f64::INFINITY).unwrap();
    assert!(close(r.u_slope(), -1.0 / 3.0, 1e-12));
    assert!(close(r.gradient_average_slope, -7.0 / 12.0, 1e-12));
    let drift_params = ProblemParams::model(Kind::Drift, 6, 2.0, 2.0, 1.0).unwrap();
    let r = predicted_regularity(&drift_params).unwrap();
    assert!(close(r.u_slope(), -1.0 / 6.0, 1e-12));
}

#[test]
fn profile_serialization() {
    let params = convection(4, 1.2, 0.5);
    let v = convection_profile(&params, &Datum::marcinkiewicz(1.2, 1.0).unwrap()).unwrap();
    let csv = v.csv(&[0.25, 0.5, 1.0]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,bound"));
    assert_eq!(lines.count(), 3);
    let block = v.provenance_block();
    for key in ["C = ", "gamma = ", "delta = ", "exp_E = ", "safety = "] {
        assert!(block.lines().any(|l| l.starts_with(key)), "missing {key}");
    }
    let product: f64 = ["safety", "C_delta", "base", "exp_F", "exp_E"]
        .iter()
        .map(|k| v.get(k).unwrap())
        .product();
    assert!(close(product, v.constant(), 1e-14));
}

#[test]
fn tabulated_datum_matches_closed_form() {
    let params = convection(4, 1.2, 0.5);
    let grid = log_grid(1e-12, 1.0, 400);
    let tab = Datum::profile(DecreasingProfile::power_law(1.0, 1.0 / 1.2, &grid).unwrap());
    let exact = Datum::marcinkiewicz(1.2, 1.0).unwrap();
    let v_tab = convection_profile(&params, &tab).unwrap();
    let v_exact = convection_profile(&params, &exact).unwrap();
    for t in [1e-9, 1e-5, 1e-2, 0.5] {
        assert!(close(v_tab.eval(t), v_exact.eval(t), 1e-2), "t = {t}");
    }
}
