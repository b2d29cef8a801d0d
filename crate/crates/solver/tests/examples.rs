use lorentz::fit_exponent;
use radial::*;
use rearrange::{maximal_function, unit_ball_volume, WeightedSample};
use solver::*;

/// Slope window for discrete rearrangements, as fractions of `|Ω|`.
const FIT: (f64, f64) = (1e-12, 1e-8);

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

fn ball(dim: u32) -> f64 {
    unit_ball_volume(dim)
}

fn params(kind: Kind, dim: u32, omega: f64, m: f64, b_fraction: f64) -> ProblemParams {
    let base = ProblemParams::new(kind, dim, 2.0, 1.0, 1.0, omega, 0.0, 0.0, m, f64::INFINITY)
        .unwrap();
    let b_crit = threshold(&base).unwrap();
    base.with_b(b_fraction * b_crit).unwrap()
}

fn max_error(result: &SolveResult, mesh: &RadialMesh, exact: impl Fn(f64) -> f64) -> f64 {
    mesh.nodes()
        .iter()
        .zip(&result.u)
        .map(|(&r, u)| (u - exact(r)).abs())
        .fold(0.0, f64::max)
}

fn poisson(kind: Kind, nodes: usize) -> (SolveResult, RadialMesh) {
    let p = params(kind, 3, ball(3), 1.2, 0.0);
    let mesh = RadialMesh::new(3, 1.0, nodes, 1.0).unwrap();
    let field = FieldSpec::new(&p, Orientation::Inward);
    let source = Source::from(Datum::constant(1.0, p.omega()).unwrap());
    let options = SolverOptions::default();
    let result = match kind {
        Kind::Convection => solve_radial_convection(&p, &mesh, &field, &source, &options),
        Kind::Drift => solve_radial_drift(&p, &mesh, &field, &source, &options),
    }
    .unwrap();
    (result, mesh)
}

#[test]
fn radial_poisson_is_second_order() {
    for kind in [Kind::Convection, Kind::Drift] {
        let exact = |r: f64| (1.0 - r * r) / 6.0;
        let (coarse, coarse_mesh) = poisson(kind, 200);
        let (fine, fine_mesh) = poisson(kind, 400);
        let e1 = max_error(&coarse, &coarse_mesh, exact);
        let e2 = max_error(&fine, &fine_mesh, exact);
        // Exact loads make the scheme nodally exact here; the bound is the
        // O(h²) envelope.
        assert!(e1 <= (1.0 / 200.0f64).powi(2), "{kind:?}: {e1:e}");
        assert!(e2 <= (1.0 / 400.0f64).powi(2), "{kind:?}: {e2:e}");
        assert_eq!(*fine.u.last().unwrap(), 0.0);
    }
}

fn l2_error(result: &SolveResult, mesh: &RadialMesh, exact: impl Fn(f64) -> f64) -> f64 {
    mesh.nodes()
        .iter()
        .zip(&result.u)
        .zip(mesh.cell_measures())
        .map(|((&r, u), w)| (u - exact(r)).powi(2) * w)
        .sum::<f64>()
        .sqrt()
}

/// Inward field `−(c/r + F)` with `c` from `B` at half the threshold (or
/// zero), on the unit ball in three dimensions.
fn manufactured_setup(kind: Kind, singular: bool, f_bound: f64) -> (ProblemParams, FieldSpec, f64) {
    let m = if kind == Kind::Drift { 2.0 } else { 1.2 };
    let p = params(kind, 3, ball(3), m, if singular { 0.5 } else { 0.0 });
    let field = FieldSpec::with_parts(kind, 3, p.b(), f_bound, 1.0, Orientation::Inward);
    let coef = p.b() * ball(3).powf(-1.0 / 3.0);
    assert!(close(field.radial(0.25, f64::INFINITY), -(4.0 * coef + f_bound), 1e-14));
    (p, field, coef)
}

/// `(max, L²)` errors for `u* = 1 − r²`, with `G = −r^{N−1}(u*' − u*E_r)`.
fn manufactured_convection(nodes: usize, singular: bool, f_bound: f64) -> (f64, f64) {
    let (p, field, _) = manufactured_setup(Kind::Convection, singular, f_bound);
    let mesh = RadialMesh::new(3, 1.0, nodes, 1.0).unwrap();
    let source = Source::primitive(move |r| {
        let e = field.radial(r, f64::INFINITY);
        -r * r * (-2.0 * r - (1.0 - r * r) * e)
    });
    let result = solve_radial_convection(&p, &mesh, &field, &source, &SolverOptions::default())
        .unwrap();
    let exact = |r: f64| 1.0 - r * r;
    (max_error(&result, &mesh, exact), l2_error(&result, &mesh, exact))
}

/// `(max, L²)` errors for `w* = (1 − r²)²`, with
/// `G = −r^{N−1}w*' − ∫₀^r s^{N−1}E_r w*'`.
fn manufactured_drift(nodes: usize, singular: bool, f_bound: f64) -> (f64, f64) {
    let (p, field, c) = manufactured_setup(Kind::Drift, singular, f_bound);
    let mesh = RadialMesh::new(3, 1.0, nodes, 1.0).unwrap();
    let source = Source::primitive(move |r: f64| {
        let (r3, r2) = (r.powi(3), r * r);
        let field_part =
            c * (r3 / 3.0 - r3 * r2 / 5.0) + f_bound * (r3 * r / 4.0 - r3 * r * r2 / 6.0);
        4.0 * r3 * (1.0 - r2) - 4.0 * field_part
    });
    let result =
        solve_radial_drift(&p, &mesh, &field, &source, &SolverOptions::default()).unwrap();
    let exact = |r: f64| (1.0 - r * r).powi(2);
    (max_error(&result, &mesh, exact), l2_error(&result, &mesh, exact))
}

const ORDER_RATIO: f64 = 3.482_202_253_184_496_5; // 2^1.8

#[test]
fn manufactured_bounded_fields_converge_at_second_order_in_max_norm() {
    for (e1, e2) in [
        (manufactured_convection(200, false, 3.0).0, manufactured_convection(400, false, 3.0).0),
        (manufactured_drift(200, false, 3.0).0, manufactured_drift(400, false, 3.0).0),
    ] {
        assert!(e1 / e2 >= ORDER_RATIO, "errors {e1:e} {e2:e}");
    }
}

// The r^{-1} field makes the nodal error grow like h² log(1/h) at the
// origin; the L² error over the ball keeps the full order.
#[test]
fn manufactured_singular_fields_converge_at_second_order_in_l2() {
    for (e1, e2) in [
        (manufactured_convection(200, true, 0.0).1, manufactured_convection(400, true, 0.0).1),
        (manufactured_drift(200, true, 0.0).1, manufactured_drift(400, true, 0.0).1),
    ] {
        assert!(e1 / e2 >= ORDER_RATIO, "errors {e1:e} {e2:e}");
    }
    assert!(manufactured_convection(400, true, 0.0).0 < 1e-5);
    assert!(manufactured_drift(400, true, 0.0).0 < 1e-5);
}

fn power_instance(kind: Kind, dim: u32, m: f64, nodes: usize) -> (ProblemParams, RadialMesh, FieldSpec, Source) {
    let p = params(kind, dim, 1.0, m, 0.5);
    let mesh = RadialMesh::for_domain(dim, 1.0, nodes, 1.0).unwrap();
    let field = FieldSpec::new(&p, Orientation::Inward);
    let source = Source::from(Datum::marcinkiewicz(m, 1.0).unwrap());
    (p, mesh, field, source)
}

#[test]
fn convection_power_datum_slopes() {
    let (p, mesh, field, source) = power_instance(Kind::Convection, 4, 1.2, 100_000);
    let result = solve_radial_convection(&p, &mesh, &field, &source, &SolverOptions::default())
        .unwrap();
    let ubar = result.rearranged(&mesh).unwrap();
    let u_fit = fit_exponent(&ubar, FIT).unwrap();
    let grad_avg = maximal_function(&result.rearranged_gradient(&mesh).unwrap());
    let g_fit = fit_exponent(&grad_avg, FIT).unwrap();
    assert!(close(u_fit.slope, -1.0 / 3.0, 0.05));
    assert!(close(g_fit.slope, -7.0 / 12.0, 0.07));
}

#[test]
fn drift_power_datum_slopes() {
    let (p, mesh, field, source) = power_instance(Kind::Drift, 6, 2.0, 100_000);
    let result =
        solve_radial_drift(&p, &mesh, &field, &source, &SolverOptions::default()).unwrap();
    let wbar = result.rearranged(&mesh).unwrap();
    let w_fit = fit_exponent(&wbar, FIT).unwrap();
    let grad_avg = maximal_function(&result.rearranged_gradient(&mesh).unwrap());
    let g_fit = fit_exponent(&grad_avg, FIT).unwrap();
    assert!(close(w_fit.slope, -1.0 / 6.0, 0.05));
    assert!(close(g_fit.slope, -1.0 / 3.0, 0.07));
}


/// `(1 − r^k)/(k N^{1/(p−1)})` with `k = p/(p−1)` solves the p-Laplacian
/// with `f = 1` on the unit ball of dimension `N = 4`.
fn p_poisson(p: f64, r: f64) -> f64 {
    let k = p / (p - 1.0);
    (1.0 - r.powf(k)) / (k * 4f64.powf(1.0 / (p - 1.0)))
}

#[test]
fn picard_recovers_radial_p_laplacian() {
    for kind in [Kind::Convection, Kind::Drift] {
        for p in [1.5, 3.0] {
            let m = if kind == Kind::Drift { 2.0 } else { 1.05 };
            let params = ProblemParams::new(kind, 4, p, 1.0, 1.0, ball(4), 0.0, 0.0, m, 2.0)
                .unwrap();
            let mesh = RadialMesh::new(4, 1.0, 400, 1.0).unwrap();
            let field = FieldSpec::zero(kind, 4);
            let source = Source::from(Datum::constant(1.0, ball(4)).unwrap());
            let options = SolverOptions::default();
            let result = match kind {
                Kind::Convection => solve_radial_convection(&params, &mesh, &field, &source, &options),
                Kind::Drift => solve_radial_drift(&params, &mesh, &field, &source, &options),
            }
            .unwrap();
            let err = max_error(&result, &mesh, |r| p_poisson(p, r));
            assert!(err < 1e-4 * p_poisson(p, 0.0), "{kind:?} p = {p}: {err:e}");
            assert!(result.final_update <= options.tol);
            assert!(result.iterations > 1 && result.iterations < options.max_iter);
            assert_eq!(*result.u.last().unwrap(), 0.0);
        }
    }
}

#[test]
fn fields_at_the_threshold_need_sharpness_mode() {
    let p = params(Kind::Convection, 4, 1.0, 1.2, 1.0);
    let mesh = RadialMesh::for_domain(4, 1.0, 64, 1.0).unwrap();
    let field = FieldSpec::new(&p, Orientation::Inward);
    let source = Source::from(Datum::marcinkiewicz(1.2, 1.0).unwrap());
    let err = solve_radial_convection(&p, &mesh, &field, &source, &SolverOptions::default());
    assert!(matches!(err, Err(SolverError::ThresholdViolation { .. })), "{err:?}");
    let sharp = SolverOptions {
        sharpness: true,
        ..SolverOptions::default()
    };
    assert!(solve_radial_convection(&p, &mesh, &field, &source, &sharp).is_ok());

    let p3 = ProblemParams::new(Kind::Convection, 4, 3.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.1, 2.0).unwrap();
    let p3 = p3.with_b(convection_threshold(&p3).unwrap()).unwrap();
    let field3 = FieldSpec::new(&p3, Orientation::Inward);
    let err = solve_radial_convection(&p3, &mesh, &field3, &source, &sharp);
    assert!(matches!(err, Err(SolverError::Unsupported(_))), "{err:?}");
}

#[test]
fn mismatched_inputs_are_rejected() {
    let p = params(Kind::Convection, 4, 1.0, 1.2, 0.5);
    let field = FieldSpec::new(&p, Orientation::Inward);
    let source = Source::from(Datum::marcinkiewicz(1.2, 1.0).unwrap());
    let options = SolverOptions::default();
    let wrong_measure = RadialMesh::for_domain(4, 2.0, 64, 1.0).unwrap();
    assert!(matches!(
        solve_radial_convection(&p, &wrong_measure, &field, &source, &options),
        Err(SolverError::Mismatch(_))
    ));
    let mesh = RadialMesh::for_domain(4, 1.0, 64, 1.0).unwrap();
    assert!(matches!(
        solve_radial_drift(&p, &mesh, &field, &source, &options),
        Err(SolverError::Mismatch(_))
    ));
    assert!(RadialMesh::new(4, 1.0, MIN_NODES - 1, 1.0).is_err());
    assert!(RadialMesh::new(4, 1.0, 64, 0.5).is_err());
}

#[test]
fn graded_mesh_invariants() {
    let mesh = RadialMesh::for_domain(4, 1.0, 1000, 50.0).unwrap();
    let nodes = mesh.nodes();
    assert!(nodes[0] > 0.0);
    assert!(nodes.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(*nodes.last().unwrap(), mesh.radius());
    // The first spacing is the gap from the origin to the first node.
    let first = nodes[0];
    let last = nodes[999] - nodes[998];
    assert!(close(last / first, 50.0, 1e-9));
    let total: f64 = mesh.cell_measures().iter().sum();
    assert!(close(total, 1.0, 1e-12));
}

fn solve(kind: Kind, params: &ProblemParams, mesh: &RadialMesh, field: &FieldSpec, source: &Source) -> SolveResult {
    let options = SolverOptions::default();
    match kind {
        Kind::Convection => solve_radial_convection(params, mesh, field, source, &options),
        Kind::Drift => solve_radial_drift(params, mesh, field, source, &options),
    }
    .unwrap()
}

#[test]
fn infinite_truncation_level_is_bit_identical() {
    for (kind, dim, m) in [(Kind::Convection, 4, 1.2), (Kind::Drift, 6, 2.0)] {
        let (p, mesh, field, source) = power_instance(kind, dim, m, 2000);
        let plain = solve(kind, &p, &mesh, &field, &source);
        let sentinel =
            solve_truncated(&p, &mesh, &field, &source, f64::INFINITY, &SolverOptions::default())
                .unwrap();
        assert_eq!(plain, sentinel);
        assert!(sentinel.truncation.is_infinite());
    }
}

// The damping factor multiplies the field, so the level-1 problem only
// coincides with the untruncated one when the field vanishes.
#[test]
fn level_one_truncation_is_inactive_on_small_data_without_field() {
    for kind in [Kind::Convection, Kind::Drift] {
        let m = if kind == Kind::Drift { 2.0 } else { 1.2 };
        let p = params(kind, 3, ball(3), m, 0.0);
        let mesh = RadialMesh::new(3, 1.0, 300, 1.0).unwrap();
        let field = FieldSpec::zero(kind, 3);
        let source = Source::from(Datum::constant(0.5, ball(3)).unwrap());
        let plain = solve(kind, &p, &mesh, &field, &source);
        let truncated =
            solve_truncated(&p, &mesh, &field, &source, 1.0, &SolverOptions::default()).unwrap();
        assert!(plain.max_abs() < 1.0);
        assert_eq!(plain.u, truncated.u);
        assert_eq!(truncated.truncation, 1.0);
    }
}

#[test]
fn truncation_gaps_shrink_with_the_level() {
    for (kind, dim, m) in [(Kind::Convection, 4, 1.2), (Kind::Drift, 6, 2.0)] {
        let (p, mesh, field, source) = power_instance(kind, dim, m, 2000);
        let plain = solve(kind, &p, &mesh, &field, &source);
        let gaps: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&level| {
                let t = solve_truncated(&p, &mesh, &field, &source, level, &SolverOptions::default())
                    .unwrap();
                t.u.iter().zip(&plain.u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] > 0.0, "{kind:?}: {gaps:?}");
    }
}

#[test]
fn truncation_level_below_one_is_rejected() {
    let (p, mesh, field, source) = power_instance(Kind::Convection, 4, 1.2, 64);
    let err = solve_truncated(&p, &mesh, &field, &source, 0.5, &SolverOptions::default());
    assert!(matches!(err, Err(SolverError::InvalidArgument { .. })));
}

#[test]
fn weak_residual_of_exact_poisson_is_at_rounding_level() {
    let (result, mesh) = poisson(Kind::Convection, 400);
    let p = params(Kind::Convection, 3, ball(3), 1.2, 0.0);
    let field = FieldSpec::new(&p, Orientation::Inward);
    let source = Source::from(Datum::constant(1.0, ball(3)).unwrap());
    let res = weak_residual(&result, &p, &mesh, &field, &source, 50).unwrap();
    assert!(res <= 1e-10, "{res:e}");
}

#[test]
fn weak_residual_of_converged_solves_and_its_sensitivity() {
    for (kind, dim, m) in [(Kind::Convection, 4, 1.2), (Kind::Drift, 6, 2.0)] {
        let (p, mesh, field, source) = power_instance(kind, dim, m, 2000);
        let result = solve(kind, &p, &mesh, &field, &source);
        let base = weak_residual(&result, &p, &mesh, &field, &source, mesh.len()).unwrap();
        assert!(base <= 1e-8, "{kind:?}: {base:e}");
        assert!(result.weak_residual <= 1e-8);
        let mut perturbed = result.clone();
        perturbed.u[1000] += 1e-3;
        let raised = weak_residual(&perturbed, &p, &mesh, &field, &source, mesh.len()).unwrap();
        assert!(raised - base >= 1e-4, "{kind:?}: {base:e} -> {raised:e}");
    }
}

#[test]
fn energy_check_on_an_empty_band_is_zero() {
    let (result, mesh) = poisson(Kind::Convection, 200);
    let p = params(Kind::Convection, 3, ball(3), 1.2, 0.0);
    let field = FieldSpec::new(&p, Orientation::Inward);
    let source = Source::from(Datum::constant(1.0, ball(3)).unwrap());
    let check =
        energy_inequality_check(&result, &p, &mesh, &field, &source, 2.0 * result.max_abs(), 0.1)
            .unwrap();
    assert!(check.empty_band);
    assert_eq!((check.energy, check.source, check.field, check.slack), (0.0, 0.0, 0.0, 0.0));
}

#[test]
fn energy_check_is_strict_on_poisson() {
    let (result, mesh) = poisson(Kind::Convection, 200);
    let p = params(Kind::Convection, 3, ball(3), 1.2, 0.0);
    let field = FieldSpec::new(&p, Orientation::Inward);
    let source = Source::from(Datum::constant(1.0, ball(3)).unwrap());
    let check =
        energy_inequality_check(&result, &p, &mesh, &field, &source, 0.0, result.max_abs()).unwrap();
    assert!(!check.empty_band);
    // ∫|∇u|² = ∫u = 4π/45 for u = (1 − r²)/6, against h∫|f| = |Ω|/6.
    assert!(check.slack < 0.0);
    assert!(close(check.energy, 4.0 * std::f64::consts::PI / 45.0, 1e-3), "{check:?}");
    assert!(close(check.source, ball(3) / 6.0, 1e-3), "{check:?}");
}

#[test]
fn energy_check_sweep_on_power_datum() {
    let (p, mesh, field, source) = power_instance(Kind::Convection, 4, 1.2, 4000);
    let result = solve(Kind::Convection, &p, &mesh, &field, &source);
    let top = result.max_abs();
    for i in 0..10 {
        let k = top * 1e-3 * 4f64.powi(i);
        let h = 0.5 * k;
        let check = energy_inequality_check(&result, &p, &mesh, &field, &source, k, h).unwrap();
        let scale = check.source + check.field;
        assert!(check.slack <= 1e-3 * scale, "k = {k:e}: {check:?}");
    }
}

#[test]
fn energy_check_rejects_bad_bands() {
    let (result, mesh) = poisson(Kind::Convection, 200);
    let p = params(Kind::Convection, 3, ball(3), 1.2, 0.0);
    let field = FieldSpec::new(&p, Orientation::Inward);
    let source = Source::from(Datum::constant(1.0, ball(3)).unwrap());
    assert!(energy_inequality_check(&result, &p, &mesh, &field, &source, -1.0, 0.1).is_err());
    assert!(energy_inequality_check(&result, &p, &mesh, &field, &source, 0.0, 0.0).is_err());
}

/// `ū_h ≤ v` at every breakpoint of `ū_h` in the window.
fn dominated(profile: &rearrange::DecreasingProfile, bound: &BoundProfile, window: (f64, f64)) -> bool {
    profile
        .breakpoints()
        .iter()
        .zip(profile.values())
        .filter(|(&t, _)| t > window.0 && t < window.1)
        .all(|(&t, &u)| u <= bound.eval(t))
}

const COMPARISON_WINDOW: (f64, f64) = (1e-4, 1e-1);

#[test]
fn convection_solution_and_gradient_are_dominated() {
    for nodes in [20_000, 40_000] {
        let (p, mesh, field, source) = power_instance(Kind::Convection, 4, 1.2, nodes);
        let datum = source.datum().unwrap().clone();
        let result = solve(Kind::Convection, &p, &mesh, &field, &source);
        let v = convection_profile(&p, &datum).unwrap();
        assert!(dominated(&result.rearranged(&mesh).unwrap(), &v, COMPARISON_WINDOW));
        let grad_bound = convection_gradient_bound(&p, &v, &datum).unwrap();
        let grad_avg = maximal_function(&result.rearranged_gradient(&mesh).unwrap());
        assert!(dominated(&grad_avg, &grad_bound, COMPARISON_WINDOW));
    }
}

#[test]
fn drift_solution_and_gradient_are_dominated() {
    for nodes in [20_000, 40_000] {
        let (p, mesh, field, source) = power_instance(Kind::Drift, 6, 2.0, nodes);
        let datum = source.datum().unwrap().clone();
        let result = solve(Kind::Drift, &p, &mesh, &field, &source);
        let z = drift_profile(&p, &datum).unwrap();
        assert!(dominated(&result.rearranged(&mesh).unwrap(), &z, COMPARISON_WINDOW));
        let grad_bound = drift_gradient_bound(&p, &datum).unwrap();
        let grad_avg = maximal_function(&result.rearranged_gradient(&mesh).unwrap());
        assert!(dominated(&grad_avg, &grad_bound, COMPARISON_WINDOW));
    }
}

#[test]
fn truncation_operator_examples() {
    let v = WeightedSample::new(&[3.0, -1.0, 0.5, 2.0], &[0.25; 4]).unwrap();
    let (t, g) = truncation_operators(&v, 0.0).unwrap();
    assert!(t.values().iter().all(|&x| x == 0.0));
    assert_eq!(g.values(), v.values());
    let (t, g) = truncation_operators(&v, 3.0).unwrap();
    assert_eq!(t.values(), v.values());
    assert!(g.values().iter().all(|&x| x == 0.0));
    let (t, g) = truncation_operators(&v, 1.5).unwrap();
    assert_eq!(t.values(), &[1.5, 1.0, 0.5, 1.5]);
    for ((a, b), c) in t.values().iter().zip(g.values()).zip(v.values()) {
        assert_eq!(a + b, *c);
    }
    assert!(truncation_operators(&v, -1.0).is_err());
}

#[test]
fn solve_result_csv_has_provenance_and_rows() {
    let (result, mesh) = poisson(Kind::Convection, 20);
    let csv = result.csv(&mesh, &[("N", "3".to_string())]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# N = 3"));
    let header = lines.find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "r,u,grad");
    assert_eq!(lines.count(), 20);
}
