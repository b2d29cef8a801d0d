//! Compare and sweep runs: solve, rearrange, fit, and compare with the
//! closed-form bounds.

use std::path::Path;

use lorentz::fit_exponent;
use radial::{
    convection_gradient_bound, convection_profile, drift_gradient_bound, drift_profile,
    predicted_regularity, sharpness_exponents, threshold, BoundProfile, Datum, GradientPrediction,
    Kind, ProblemParams, RegularityCase,
};
use rearrange::{decreasing_rearrangement, maximal_function, DecreasingProfile};
use solver::{
    solve_radial_convection, solve_radial_drift, solve_truncated, FieldSpec, RadialMesh,
    SolveResult, SolverOptions, Source,
};

use crate::config::{DatumSpec, FieldStrength};
use crate::report::{Check, ProfileRow, ProfileSeries, Report};
use crate::{properties, BenchError, ConfigError, Execution, ExperimentConfig, Mode};

/// Relative weak residual every converged solve must reach.
pub const WEAK_RESIDUAL_LIMIT: f64 = 1e-8;

/// Points per emitted profile series.
const PROFILE_POINTS: usize = 200;

/// Number of fit standard errors a slope must move before the sweep counts
/// it as a departure from the standard exponent.
const TRANSITION_SIGMAS: f64 = 3.0;

/// Runs whatever `config.mode` selects.
pub fn run(config: &ExperimentConfig, exec: Execution) -> Result<Report, BenchError> {
    match config.mode {
        Mode::Compare => run_compare(config, exec),
        Mode::SweepB => run_sweep_b(config, exec),
        Mode::SweepM => run_sweep_m(config, exec),
        Mode::Properties => properties::run_properties(config.seed, &config.properties, exec),
    }
}

/// Instance for exponent `m`, with `B` resolved against that instance's
/// threshold when given as a fraction.
pub fn instance_params(config: &ExperimentConfig, m: f64) -> Result<ProblemParams, BenchError> {
    let p = &config.problem;
    let base = ProblemParams::new(
        p.kind, p.dim, p.p, p.alpha, p.beta, p.omega, 0.0, p.f_bound, m, p.q,
    )?;
    let b = match p.field {
        FieldStrength::Fraction(x) => x * threshold(&base)?,
        FieldStrength::Absolute(b) => b,
    };
    Ok(base.with_b(b)?)
}

/// The configured datum for an instance with exponent `params.m()`.
pub fn load_datum(config: &ExperimentConfig, params: &ProblemParams) -> Result<Datum, BenchError> {
    let omega = params.omega();
    let datum = match &config.datum {
        DatumSpec::Marcinkiewicz => Datum::marcinkiewicz(params.m(), omega)?,
        DatumSpec::Power { coef, exponent } => Datum::power(*coef, *exponent, omega)?,
        DatumSpec::Constant(v) => Datum::constant(*v, omega)?,
        DatumSpec::Concentrated(mass) => Datum::concentrated(*mass, omega)?,
        DatumSpec::Zero => Datum::constant(0.0, omega)?,
        DatumSpec::Table(path) => Datum::profile(read_table(&config.resolve(path), omega)?),
    };
    Ok(datum)
}

/// Reads a `s,value` table; a non-numeric first line is a header.
fn read_table(path: &Path, omega: f64) -> Result<DecreasingProfile, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut breakpoints = Vec::new();
    let mut values = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = line
            .split_once(',')
            .and_then(|(s, v)| Some((s.trim().parse::<f64>().ok()?, v.trim().parse::<f64>().ok()?)));
        match parsed {
            Some((s, v)) => {
                breakpoints.push(s);
                values.push(v);
            }
            None if index == 0 => {}
            None => {
                return Err(ConfigError::global(format!(
                    "{}: line {}: expected `s,value`",
                    path.display(),
                    index + 1
                ))
                .into())
            }
        }
    }
    DecreasingProfile::new(breakpoints, values, omega).map_err(|e| {
        ConfigError::global(format!("{}: not a decreasing profile: {e}", path.display())).into()
    })
}

fn solver_options(config: &ExperimentConfig, params: &ProblemParams) -> Result<SolverOptions, BenchError> {
    let s = &config.solver;
    Ok(SolverOptions {
        tol: s.tol,
        max_iter: s.max_iter,
        relaxation: s.relaxation,
        coefficient_floor: s.floor,
        sharpness: params.b() >= threshold(params)?,
    })
}

/// One solved instance with the profiles every analysis needs.
struct Solved {
    label: String,
    result: SolveResult,
    ubar: DecreasingProfile,
    /// `(1/s)∫₀^s |∇u|‾^{p−1}`.
    grad_avg: DecreasingProfile,
}

fn solve(
    config: &ExperimentConfig,
    label: String,
    params: &ProblemParams,
    datum: &Datum,
    nodes: usize,
) -> Result<Solved, BenchError> {
    let mesh = RadialMesh::for_domain(params.dim(), params.omega(), nodes, config.mesh.grading)?;
    let field = FieldSpec::new(params, config.problem.orientation);
    let source = Source::from(datum.clone());
    let options = solver_options(config, params)?;
    let level = config.solver.truncation;
    let result = if level.is_finite() {
        solve_truncated(params, &mesh, &field, &source, level, &options)?
    } else {
        match params.kind() {
            Kind::Convection => solve_radial_convection(params, &mesh, &field, &source, &options)?,
            Kind::Drift => solve_radial_drift(params, &mesh, &field, &source, &options)?,
        }
    };
    log::info!(
        "{label}: {} iterations, final update {:e}, weak residual {:e}",
        result.iterations,
        result.final_update,
        result.weak_residual
    );
    let ubar = result.rearranged(&mesh)?;
    let grad = result.grad_sample(&mesh)?;
    let p = params.p();
    let powered = if p == 2.0 {
        grad
    } else {
        let v: Vec<f64> = grad.values().iter().map(|g| g.powf(p - 1.0)).collect();
        grad.with_values(&v).map_err(solver::SolverError::from)?
    };
    let grad_avg = maximal_function(&decreasing_rearrangement(&powered));
    Ok(Solved {
        label,
        result,
        ubar,
        grad_avg,
    })
}

/// Predicted slopes of `ū` and of the gradient average, with the gradient
/// tolerance that applies.
struct Expectation {
    u_slope: f64,
    grad_slope: Option<f64>,
    grad_tol: f64,
    case: String,
}

fn expectation(config: &ExperimentConfig, params: &ProblemParams) -> Result<Expectation, String> {
    let a = &config.analysis;
    let above = threshold(params).map_err(|e| e.to_string())? <= params.b();
    if above {
        let sharp = sharpness_exponents(params).map_err(|e| e.to_string())?;
        if !sharp.in_window {
            return Err(format!("γ(B) = {} lies outside the degradation window", sharp.gamma_b));
        }
        let grad_slope = match sharp.gradient {
            GradientPrediction::Slope(s) => Some(s),
            _ => None,
        };
        return Ok(Expectation {
            u_slope: sharp.u_slope,
            grad_slope,
            grad_tol: a.grad_tol / 100.0,
            case: "above-threshold".into(),
        });
    }
    let reg = predicted_regularity(params).map_err(|e| e.to_string())?;
    let borderline = matches!(
        reg.case,
        RegularityCase::LowestSummable
            | RegularityCase::LowestLorentz
            | RegularityCase::LowestCritical
            | RegularityCase::LowestSubcritical
    );
    Ok(Expectation {
        u_slope: reg.u_slope(),
        grad_slope: Some(reg.gradient_average_slope),
        grad_tol: if borderline { a.borderline_tol } else { a.grad_tol } / 100.0,
        case: reg.case.label().into(),
    })
}

fn window(params: &ProblemParams, (lo, hi): (f64, f64)) -> (f64, f64) {
    (lo * params.omega(), hi * params.omega())
}

/// Slope row for one profile; a failed fit is a failed row.
fn slope_row(
    run: &str,
    name: &str,
    profile: &DecreasingProfile,
    fit_window: (f64, f64),
    expected: f64,
    tolerance: f64,
) -> (Check, Option<lorentz::ExponentFit>) {
    match fit_exponent(profile, fit_window) {
        Ok(fit) => (
            Check::slope(run, name, fit.slope, expected, tolerance).with_detail(format!(
                "r2={:.6} stderr={:.3e} points={}",
                fit.r_squared, fit.std_error, fit.points
            )),
            Some(fit),
        ),
        Err(e) => {
            let mut c = Check::slope(run, name, f64::NAN, expected, tolerance);
            c.passed = false;
            (c.with_detail(format!("fit failed: {e}")), None)
        }
    }
}

fn slope_checks(config: &ExperimentConfig, params: &ProblemParams, solved: &Solved) -> Vec<Check> {
    let run = solved.label.as_str();
    let fit_window = window(params, config.analysis.fit_window);
    let expect = match expectation(config, params) {
        Ok(e) => e,
        Err(reason) => {
            let fit = fit_exponent(&solved.ubar, fit_window).map(|f| f.slope).unwrap_or(f64::NAN);
            return vec![Check::info(run, "u_slope", fit, format!("no prediction: {reason}"))];
        }
    };
    let u_tol = config.analysis.u_tol / 100.0;
    let (mut u_row, _) = slope_row(run, "u_slope", &solved.ubar, fit_window, expect.u_slope, u_tol);
    u_row.detail = format!("{} [{}]", u_row.detail, expect.case);
    let mut checks = vec![u_row];
    match expect.grad_slope {
        Some(s) => checks.push(slope_row(run, "grad_slope", &solved.grad_avg, fit_window, s, expect.grad_tol).0),
        None => {
            let fit = fit_exponent(&solved.grad_avg, fit_window).map(|f| f.slope).unwrap_or(f64::NAN);
            checks.push(Check::info(run, "grad_slope", fit, "no gradient prediction"));
        }
    }
    checks
}

/// Closed-form bounds for `ū` and the gradient average.
fn bounds(params: &ProblemParams, datum: &Datum) -> Result<(BoundProfile, BoundProfile), String> {
    let err = |e: radial::RadialError| e.to_string();
    match params.kind() {
        Kind::Convection => {
            let v = convection_profile(params, datum).map_err(err)?;
            let g = convection_gradient_bound(params, &v, datum).map_err(err)?;
            Ok((v, g))
        }
        Kind::Drift => {
            let z = drift_profile(params, datum).map_err(err)?;
            let g = drift_gradient_bound(params, datum).map_err(err)?;
            Ok((z, g))
        }
    }
}

/// `discrete/bound`, zero where both vanish or the bound is infinite.
fn ratio(discrete: f64, bound: f64) -> f64 {
    if bound.is_infinite() || (discrete == 0.0 && bound == 0.0) {
        0.0
    } else {
        discrete / bound
    }
}

/// Largest `discrete/bound` over the breakpoints inside `window`.
fn worst_ratio(profile: &DecreasingProfile, bound: &BoundProfile, window: (f64, f64)) -> (f64, f64) {
    profile
        .breakpoints()
        .iter()
        .zip(profile.values())
        .filter(|(&t, _)| t > window.0 && t < window.1)
        .map(|(&t, &u)| (ratio(u, bound.eval(t)), t))
        .fold((0.0, f64::NAN), |best, cur| if cur.0 > best.0 { cur } else { best })
}

fn domination_checks(
    config: &ExperimentConfig,
    params: &ProblemParams,
    bounds: &Result<(BoundProfile, BoundProfile), String>,
    solved: &Solved,
) -> Vec<Check> {
    let run = solved.label.as_str();
    let (v, g) = match bounds {
        Ok(pair) => pair,
        Err(reason) => return vec![Check::info(run, "domination", f64::NAN, format!("no bound: {reason}"))],
    };
    let window = window(params, config.analysis.compare_window);
    [("u_domination", &solved.ubar, v), ("grad_domination", &solved.grad_avg, g)]
        .into_iter()
        .map(|(name, profile, bound)| {
            let (worst, at) = worst_ratio(profile, bound, window);
            let check = Check::at_most(run, name, worst, 1.0).with_detail(format!("worst at t={at:.6e}"));
            // Away from p = 2 the explicit profile and the field scaling
            // differ, so the comparison is only reported.
            if params.p() == 2.0 {
                check
            } else {
                check.unasserted().with_detail("reported only for p != 2")
            }
        })
        .collect()
}

fn residual_check(solved: &Solved) -> Check {
    Check::at_most(
        &solved.label,
        "weak_residual",
        solved.result.weak_residual,
        WEAK_RESIDUAL_LIMIT,
    )
    .with_detail(format!("iterations={}", solved.result.iterations))
}

/// Thinned `(t, discrete, bound, ratio)` rows on a log grid of targets.
fn series(run: &str, quantity: &str, profile: &DecreasingProfile, bound: Option<&BoundProfile>) -> ProfileSeries {
    let b = profile.breakpoints();
    let (first, last) = (b[0], *b.last().unwrap());
    let mut rows: Vec<ProfileRow> = Vec::new();
    let mut previous = usize::MAX;
    for k in 0..PROFILE_POINTS {
        let target = if first < last {
            first * (last / first).powf(k as f64 / (PROFILE_POINTS - 1) as f64)
        } else {
            first
        };
        let i = b.partition_point(|&s| s < target).min(b.len() - 1);
        if i == previous {
            continue;
        }
        previous = i;
        let (t, discrete) = (b[i], profile.values()[i]);
        let bound = bound.map_or(f64::NAN, |bp| bp.eval(t));
        let ratio = if bound.is_nan() { f64::NAN } else { ratio(discrete, bound) };
        rows.push(ProfileRow {
            t,
            discrete,
            bound,
            ratio,
        });
    }
    ProfileSeries {
        run: run.into(),
        quantity: quantity.into(),
        rows,
    }
}

fn label(config: &ExperimentConfig, tag: String) -> String {
    format!("{}/{}", config.problem.kind.as_str(), tag)
}

/// Solve on the configured mesh (and on `nodes/2` when two resolutions are
/// requested), then fit slopes and compare with the bounds.
pub fn run_compare(config: &ExperimentConfig, exec: Execution) -> Result<Report, BenchError> {
    let params = instance_params(config, config.problem.m)?;
    let datum = load_datum(config, &params)?;
    let mut resolutions = vec![config.mesh.nodes];
    if config.analysis.resolutions == 2 {
        resolutions.push(config.mesh.nodes / 2);
    }
    let solved: Vec<Solved> = exec
        .map(&resolutions, |&nodes| solve(config, label(config, format!("n{nodes}")), &params, &datum, nodes))?
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut report = Report::empty(Mode::Compare);
    if datum.is_zero() {
        for s in &solved {
            let peak = s.result.max_abs();
            report.checks.push(Check::at_most(&s.label, "zero_solution", peak, 0.0));
            report.profiles.push(series(&s.label, "u", &s.ubar, None));
        }
        return Ok(report);
    }
    let bounds = bounds(&params, &datum);
    let finest = &solved[0];
    report.checks.extend(slope_checks(config, &params, finest));
    for s in &solved {
        report.checks.push(residual_check(s));
        report.checks.extend(domination_checks(config, &params, &bounds, s));
    }
    let (v, g) = match &bounds {
        Ok((v, g)) => (Some(v), Some(g)),
        Err(_) => (None, None),
    };
    report.profiles.push(series(&finest.label, "u", &finest.ubar, v));
    report.profiles.push(series(&finest.label, "grad", &finest.grad_avg, g));
    Ok(report)
}

/// Solves across `sweep.b_fractions` and locates where the `ū` slope leaves
/// the standard exponent.
///
/// A point departs when its slope differs from the standard one by more
/// than both three standard errors of the fit and the `u` tolerance; the
/// regression error alone ignores discretization bias. The first departing
/// fraction, in increasing order, should be the first one at or above 1.
pub fn run_sweep_b(config: &ExperimentConfig, exec: Execution) -> Result<Report, BenchError> {
    let base = instance_params(config, config.problem.m)?;
    if base.p() != 2.0 || base.kind() != Kind::Convection {
        return Err(ConfigError::global("sweep_B needs a p = 2 convection instance").into());
    }
    let b_crit = threshold(&base)?;
    let standard = predicted_regularity(&base)?.u_slope();
    let mut fractions = config.sweep.b_fractions.clone();
    fractions.sort_by(f64::total_cmp);
    let runs = exec.map(&fractions, |&fraction| -> Result<(Solved, ProblemParams), BenchError> {
        let params = base.with_b(fraction * b_crit)?;
        let datum = load_datum(config, &params)?;
        let solved = solve(config, label(config, format!("b{fraction}")), &params, &datum, config.mesh.nodes)?;
        Ok((solved, params))
    })?;
    let mut report = Report::empty(Mode::SweepB);
    let u_tol = config.analysis.u_tol / 100.0;
    let fit_window = window(&base, config.analysis.fit_window);
    let mut transition = f64::NAN;
    for (fraction, run) in fractions.iter().zip(runs) {
        let (solved, params) = run?;
        let rows = slope_checks(config, &params, &solved);
        report.checks.extend(rows);
        report.checks.push(residual_check(&solved));
        if *fraction >= 1.0 {
            if let Ok(sharp) = sharpness_exponents(&params) {
                if sharp.in_window {
                    let measured = report.check(&solved.label, "u_slope").map_or(f64::NAN, |c| c.measured);
                    let edge = standard * (1.0 + u_tol);
                    report.checks.push(
                        Check::at_most(&solved.label, "steeper_than_standard", measured, edge)
                            .with_detail(format!("standard slope {standard}")),
                    );
                }
            }
        }
        if transition.is_nan() {
            if let Ok(fit) = fit_exponent(&solved.ubar, fit_window) {
                let gap = (fit.slope - standard).abs();
                if gap > (TRANSITION_SIGMAS * fit.std_error).max(u_tol * standard.abs()) {
                    transition = *fraction;
                }
            }
        }
        report.profiles.push(series(&solved.label, "u", &solved.ubar, None));
    }
    let expected = fractions.iter().copied().find(|&f| f >= 1.0).unwrap_or(f64::NAN);
    let same = transition == expected || (transition.is_nan() && expected.is_nan());
    report.checks.push(Check {
        run: label(config, "sweep".into()),
        name: "transition_fraction".into(),
        measured: transition,
        expected,
        tolerance: 0.0,
        asserted: true,
        passed: same,
        detail: format!("B_crit={b_crit}; NaN means no departure"),
    });
    Ok(report)
}

/// Solves across `sweep.m_values` and checks both slopes at each.
pub fn run_sweep_m(config: &ExperimentConfig, exec: Execution) -> Result<Report, BenchError> {
    let runs = exec.map(&config.sweep.m_values, |&m| -> Result<(Solved, ProblemParams), BenchError> {
        let params = instance_params(config, m)?;
        let datum = load_datum(config, &params)?;
        let solved = solve(config, label(config, format!("m{m}")), &params, &datum, config.mesh.nodes)?;
        Ok((solved, params))
    })?;
    let mut report = Report::empty(Mode::SweepM);
    for run in runs {
        let (solved, params) = run?;
        report.checks.extend(slope_checks(config, &params, &solved));
        report.checks.push(residual_check(&solved));
        report.profiles.push(series(&solved.label, "u", &solved.ubar, None));
    }
    Ok(report)
}
