use proptest::prelude::*;
use radial::{threshold, Datum, Kind, ProblemParams};
use rearrange::WeightedSample;
use solver::*;

/// Dense Gaussian elimination with full row pivoting, as a reference.
fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let m = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= m * a[k][j];
            }
            b[i] -= m * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    x
}

fn instance(kind: Kind, p: f64, b_fraction: f64, nodes: usize) -> (ProblemParams, RadialMesh, FieldSpec, Source) {
    let (dim, m) = match kind {
        Kind::Convection => (4, 1.2),
        Kind::Drift => (6, 2.0),
    };
    let m = if p == 2.0 { m } else { 1.05 };
    let base = ProblemParams::new(kind, dim, p, 1.0, 1.0, 1.0, 0.0, 0.0, m, f64::INFINITY).unwrap();
    let params = base.with_b(b_fraction * threshold(&base).unwrap()).unwrap();
    let mesh = RadialMesh::for_domain(dim, 1.0, nodes, 4.0).unwrap();
    let field = FieldSpec::new(&params, Orientation::Inward);
    let source = Source::from(Datum::marcinkiewicz(m, 1.0).unwrap());
    (params, mesh, field, source)
}

fn solve(params: &ProblemParams, mesh: &RadialMesh, field: &FieldSpec, source: &Source) -> SolveResult {
    let options = SolverOptions::default();
    match params.kind() {
        Kind::Convection => solve_radial_convection(params, mesh, field, source, &options),
        Kind::Drift => solve_radial_drift(params, mesh, field, source, &options),
    }
    .unwrap()
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Convection), Just(Kind::Drift)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn banded_lu_agrees_with_dense_elimination(
        n in 2usize..40,
        kl in 0usize..3,
        ku in 0usize..3,
        entries in prop::collection::vec(-1.0f64..1.0, 40 * 7),
        rhs in prop::collection::vec(-1.0f64..1.0, 40),
    ) {
        let mut banded = BandedMatrix::zeros(n, kl, ku);
        let mut dense = vec![vec![0.0; n]; n];
        let mut next = entries.iter();
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let mut v = *next.next().unwrap_or(&0.5);
                if i == j {
                    v += 3.0 * v.signum();
                }
                banded.add(i, j, v);
                dense[i][j] = v;
            }
        }
        let b = &rhs[..n];
        let product = banded.mul(b);
        for i in 0..n {
            let expected: f64 = (0..n).map(|j| dense[i][j] * b[j]).sum();
            prop_assert!((product[i] - expected).abs() <= 1e-12);
        }
        let x = banded.factor().unwrap().solve(b);
        let reference = dense_solve(dense, b.to_vec());
        for (a, r) in x.iter().zip(&reference) {
            prop_assert!((a - r).abs() <= 1e-9 * (1.0 + r.abs()), "{a} vs {r}");
        }
    }

    #[test]
    fn truncation_parts_add_back_exactly(
        values in prop::collection::vec(-1e3f64..1e3, 1..200),
        level_fraction in 0.0f64..1.2,
    ) {
        let v = WeightedSample::new(&values, &vec![1.0; values.len()]).unwrap();
        let k = level_fraction * v.max_value();
        let (t, g) = truncation_operators(&v, k).unwrap();
        for ((a, b), c) in t.values().iter().zip(g.values()).zip(v.values()) {
            prop_assert_eq!(a + b, *c);
            prop_assert!(*a <= k && *a >= 0.0 && *b >= 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn linear_solves_scale_with_the_datum(
        kind in kind(),
        b_fraction in 0.0f64..0.9,
        scale in 0.01f64..100.0,
    ) {
        let (params, mesh, field, source) = instance(kind, 2.0, b_fraction, 400);
        let scaled = Source::from(source.datum().unwrap().scaled(scale));
        let base = solve(&params, &mesh, &field, &source);
        let big = solve(&params, &mesh, &field, &scaled);
        for (a, b) in base.u.iter().zip(&big.u) {
            prop_assert!((scale * a - b).abs() <= 1e-10 * b.abs().max(1e-300));
        }
    }

    #[test]
    fn converged_solves_have_small_weak_residuals(
        kind in kind(),
        p in prop_oneof![Just(2.0), 1.6f64..1.9, 2.2f64..2.8],
        b_fraction in 0.0f64..0.9,
    ) {
        let (params, mesh, field, source) = instance(kind, p, b_fraction, 300);
        let result = solve(&params, &mesh, &field, &source);
        prop_assert!(result.final_update <= 1e-10);
        prop_assert!(result.weak_residual <= 1e-8, "{}", result.weak_residual);
        prop_assert_eq!(*result.u.last().unwrap(), 0.0);
        prop_assert!(result.u.iter().all(|&u| u >= 0.0));
    }

    #[test]
    fn doubling_the_truncation_level_never_widens_the_gap(
        kind in kind(),
        b_fraction in 0.1f64..0.8,
        start in 2.0f64..20.0,
    ) {
        let (params, mesh, field, source) = instance(kind, 2.0, b_fraction, 400);
        let plain = solve(&params, &mesh, &field, &source);
        let mut previous = f64::INFINITY;
        for step in 0..4 {
            let level = start * 2f64.powi(step);
            let t = solve_truncated(&params, &mesh, &field, &source, level, &SolverOptions::default())
                .unwrap();
            let gap = t.u.iter().zip(&plain.u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(gap <= previous, "level {level}: {gap:e} > {previous:e}");
            previous = gap;
        }
    }

    #[test]
    fn stronger_inward_fields_raise_the_solution(
        kind in kind(),
        low in 0.0f64..0.4,
        extra in 0.05f64..0.4,
    ) {
        let (params, mesh, _, source) = instance(kind, 2.0, low, 400);
        let stronger = params.with_b(params.b() + extra * threshold(&params).unwrap()).unwrap();
        let weak = solve(&params, &mesh, &FieldSpec::new(&params, Orientation::Inward), &source);
        let strong = solve(&stronger, &mesh, &FieldSpec::new(&stronger, Orientation::Inward), &source);
        for (a, b) in weak.u.iter().zip(&strong.u) {
            prop_assert!(*a <= *b * (1.0 + 1e-12));
        }
    }
}
