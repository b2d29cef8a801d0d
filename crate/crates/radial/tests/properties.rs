use lorentz::fit_exponent;
use proptest::prelude::*;
use radial::*;
use rearrange::log_grid;

const DEEP: (f64, f64) = (1e-20, 1e-16);

fn slope(bound: &BoundProfile) -> f64 {
    let grid = log_grid(DEEP.0, DEEP.1, 41);
    fit_exponent(&bound.profile(&grid).unwrap(), DEEP).unwrap().slope
}

fn convection(dim: u32, p: f64, m: f64, b_fraction: f64, f_bound: f64) -> ProblemParams {
    let base =
        ProblemParams::new(Kind::Convection, dim, p, 1.0, 1.0, 1.0, 0.0, f_bound, m, 2.0).unwrap();
    let b_crit = convection_threshold(&base).unwrap();
    base.with_b(b_fraction * b_crit).unwrap()
}

fn drift(dim: u32, m: f64, b_fraction: f64) -> ProblemParams {
    let base = ProblemParams::new(Kind::Drift, dim, 2.0, 1.0, 1.0, 1.0, 0.0, 0.0, m, 2.0).unwrap();
    let b_crit = drift_threshold(&base).unwrap();
    base.with_b(b_fraction * b_crit).unwrap()
}

fn nonincreasing(bound: &BoundProfile) -> bool {
    let values = bound.samples(&log_grid(1e-12, 1.0, 60));
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn delta_succeeds_exactly_below_threshold(
        dim in 3u32..7,
        p in 1.2f64..2.8,
        m_fraction in 0.1f64..0.9,
        b_fraction in 0.0f64..2.0,
    ) {
        let n = dim as f64;
        prop_assume!(p < n);
        let m = 1.0 + m_fraction * (n / p - 1.0).max(0.0);
        prop_assume!(m < n / p);
        let params = convection(dim, p, m, 0.0, 0.0);
        let b_crit = convection_threshold(&params).unwrap();
        let params = params.with_b(b_fraction * b_crit).unwrap();
        match choose_delta(&params) {
            Ok(choice) => {
                prop_assert!(params.b() < b_crit);
                prop_assert!(choice.gamma < params.critical_exponent());
                prop_assert!(choice.delta > 1.0);
            }
            Err(RadialError::ThresholdViolation { .. }) => prop_assert!(params.b() >= b_crit),
            Err(other) => prop_assert!(false, "unexpected {other:?}"),
        }
    }

    #[test]
    fn profiles_are_nonincreasing(
        m in 1.05f64..1.9,
        b_fraction in 0.0f64..0.95,
        f_bound in prop_oneof![Just(0.0), 0.1f64..2.0],
    ) {
        let params = convection(4, 2.0, m, b_fraction, f_bound);
        let datum = Datum::marcinkiewicz(m, 1.0).unwrap();
        let v = convection_profile(&params, &datum).unwrap();
        prop_assert!(nonincreasing(&v));

        let dparams = drift(6, m, b_fraction);
        let z = drift_profile(&dparams, &datum).unwrap();
        prop_assert!(nonincreasing(&z));
    }

    #[test]
    fn halving_the_field_never_raises_the_profile(
        m in 1.05f64..1.9,
        b_fraction in 0.01f64..0.95,
    ) {
        let datum = Datum::marcinkiewicz(m, 1.0).unwrap();
        let strong = convection_profile(&convection(4, 2.0, m, b_fraction, 0.0), &datum).unwrap();
        let weak = convection_profile(&convection(4, 2.0, m, 0.5 * b_fraction, 0.0), &datum).unwrap();
        for t in log_grid(1e-10, 1.0, 30) {
            prop_assert!(weak.eval(t) <= strong.eval(t), "t = {}", t);
        }
    }

    #[test]
    fn power_data_reproduce_predicted_exponents(
        m in 1.05f64..1.3,
        // The correction to the leading power decays like t^{γ_crit − γ},
        // which stalls as B approaches the threshold.
        b_fraction in 0.0f64..0.6,
    ) {
        // N = 4, p = 2: (p*)' = 4/3, so both exponents apply on this range.
        let n = 4.0;
        let params = convection(4, 2.0, m, b_fraction, 0.0);
        let datum = Datum::marcinkiewicz(m, 1.0).unwrap();
        let v = convection_profile(&params, &datum).unwrap();
        let g = convection_gradient_bound(&params, &v, &datum).unwrap();
        let u_exp = -(n - 2.0 * m) / (n * m);
        let g_exp = -(n - m) / (n * m);
        prop_assert!((slope(&v) - u_exp).abs() <= 0.03 * u_exp.abs(), "v slope {}", slope(&v));
        prop_assert!((slope(&g) - g_exp).abs() <= 0.03 * g_exp.abs(), "grad slope {}", slope(&g));

        // N = 6: (p*)' = 3/2.
        let dm = 1.0 + (m - 1.0) * 1.5;
        let n = 6.0;
        let dparams = drift(6, dm, b_fraction);
        let ddatum = Datum::marcinkiewicz(dm, 1.0).unwrap();
        let z = drift_profile(&dparams, &ddatum).unwrap();
        let dg = drift_gradient_bound(&dparams, &ddatum).unwrap();
        let z_exp = -(n - 2.0 * dm) / (n * dm);
        let dg_exp = -(n - dm) / (n * dm);
        prop_assert!((slope(&z) - z_exp).abs() <= 0.03 * z_exp.abs(), "z slope {}", slope(&z));
        prop_assert!((slope(&dg) - dg_exp).abs() <= 0.03 * dg_exp.abs(), "drift grad slope {}", slope(&dg));
    }

    #[test]
    fn sharpness_is_continuous_at_the_threshold(m in 1.05f64..1.95) {
        let params = convection(4, 2.0, m, 1.0, 0.0);
        let sharp = sharpness_exponents(&params).unwrap();
        let predicted = predicted_regularity(&params.with_b(0.0).unwrap()).unwrap();
        prop_assert!((sharp.gamma_b - params.critical_exponent()).abs() <= 1e-12);
        prop_assert!((sharp.u_slope - predicted.u_slope()).abs() <= 1e-12);
    }
}
