//! Structural properties of the rearrangement operations on random samples.

use proptest::prelude::*;
use rearrange::*;

fn sample_strategy(max_len: usize) -> impl Strategy<Value = WeightedSample> {
    prop::collection::vec((-10.0f64..10.0, 0.001f64..1.0), 1..max_len)
        .prop_map(|cells| WeightedSample::from_cells(&cells).unwrap())
}

/// A sample with values drawn from a small set so that ties are common.
fn tied_sample_strategy(max_len: usize) -> impl Strategy<Value = WeightedSample> {
    prop::collection::vec((0u8..4, 0.01f64..1.0), 1..max_len)
        .prop_map(|cells| {
            let cells: Vec<(f64, f64)> = cells.iter().map(|&(v, m)| (v as f64, m)).collect();
            WeightedSample::from_cells(&cells).unwrap()
        })
}

fn paired_strategy(max_len: usize) -> impl Strategy<Value = (WeightedSample, WeightedSample)> {
    prop::collection::vec((0.0f64..10.0, 0.0f64..10.0, 0.001f64..1.0), 1..max_len).prop_map(|cells| {
        let v: Vec<f64> = cells.iter().map(|c| c.0).collect();
        let g: Vec<f64> = cells.iter().map(|c| c.1).collect();
        let m: Vec<f64> = cells.iter().map(|c| c.2).collect();
        (
            WeightedSample::new(&v, &m).unwrap(),
            WeightedSample::new(&g, &m).unwrap(),
        )
    })
}

proptest! {
    #[test]
    fn equimeasurable_at_every_value(v in sample_strategy(60), extra in 0.0f64..12.0) {
        let r = decreasing_rearrangement(&v);
        for &t in v.values().iter().chain(std::iter::once(&extra)) {
            prop_assert_eq!(distribution_function(&v, t), r.distribution(t));
        }
    }

    #[test]
    fn equimeasurable_with_ties(v in tied_sample_strategy(60)) {
        let r = decreasing_rearrangement(&v);
        for t in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
            prop_assert_eq!(distribution_function(&v, t), r.distribution(t));
        }
    }

    #[test]
    fn rearrangement_and_average_are_monotone(v in sample_strategy(80)) {
        let r = decreasing_rearrangement(&v);
        prop_assert!(r.values().windows(2).all(|w| w[1] <= w[0]));
        let m = maximal_function(&r);
        prop_assert!(m.values().windows(2).all(|w| w[1] <= w[0]));
        for (a, b) in m.values().iter().zip(r.values()) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn hardy_littlewood_domination((v, g) in paired_strategy(60)) {
        let d = pseudo_rearrangement(&g, &v).unwrap();
        let gbar = decreasing_rearrangement(&g);
        let scale = gbar.total_integral().max(1.0);
        prop_assert!(d.domination_slack(&gbar) >= -1e-12 * scale);
    }

    #[test]
    fn hardy_littlewood_domination_with_ties(v in tied_sample_strategy(40), seed in 0u64..1000) {
        let g_values: Vec<f64> = (0..v.len()).map(|i| ((i as u64 * 7919 + seed) % 13) as f64).collect();
        let g = v.with_values(&g_values).unwrap();
        let d = pseudo_rearrangement(&g, &v).unwrap();
        let gbar = decreasing_rearrangement(&g);
        prop_assert!(d.domination_slack(&gbar) >= -1e-12 * gbar.total_integral().max(1.0));
    }

    #[test]
    fn lr_stability((v, g) in paired_strategy(60)) {
        let d = pseudo_rearrangement(&g, &v).unwrap();
        for r in [1.0, 2.0, 4.0] {
            prop_assert!(g.lr_norm(r) - d.lr_norm(r) >= -1e-10);
        }
    }

    #[test]
    fn order_preservation(v in sample_strategy(60), bumps in prop::collection::vec(0.0f64..3.0, 60)) {
        let wv: Vec<f64> = v.values().iter().zip(&bumps).map(|(x, b)| x.abs() + b).collect();
        let w = v.with_values(&wv).unwrap();
        let vbar = decreasing_rearrangement(&v);
        let wbar = decreasing_rearrangement(&w);
        // Breakpoints are cumulative sums taken in different orders, so they
        // agree only to rounding; evaluate just inside each left-closed step.
        for &s in vbar.breakpoints().iter().chain(wbar.breakpoints()) {
            let inside = s * (1.0 - 1e-12);
            prop_assert!(vbar.value_at(inside) <= wbar.value_at(inside));
        }
    }

    #[test]
    fn gronwall_soundness(
        rho in 0.1f64..2.0,
        gamma in 0.0f64..2.0,
        lambda in 0.0f64..2.0,
        shortfall in prop::collection::vec(0.0f64..1.0, 201),
    ) {
        // Build φ satisfying φ ≤ ρ + γ∫_t^1 λφ by subtracting a nonnegative
        // shortfall from the right-hand side, marching from the right.
        let n = 201;
        let t: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let h = 1.0 / (n - 1) as f64;
        let mut phi = vec![0.0; n];
        phi[n - 1] = rho - shortfall[n - 1] * rho;
        let mut tail = 0.0;
        for i in (0..n - 1).rev() {
            // Left-endpoint term is moved to the left side so the step stays
            // explicit: φ_i (1 − γλh/2) ≤ ρ + γ(tail + λh φ_{i+1}/2).
            let rhs = rho + gamma * (tail + 0.5 * h * lambda * phi[i + 1]);
            let denom = 1.0 - 0.5 * gamma * lambda * h;
            phi[i] = (1.0 - shortfall[i]) * rhs / denom;
            tail += 0.5 * h * lambda * (phi[i] + phi[i + 1]);
        }
        let c = |x: f64| SampledFunction::tabulate(&t, |_| x, Interpolation::PiecewiseLinear).unwrap();
        let bound = gronwall_bound(&c(rho), &c(gamma), &c(lambda)).unwrap();
        for (b, f) in bound.ordinates().iter().zip(&phi) {
            prop_assert!(*b >= f - 1e-6 * b.max(1.0), "bound {} phi {}", b, f);
        }
    }
}
