//! Gauss–Legendre quadrature and logarithmic panelling for integrands that
//! vary over many decades.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the Chebyshev-like initial
    /// guess; exact for polynomials of degree `2n − 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 16-point rule.
pub fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// `∫_a^b f(t) dt` for `0 < a < b`, integrated in `u = ln t` over panels
/// whose endpoint ratio is at most 2.
pub fn integrate_log<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    debug_assert!(a > 0.0 && b >= a);
    if b <= a {
        return 0.0;
    }
    let (la, lb) = (a.ln(), b.ln());
    let panels = ((lb - la) / LN_2).ceil().max(1.0) as usize;
    let width = (lb - la) / panels as f64;
    let rule = default_rule();
    (0..panels)
        .map(|k| {
            let u0 = la + width * k as f64;
            rule.integrate(u0, u0 + width, |u| {
                let t = u.exp();
                f(t) * t
            })
        })
        .sum()
}

/// `∫_a^b t^{k-1} dt = (b^k − a^k)/k`, with the `k → 0` limit `ln(b/a)`;
/// written with `expm1` so that close endpoints keep full precision.
pub fn power_integral(a: f64, b: f64, k: f64) -> f64 {
    let log_ratio = (b / a).ln();
    if a == 0.0 {
        return if k > 0.0 { b.powf(k) / k } else { f64::INFINITY };
    }
    if k.abs() * log_ratio.abs() < 1e-300 || k == 0.0 {
        return log_ratio;
    }
    a.powf(k) * (k * log_ratio).exp_m1() / k
}
