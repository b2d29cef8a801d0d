use rearrange::{DecreasingProfile, Head};

use crate::quadrature::{integrate_log, power_integral};
use crate::{LorentzError, LorentzIndex, Scale};

/// A fitted head exponent within this of the critical one counts as critical.
const EXPONENT_TOL: f64 = 1e-12;

/// Exponent of the power head on `(0, s₀]`; zero for a step head.
pub(crate) fn head_exponent(f: &DecreasingProfile) -> f64 {
    match f.head() {
        Head::Step => 0.0,
        Head::Power { exponent } => exponent,
    }
}

/// `f̃` on interval `i ≥ 1` is `v + slack/t` with `slack = F(s_{i-1}) − v s_{i-1} ≥ 0`.
fn average_slack(f: &DecreasingProfile, i: usize) -> f64 {
    (f.cumulative()[i - 1] - f.values()[i] * f.left(i)).max(0.0)
}

/// Quasi-norm of `f` on the given scale; `+∞` when the defining integral
/// diverges.
pub fn lorentz_norm(f: &DecreasingProfile, idx: LorentzIndex) -> f64 {
    let (m, q) = (idx.m(), idx.q());
    match (idx.scale(), q.is_finite()) {
        (Scale::Standard, true) => standard_integral(f, m, q).powf(1.0 / q),
        (Scale::Standard, false) => standard_sup(f, m),
        (Scale::Maximal, true) => {
            (maximal_integral(f, m, q) + maximal_tail(f, m, q)).powf(1.0 / q)
        }
        (Scale::Maximal, false) => maximal_sup(f, m),
        (Scale::L1q, true) => maximal_integral(f, 1.0, q).powf(1.0 / q),
        // sup of t f̃(t) = ∫₀^t f̄ is reached at |Ω|.
        (Scale::L1q, false) => f.total_integral(),
    }
}

/// `‖f‖_{𝕃^{1,q}}`.
pub fn l1q_norm(f: &DecreasingProfile, q: f64) -> Result<f64, LorentzError> {
    Ok(lorentz_norm(f, LorentzIndex::l1q(q)?))
}

/// `∫₀^{|Ω|} t^{q/m − 1} f̄^q dt`.
fn standard_integral(f: &DecreasingProfile, m: f64, q: f64) -> f64 {
    let k = q / m;
    let mut sum = f.head_power_integral(k - 1.0, q);
    for i in 1..f.len() {
        let v = f.values()[i];
        if v > 0.0 {
            sum += v.powf(q) * power_integral(f.left(i), f.breakpoints()[i], k);
        }
    }
    sum
}

/// `sup t^{1/m} f̄(t)`: on each step the sup sits at the right endpoint.
fn standard_sup(f: &DecreasingProfile, m: f64) -> f64 {
    let b = f.breakpoints();
    let v = f.values();
    if v[0] > 0.0 && 1.0 / m + head_exponent(f) < -EXPONENT_TOL {
        return f64::INFINITY;
    }
    b.iter()
        .zip(v)
        .map(|(s, x)| s.powf(1.0 / m) * x)
        .fold(0.0, f64::max)
}

/// `∫₀^{|Ω|} t^{q/m − 1} f̃^q dt`.
fn maximal_integral(f: &DecreasingProfile, m: f64, q: f64) -> f64 {
    let k = q / m;
    let e = head_exponent(f);
    if f.values()[0] > 0.0 && e <= -1.0 {
        return f64::INFINITY;
    }
    // On the head f̃ = f̄/(1 + e).
    let mut sum = f.head_power_integral(k - 1.0, q) / (1.0 + e).powf(q);
    for i in 1..f.len() {
        let (a, b) = (f.left(i), f.breakpoints()[i]);
        let v = f.values()[i];
        let slack = average_slack(f, i);
        sum += if slack == 0.0 {
            v.powf(q) * power_integral(a, b, k)
        } else {
            integrate_log(a, b, |t| t.powf(k - 1.0) * (v + slack / t).powf(q))
        };
    }
    sum
}

/// `∫_{|Ω|}^∞ t^{q/m − 1} (F(|Ω|)/t)^q dt`, finite for `m > 1`.
fn maximal_tail(f: &DecreasingProfile, m: f64, q: f64) -> f64 {
    let mass = f.total_integral();
    if mass == 0.0 {
        return 0.0;
    }
    let omega = f.total_measure();
    mass.powf(q) * omega.powf(q / m - q) / (q - q / m)
}

/// `sup_{t>0} t^{1/m} f̃(t)`. On interval `i` the function
/// `t^{1/m}(v + slack/t)` has at most one interior critical point.
fn maximal_sup(f: &DecreasingProfile, m: f64) -> f64 {
    let b = 1.0 / m;
    let e = head_exponent(f);
    let v0 = f.values()[0];
    if v0 > 0.0 && (e <= -1.0 || b + e < -EXPONENT_TOL) {
        return f64::INFINITY;
    }
    let s0 = f.breakpoints()[0];
    let mut best = s0.powf(b) * f.cumulative()[0] / s0;
    for i in 1..f.len() {
        let (lo, hi) = (f.left(i), f.breakpoints()[i]);
        let v = f.values()[i];
        let slack = average_slack(f, i);
        let at = |t: f64| t.powf(b) * (v + slack / t);
        best = best.max(at(lo)).max(at(hi));
        if v > 0.0 && b < 1.0 {
            let critical = (1.0 - b) * slack / (b * v);
            if critical > lo && critical < hi {
                best = best.max(at(critical));
            }
        }
    }
    // Beyond |Ω| the function is F(|Ω|) t^{1/m − 1}, nonincreasing for m ≥ 1.
    best
}

/// The chain `‖f‖_{m,q} ≤ ⌈f⌉_{(m,q)} ≤ m'‖f‖_{m,q}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceChain {
    pub standard: f64,
    pub maximal: f64,
    pub bound: f64,
}

impl EquivalenceChain {
    /// Both inequalities hold up to `rel_tol` relative to the larger side.
    pub fn holds(&self, rel_tol: f64) -> bool {
        let le = |a: f64, b: f64| a <= b || a - b <= rel_tol * a.abs().max(b.abs());
        le(self.standard, self.maximal) && le(self.maximal, self.bound)
    }
}

/// Evaluates both sides of the equivalence between the standard and maximal
/// scales.
pub fn norm_equivalence_check(
    f: &DecreasingProfile,
    m: f64,
    q: f64,
) -> Result<EquivalenceChain, LorentzError> {
    if !(m > 1.0) {
        return Err(LorentzError::EquivalenceExponent(m));
    }
    let standard_idx = LorentzIndex::standard(m, q)?;
    let standard = lorentz_norm(f, standard_idx);
    let maximal = lorentz_norm(f, LorentzIndex::maximal(m, q)?);
    Ok(EquivalenceChain {
        standard,
        maximal,
        bound: standard_idx.conjugate() * standard,
    })
}
