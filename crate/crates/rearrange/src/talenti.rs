use statrs::function::gamma::gamma;

use crate::{RearrangeError, WeightedSample};

/// Volume of the unit ball in `ℝ^n`, `π^{n/2} / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: u32) -> f64 {
    let half = f64::from(n) / 2.0;
    std::f64::consts::PI.powf(half) / gamma(half + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TalentiLevel {
    pub level: f64,
    /// `A(level)`, measure of the super-level set.
    pub measure: f64,
    /// Right side of the isoperimetric inequality minus `σ_N`.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TalentiReport {
    pub levels: Vec<TalentiLevel>,
    /// Levels where a difference quotient vanished.
    pub skipped: Vec<f64>,
}

impl TalentiReport {
    pub fn min_slack(&self) -> Option<f64> {
        self.levels.iter().map(|l| l.slack).reduce(f64::min)
    }
}

/// Evaluates `A(k)^{1/N−1} (−A'(k))^{1/p'} (−d/dk ∫_{|v|>k} |∇v|^p)^{1/p} − σ_N` at
/// the midpoints between consecutive distinct values of `|v|`, using centered
/// differences over the neighbouring midpoints.
///
/// `v` and `gradient` must share a partition. A constant `v` has no interior
/// levels and yields an empty report.
pub fn talenti_check(
    v: &WeightedSample,
    gradient: &WeightedSample,
    p: f64,
    n: u32,
) -> Result<TalentiReport, RearrangeError> {
    v.same_partition(gradient)?;
    let sigma = f64::from(n) * unit_ball_volume(n).powf(1.0 / f64::from(n));
    let p_conj = p / (p - 1.0);

    let vals = v.values();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));

    // Group cells by distinct value; prefix sums give A and Φ just below each
    // distinct value, i.e. at every midpoint level.
    let mut distinct = Vec::new();
    let mut measure_above = Vec::new();
    let mut energy_above = Vec::new();
    let (mut a_acc, mut e_acc) = (0.0, 0.0);
    let mut i = 0;
    while i < order.len() {
        let value = vals[order[i]];
        while i < order.len() && vals[order[i]] == value {
            let c = order[i];
            a_acc += v.measures()[c];
            e_acc += gradient.values()[c].powf(p) * v.measures()[c];
            i += 1;
        }
        distinct.push(value);
        measure_above.push(a_acc);
        energy_above.push(e_acc);
    }

    let mut report = TalentiReport::default();
    if distinct.len() < 4 {
        return Ok(report);
    }
    // Level j sits between distinct[j] and distinct[j+1].
    let level = |j: usize| 0.5 * (distinct[j] + distinct[j + 1]);
    for j in 1..distinct.len() - 2 {
        let k = level(j);
        let dk = level(j - 1) - level(j + 1);
        let da = measure_above[j + 1] - measure_above[j - 1];
        let de = energy_above[j + 1] - energy_above[j - 1];
        if !(dk > 0.0 && da > 0.0 && de > 0.0) {
            report.skipped.push(k);
            continue;
        }
        let a = measure_above[j];
        let rhs = a.powf(1.0 / f64::from(n) - 1.0) * (da / dk).powf(1.0 / p_conj) * (de / dk).powf(1.0 / p);
        report.levels.push(TalentiLevel {
            level: k,
            measure: a,
            slack: rhs - sigma,
        });
    }
    Ok(report)
}
