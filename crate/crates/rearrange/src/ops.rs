use crate::profile::clip_monotone;
use crate::{DecreasingProfile, RearrangeError, WeightedSample};

/// Cell indices ordered by `|value|` descending, ties by index ascending.
fn level_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    // Stable sort keeps equal values in index order.
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order
}

/// Cumulative measures along `order`, with the last entry pinned to the total.
fn nested_breakpoints(sample: &WeightedSample, order: &[usize]) -> Vec<f64> {
    let measures = sample.measures();
    let mut acc = 0.0;
    let mut out: Vec<f64> = order
        .iter()
        .map(|&i| {
            acc += measures[i];
            acc
        })
        .collect();
    *out.last_mut().unwrap() = sample.total_measure();
    out
}

/// Measure of `{|v| > t}`.
///
/// Evaluated on the rearrangement so that the sample and its rearrangement
/// report bit-identical measures.
pub fn distribution_function(v: &WeightedSample, t: f64) -> f64 {
    decreasing_rearrangement(v).distribution(t)
}

/// Decreasing rearrangement: cells sorted by value, laid end to end from 0.
///
/// Cells sharing a value are merged into one interval whose length is summed
/// in ascending order, so the result depends only on the multiset of
/// `(value, measure)` pairs and not on the cell order.
pub fn decreasing_rearrangement(v: &WeightedSample) -> DecreasingProfile {
    let order = level_order(v.values());
    let mut values: Vec<f64> = Vec::new();
    let mut lengths: Vec<f64> = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        group.push(v.measures()[i]);
        let value = v.values()[i];
        let closes = order.get(k + 1).map_or(true, |&j| v.values()[j] != value);
        if closes {
            group.sort_by(f64::total_cmp);
            lengths.push(group.iter().sum());
            values.push(value);
            group.clear();
        }
    }
    let mut acc = 0.0;
    let mut breakpoints: Vec<f64> = lengths
        .iter()
        .map(|l| {
            acc += l;
            acc
        })
        .collect();
    *breakpoints.last_mut().unwrap() = v.total_measure();
    DecreasingProfile::new(breakpoints, values, v.total_measure())
        .expect("sorted cells always form a valid profile")
}

/// Running average `ṽ(s) = (1/s)∫₀^s v̄`, sampled at the breakpoints of the
/// input (the same head shape is kept on the first interval).
///
/// The output dominates the input and is nonincreasing; both properties are
/// enforced against rounding.
pub fn maximal_function(profile: &DecreasingProfile) -> DecreasingProfile {
    let b = profile.breakpoints();
    let mut values: Vec<f64> = profile
        .cumulative()
        .iter()
        .zip(b)
        .zip(profile.values())
        .map(|((c, s), v)| (c / s).max(*v))
        .collect();
    clip_monotone(&mut values);
    DecreasingProfile::new(b.to_vec(), values, profile.total_measure())
        .and_then(|p| p.with_head(profile.head()))
        .expect("running average of a valid profile is a valid profile")
}

/// Per-cell derivative of `s ↦ ∫_{Ω(s)} g`, where `Ω(s)` grows through the
/// level sets of `v`.
///
/// `values[k]` is the value of `g` on the `k`-th cell in level order; the
/// result is nonnegative but not monotone in general.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoRearrangement {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub total_measure: f64,
}

impl PseudoRearrangement {
    /// `∫₀^{t_k} D` at each breakpoint.
    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut prev = 0.0;
        self.breakpoints
            .iter()
            .zip(&self.values)
            .map(|(&b, &d)| {
                acc += d * (b - prev);
                prev = b;
                acc
            })
            .collect()
    }

    /// `‖D‖_{L^r(0,|Ω|)}`.
    pub fn lr_norm(&self, r: f64) -> f64 {
        let mut prev = 0.0;
        let sum: f64 = self
            .breakpoints
            .iter()
            .zip(&self.values)
            .map(|(&b, &d)| {
                let term = d.powf(r) * (b - prev);
                prev = b;
                term
            })
            .sum();
        sum.powf(1.0 / r)
    }

    /// `min_k (∫₀^{t_k} ḡ − ∫₀^{t_k} D)` over all breakpoints; nonnegative when
    /// the Hardy–Littlewood domination holds.
    pub fn domination_slack(&self, gbar: &DecreasingProfile) -> f64 {
        self.cumulative()
            .iter()
            .zip(&self.breakpoints)
            .map(|(d, &t)| gbar.integral_to(t) - d)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Pseudo-rearrangement of `g` with respect to `v`; both samples must share a
/// partition. Ties in `|v|` are nested by cell index.
pub fn pseudo_rearrangement(
    g: &WeightedSample,
    v: &WeightedSample,
) -> Result<PseudoRearrangement, RearrangeError> {
    v.same_partition(g)?;
    let order = level_order(v.values());
    Ok(PseudoRearrangement {
        breakpoints: nested_breakpoints(v, &order),
        values: order.iter().map(|&i| g.values()[i]).collect(),
        total_measure: v.total_measure(),
    })
}

/// Checks `v̄(s) ≤ liminf v̄ₙ(s)` at every breakpoint of `v̄`, up to `tol`.
///
/// The liminf of a finite sequence is taken as the minimum over its second
/// half. The precondition `|v| ≤ liminf |vₙ| + tol` is verified cell-wise
/// first and reported with the offending cell.
pub fn check_liminf_property(
    v: &WeightedSample,
    sequence: &[WeightedSample],
    tol: f64,
) -> Result<bool, RearrangeError> {
    if sequence.is_empty() {
        return Err(RearrangeError::Empty);
    }
    for s in sequence {
        v.same_partition(s)?;
    }
    let tail = &sequence[sequence.len() / 2..];
    for (index, &value) in v.values().iter().enumerate() {
        let liminf = tail
            .iter()
            .map(|s| s.values()[index])
            .fold(f64::INFINITY, f64::min);
        if value > liminf + tol {
            return Err(RearrangeError::LiminfPrecondition {
                index,
                value,
                liminf,
            });
        }
    }
    let vbar = decreasing_rearrangement(v);
    let tail_bars: Vec<DecreasingProfile> = tail.iter().map(decreasing_rearrangement).collect();
    let holds = vbar.breakpoints().iter().zip(vbar.values()).all(|(&s, &value)| {
        let liminf = tail_bars
            .iter()
            .map(|p| p.value_at(s))
            .fold(f64::INFINITY, f64::min);
        value <= liminf + tol
    });
    Ok(holds)
}
