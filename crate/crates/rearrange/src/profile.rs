use crate::RearrangeError;

const END_RTOL: f64 = 1e-12;

/// Shape of a profile on its first interval `(0, s₀]`.
///
/// `Step` keeps the stored value constant there. `Power` replaces it by
/// `v₀ (s/s₀)^exponent`, which lets a sampled power law with an integrable
/// singularity at the origin be integrated exactly instead of being cut off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Head {
    Step,
    Power { exponent: f64 },
}

impl Head {
    fn exponent(self) -> f64 {
        match self {
            Head::Step => 0.0,
            Head::Power { exponent } => exponent,
        }
    }
}

/// Left-continuous nonincreasing step profile on `(0, |Ω|]`: the value on
/// `(s_{i-1}, s_i]` is `values[i]`, with `s_{-1} = 0`.
///
/// The last breakpoint always equals the total measure; a shorter input is
/// padded with a zero-valued interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DecreasingProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    cumulative: Vec<f64>,
    total_measure: f64,
    head: Head,
}

impl DecreasingProfile {
    pub fn new(
        mut breakpoints: Vec<f64>,
        mut values: Vec<f64>,
        total_measure: f64,
    ) -> Result<Self, RearrangeError> {
        if breakpoints.is_empty() {
            return Err(RearrangeError::Empty);
        }
        if values.len() != breakpoints.len() {
            return Err(RearrangeError::Length {
                what: "values",
                got: values.len(),
                expected: breakpoints.len(),
            });
        }
        let mut prev = 0.0;
        for (index, &b) in breakpoints.iter().enumerate() {
            if !(b > prev) || !b.is_finite() {
                return Err(RearrangeError::Breakpoints {
                    index,
                    total: total_measure,
                });
            }
            prev = b;
        }
        let mut prev = f64::INFINITY;
        for (index, &v) in values.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() || v > prev {
                return Err(RearrangeError::NotDecreasing { index });
            }
            prev = v;
        }
        let last = *breakpoints.last().unwrap();
        if (last - total_measure).abs() <= END_RTOL * total_measure {
            *breakpoints.last_mut().unwrap() = total_measure;
        } else if last < total_measure {
            breakpoints.push(total_measure);
            values.push(0.0);
        } else {
            return Err(RearrangeError::Breakpoints {
                index: breakpoints.len() - 1,
                total: total_measure,
            });
        }
        let mut profile = Self {
            breakpoints,
            values,
            cumulative: Vec::new(),
            total_measure,
            head: Head::Step,
        };
        profile.rebuild_cumulative();
        Ok(profile)
    }

    /// Constant `c` on `(0, total]`.
    pub fn constant(c: f64, total: f64) -> Result<Self, RearrangeError> {
        Self::new(vec![total], vec![c], total)
    }

    /// `coef · s^{-exponent}` on the given grid (last point = total measure).
    ///
    /// Each interval after the first carries the exact interval average, the
    /// first interval is an exact power head, so `∫₀^{s_i}` is exact at every
    /// breakpoint.
    pub fn power_law(coef: f64, exponent: f64, grid: &[f64]) -> Result<Self, RearrangeError> {
        if grid.is_empty() {
            return Err(RearrangeError::Empty);
        }
        let total = *grid.last().unwrap();
        let mut values = Vec::with_capacity(grid.len());
        values.push(coef * grid[0].powf(-exponent));
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let log_ratio = (b / a).ln();
            let avg = if (exponent - 1.0).abs() < 1e-14 {
                coef * log_ratio / (b - a)
            } else {
                let k = 1.0 - exponent;
                coef * a.powf(k) * (k * log_ratio).exp_m1() / (k * (b - a))
            };
            values.push(avg);
        }
        clip_monotone(&mut values);
        Self::new(grid.to_vec(), values, total)?.with_head(Head::Power {
            exponent: -exponent,
        })
    }

    /// Samples a nonincreasing function at the right endpoint of each grid
    /// interval; the head exponent is fitted from the first two samples.
    pub fn from_samples<F: Fn(f64) -> f64>(f: F, grid: &[f64]) -> Result<Self, RearrangeError> {
        if grid.is_empty() {
            return Err(RearrangeError::Empty);
        }
        let total = *grid.last().unwrap();
        let values: Vec<f64> = grid.iter().map(|&s| f(s)).collect();
        let profile = Self::new(grid.to_vec(), values, total)?;
        if grid.len() >= 2 && profile.values[0] > 0.0 && profile.values[1] > 0.0 {
            let a = (profile.values[1] / profile.values[0]).ln() / (grid[1] / grid[0]).ln();
            profile.with_head(Head::Power { exponent: a.min(0.0) })
        } else {
            Ok(profile)
        }
    }

    pub fn with_head(mut self, head: Head) -> Result<Self, RearrangeError> {
        let e = head.exponent();
        if !(e <= 0.0) || !e.is_finite() {
            return Err(RearrangeError::HeadExponent(e));
        }
        self.head = head;
        self.rebuild_cumulative();
        Ok(self)
    }

    fn rebuild_cumulative(&mut self) {
        let mut cum = Vec::with_capacity(self.values.len());
        let mut acc = self.head_power_integral(0.0, 1.0);
        cum.push(acc);
        for i in 1..self.values.len() {
            acc += self.values[i] * (self.breakpoints[i] - self.breakpoints[i - 1]);
            cum.push(acc);
        }
        self.cumulative = cum;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    pub fn head(&self) -> Head {
        self.head
    }

    /// `∫₀^{s_i}` at every breakpoint.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Left end of interval `i`.
    pub fn left(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.breakpoints[i - 1]
        }
    }

    /// Index of the interval containing `s`, or `len()` beyond the total
    /// measure.
    pub fn interval_of(&self, s: f64) -> usize {
        self.breakpoints.partition_point(|&b| b < s)
    }

    /// `v̄(s)`; zero beyond the total measure.
    pub fn value_at(&self, s: f64) -> f64 {
        let i = self.interval_of(s);
        if i >= self.len() {
            return 0.0;
        }
        if i == 0 {
            return self.head_value(s);
        }
        self.values[i]
    }

    fn head_value(&self, s: f64) -> f64 {
        match self.head {
            Head::Step => self.values[0],
            Head::Power { exponent } => self.values[0] * (s / self.breakpoints[0]).powf(exponent),
        }
    }

    /// `∫₀^{s₀} t^w g(t)^q dt` over the head interval, `+∞` when divergent.
    pub fn head_power_integral(&self, w: f64, q: f64) -> f64 {
        let v0 = self.values[0];
        if v0 == 0.0 {
            return 0.0;
        }
        let s0 = self.breakpoints[0];
        let k = w + self.head.exponent() * q + 1.0;
        if k <= 0.0 {
            return f64::INFINITY;
        }
        v0.powf(q) * s0.powf(w + 1.0) / k
    }

    /// `∫₀^s v̄`; constant beyond the total measure.
    pub fn integral_to(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let i = self.interval_of(s);
        if i >= self.len() {
            return *self.cumulative.last().unwrap();
        }
        if i == 0 {
            let s0 = self.breakpoints[0];
            return match self.head {
                Head::Step => self.values[0] * s,
                Head::Power { .. } => self.cumulative[0] * (s / s0).powf(1.0 + self.head.exponent()),
            };
        }
        self.cumulative[i - 1] + self.values[i] * (s - self.breakpoints[i - 1])
    }

    pub fn total_integral(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Running average `(1/s)∫₀^s v̄`, continued by `(∫₀^{|Ω|} v̄)/s` beyond the
    /// total measure.
    pub fn average_at(&self, s: f64) -> f64 {
        let i = self.interval_of(s);
        if i == 0 {
            return match self.head {
                Head::Step => self.values[0],
                Head::Power { exponent } => {
                    if exponent <= -1.0 {
                        f64::INFINITY
                    } else {
                        self.head_value(s) / (1.0 + exponent)
                    }
                }
            };
        }
        self.integral_to(s) / s
    }

    /// Measure of `{v̄ > t}`.
    pub fn distribution(&self, t: f64) -> f64 {
        let k = self.values.partition_point(|&v| v > t);
        if k > 0 {
            return self.breakpoints[k - 1];
        }
        match self.head {
            Head::Power { exponent } if exponent < 0.0 && t > 0.0 && self.values[0] > 0.0 => {
                self.breakpoints[0] * (t / self.values[0]).powf(1.0 / exponent)
            }
            _ => 0.0,
        }
    }

    /// `c·v̄` for `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= c;
        }
        out.rebuild_cumulative();
        out
    }
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    let mut grid: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect();
    grid[0] = lo;
    grid[n - 1] = hi;
    grid
}

/// Replaces each value by the running minimum, removing rounding-level
/// increases from a sequence that is nonincreasing in exact arithmetic.
pub(crate) fn clip_monotone(values: &mut [f64]) {
    for i in 1..values.len() {
        if values[i] > values[i - 1] {
            values[i] = values[i - 1];
        }
    }
}
