//! Radially decreasing data `f̄` and the integrals of `f̄` and `f̃` that the
//! comparison profiles need.

use lorentz::quadrature::{integrate_log, power_integral};
use rearrange::{DecreasingProfile, Head};

use crate::RadialError;

/// Shape of the datum's decreasing rearrangement.
#[derive(Debug, Clone, PartialEq)]
pub enum DatumShape {
    /// `f̄(s) = coef · s^{−exponent}` with `0 ≤ exponent < 1`.
    Power { coef: f64, exponent: f64 },
    /// `f̄ ≡ value`.
    Constant(f64),
    /// A unit of mass concentrated at the origin: `∫₀^s f̄ = mass` for every
    /// `s > 0`, so `f̃(s) = mass/s`. The extreme element of `L¹` with a given
    /// norm.
    Concentrated { mass: f64 },
    /// Tabulated profile.
    Profile(DecreasingProfile),
}

/// A datum on `(0, |Ω|]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Datum {
    shape: DatumShape,
    omega: f64,
}

impl Datum {
    pub fn power(coef: f64, exponent: f64, omega: f64) -> Result<Self, RadialError> {
        if !(coef >= 0.0) || !(0.0..1.0).contains(&exponent) {
            return Err(RadialError::InvalidParams {
                what: "datum exponent",
                value: exponent,
                reason: "a power datum needs coef ≥ 0 and exponent in [0, 1)",
            });
        }
        Ok(Self {
            shape: DatumShape::Power { coef, exponent },
            omega,
        })
    }

    /// `f̄(s) = s^{−1/m}`, the extreme element of `L^{m,∞}`.
    pub fn marcinkiewicz(m: f64, omega: f64) -> Result<Self, RadialError> {
        Self::power(1.0, 1.0 / m, omega)
    }

    pub fn constant(value: f64, omega: f64) -> Result<Self, RadialError> {
        if !(value >= 0.0) {
            return Err(RadialError::InvalidParams {
                what: "datum value",
                value,
                reason: "must be nonnegative",
            });
        }
        Ok(Self {
            shape: DatumShape::Constant(value),
            omega,
        })
    }

    pub fn concentrated(mass: f64, omega: f64) -> Result<Self, RadialError> {
        if !(mass >= 0.0) {
            return Err(RadialError::InvalidParams {
                what: "datum mass",
                value: mass,
                reason: "must be nonnegative",
            });
        }
        Ok(Self {
            shape: DatumShape::Concentrated { mass },
            omega,
        })
    }

    pub fn profile(profile: DecreasingProfile) -> Self {
        let omega = profile.total_measure();
        Self {
            shape: DatumShape::Profile(profile),
            omega,
        }
    }

    pub fn shape(&self) -> &DatumShape {
        &self.shape
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Self {
        let shape = match &self.shape {
            DatumShape::Power { coef, exponent } => DatumShape::Power {
                coef: coef * c,
                exponent: *exponent,
            },
            DatumShape::Constant(v) => DatumShape::Constant(v * c),
            DatumShape::Concentrated { mass } => DatumShape::Concentrated { mass: mass * c },
            DatumShape::Profile(p) => DatumShape::Profile(p.scaled(c)),
        };
        Self {
            shape,
            omega: self.omega,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.shape {
            DatumShape::Power { coef, .. } => *coef == 0.0,
            DatumShape::Constant(v) => *v == 0.0,
            DatumShape::Concentrated { mass } => *mass == 0.0,
            DatumShape::Profile(p) => p.total_integral() == 0.0,
        }
    }

    /// `f̄(s)`; the concentrated datum is zero away from the origin.
    pub fn fbar(&self, s: f64) -> f64 {
        if s > self.omega {
            return 0.0;
        }
        match &self.shape {
            DatumShape::Power { coef, exponent } => coef * s.powf(-exponent),
            DatumShape::Constant(v) => *v,
            DatumShape::Concentrated { .. } => 0.0,
            DatumShape::Profile(p) => p.value_at(s),
        }
    }

    /// `∫₀^s f̄`, constant beyond `|Ω|`.
    pub fn cumulative(&self, s: f64) -> f64 {
        let s = s.min(self.omega);
        if s <= 0.0 {
            return 0.0;
        }
        match &self.shape {
            DatumShape::Power { coef, exponent } => coef * s.powf(1.0 - exponent) / (1.0 - exponent),
            DatumShape::Constant(v) => v * s,
            DatumShape::Concentrated { mass } => *mass,
            DatumShape::Profile(p) => p.integral_to(s),
        }
    }

    /// `f̃(s) = (1/s)∫₀^s f̄`.
    pub fn ftilde(&self, s: f64) -> f64 {
        if s > self.omega {
            return self.cumulative(self.omega) / s;
        }
        match &self.shape {
            DatumShape::Power { coef, exponent } => coef * s.powf(-exponent) / (1.0 - exponent),
            DatumShape::Constant(v) => *v,
            DatumShape::Concentrated { mass } => mass / s,
            DatumShape::Profile(p) => p.average_at(s),
        }
    }

    /// Moments of `f̃` with weight `s^{w−1}` and power `r`.
    pub fn ftilde_moment(&self, w: f64, r: f64) -> Moment {
        Moment::new(self, Integrand::Ftilde, w, r)
    }

    /// Moments of `f̄` with weight `s^{w−1}`.
    pub fn fbar_moment(&self, w: f64) -> Moment {
        Moment::new(self, Integrand::Fbar, w, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Integrand {
    Fbar,
    Ftilde,
}

/// `s ↦ ∫ s^{w−1} g(s)^r ds` for `g = f̄` or `f̃`, over `(0, s)` or `(s, |Ω|)`.
///
/// Closed forms for the power, constant and concentrated data; a tabulated
/// profile carries prefix and suffix sums over its breakpoints so that each
/// evaluation touches a single interval.
#[derive(Debug, Clone)]
pub struct Moment {
    datum: Datum,
    integrand: Integrand,
    w: f64,
    r: f64,
    prefix: Vec<f64>,
    suffix: Vec<f64>,
}

impl Moment {
    fn new(datum: &Datum, integrand: Integrand, w: f64, r: f64) -> Self {
        let mut moment = Self {
            datum: datum.clone(),
            integrand,
            w,
            r,
            prefix: Vec::new(),
            suffix: Vec::new(),
        };
        if let DatumShape::Profile(p) = &datum.shape {
            let pieces: Vec<f64> = (0..p.len())
                .map(|i| {
                    if i == 0 {
                        moment.profile_head(p, p.breakpoints()[0])
                    } else {
                        moment.profile_piece(p, i, p.left(i), p.breakpoints()[i])
                    }
                })
                .collect();
            let mut acc = 0.0;
            moment.prefix = pieces
                .iter()
                .map(|x| {
                    acc += x;
                    acc
                })
                .collect();
            let mut acc = 0.0;
            let mut suffix: Vec<f64> = pieces
                .iter()
                .rev()
                .map(|x| {
                    let before = acc;
                    acc += x;
                    before
                })
                .collect();
            suffix.reverse();
            // suffix[i] = ∫_{s_i}^{|Ω|}.
            moment.suffix = suffix;
        }
        moment
    }

    /// `∫_a^b`, for `0 ≤ a ≤ b ≤ |Ω|`; `+∞` when divergent at the origin.
    pub fn between(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        if let DatumShape::Profile(_) = self.datum.shape {
            return self.to(b) - self.to(a);
        }
        self.closed_form(a, b)
    }

    /// `∫₀^s`.
    pub fn to(&self, s: f64) -> f64 {
        let s = s.min(self.datum.omega);
        if s <= 0.0 {
            return 0.0;
        }
        match &self.datum.shape {
            DatumShape::Profile(p) => {
                let i = p.interval_of(s);
                if i == 0 {
                    self.profile_head(p, s)
                } else {
                    self.prefix[i - 1] + self.profile_piece(p, i, p.left(i), s)
                }
            }
            _ => self.closed_form(0.0, s),
        }
    }

    /// `∫_s^{|Ω|}`.
    pub fn from(&self, s: f64) -> f64 {
        let omega = self.datum.omega;
        if s >= omega {
            return 0.0;
        }
        match &self.datum.shape {
            DatumShape::Profile(p) => {
                let i = p.interval_of(s.max(0.0));
                if s <= 0.0 {
                    return self.prefix.last().copied().unwrap_or(0.0);
                }
                let right = p.breakpoints()[i];
                let inside = if i == 0 {
                    self.profile_head(p, right) - self.profile_head(p, s)
                } else {
                    self.profile_piece(p, i, s, right)
                };
                self.suffix[i] + inside
            }
            _ => self.closed_form(s.max(0.0), omega),
        }
    }

    fn closed_form(&self, a: f64, b: f64) -> f64 {
        let (w, r) = (self.w, self.r);
        match (&self.datum.shape, self.integrand) {
            (DatumShape::Power { coef, exponent }, Integrand::Fbar) => {
                scaled(*coef, power_integral(a, b, w - exponent))
            }
            (DatumShape::Power { coef, exponent }, Integrand::Ftilde) => scaled(
                (coef / (1.0 - exponent)).powf(r),
                power_integral(a, b, w - exponent * r),
            ),
            (DatumShape::Constant(v), Integrand::Fbar) => scaled(*v, power_integral(a, b, w)),
            (DatumShape::Constant(v), Integrand::Ftilde) => {
                scaled(v.powf(r), power_integral(a, b, w))
            }
            (DatumShape::Concentrated { mass }, Integrand::Fbar) => {
                // A point mass at the origin seen through the weight s^{w−1}.
                if a > 0.0 || *mass == 0.0 {
                    0.0
                } else if w == 1.0 {
                    *mass
                } else if w > 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            (DatumShape::Concentrated { mass }, Integrand::Ftilde) => {
                scaled(mass.powf(r), power_integral(a, b, w - r))
            }
            (DatumShape::Profile(_), _) => unreachable!("profiles use their tables"),
        }
    }

    /// `∫₀^s` on the head interval, `s ≤ s₀`.
    fn profile_head(&self, p: &DecreasingProfile, s: f64) -> f64 {
        let v0 = p.values()[0];
        if v0 == 0.0 {
            return 0.0;
        }
        let s0 = p.breakpoints()[0];
        let e = match p.head() {
            Head::Step => 0.0,
            Head::Power { exponent } => exponent,
        };
        // On the head g = c (t/s0)^e with c = v0 for f̄ and v0/(1+e) for f̃.
        let (c, r) = match self.integrand {
            Integrand::Fbar => (v0, 1.0),
            Integrand::Ftilde => (v0 / (1.0 + e), self.r),
        };
        let k = self.w + e * r;
        if e <= -1.0 || k <= 0.0 {
            return f64::INFINITY;
        }
        c.powf(r) * s0.powf(self.w) * (s / s0).powf(k) / k
    }

    /// `∫_a^b` inside interval `i ≥ 1`.
    fn profile_piece(&self, p: &DecreasingProfile, i: usize, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let v = p.values()[i];
        match self.integrand {
            Integrand::Fbar => scaled(v, power_integral(a, b, self.w)),
            Integrand::Ftilde => {
                // f̃ = v + slack/t on this interval.
                let slack = (p.cumulative()[i - 1] - v * p.left(i)).max(0.0);
                if slack == 0.0 {
                    return scaled(v.powf(self.r), power_integral(a, b, self.w));
                }
                let (w, r) = (self.w, self.r);
                integrate_log(a, b, |t| t.powf(w - 1.0) * (v + slack / t).powf(r))
            }
        }
    }
}

/// `c · x` with `0 · ∞ = 0`.
fn scaled(c: f64, x: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * x
    }
}
