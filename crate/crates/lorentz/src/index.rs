use crate::LorentzError;

/// Which rearrangement enters the quasi-norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    /// `‖f‖_{m,q}`, built on `f̄` and integrated over `(0, |Ω|)`.
    Standard,
    /// `⌈f⌉_{(m,q)}`, built on `f̃` and integrated over `(0, ∞)`.
    Maximal,
    /// `‖f‖_{𝕃^{1,q}}`, built on `f̃` and integrated over `(0, |Ω|)` only.
    L1q,
}

/// Lorentz exponents `(m, q)` together with the scale they are read on.
/// `q` may be `f64::INFINITY`; `q < 1` gives a quasi-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzIndex {
    m: f64,
    q: f64,
    scale: Scale,
}

impl LorentzIndex {
    pub fn new(m: f64, q: f64, scale: Scale) -> Result<Self, LorentzError> {
        if !(m >= 1.0) || !m.is_finite() {
            return Err(LorentzError::InvalidIndex { m, q, reason: "m must be finite and at least 1" });
        }
        if !(q > 0.0) {
            return Err(LorentzError::InvalidIndex { m, q, reason: "q must be positive" });
        }
        match scale {
            Scale::L1q if m != 1.0 => Err(LorentzError::InvalidIndex {
                m,
                q,
                reason: "the L1q scale is defined for m = 1 only",
            }),
            Scale::Maximal if m == 1.0 && q.is_finite() => Err(LorentzError::MaximalUnitExponent),
            _ => Ok(Self { m, q, scale }),
        }
    }

    pub fn standard(m: f64, q: f64) -> Result<Self, LorentzError> {
        Self::new(m, q, Scale::Standard)
    }

    pub fn maximal(m: f64, q: f64) -> Result<Self, LorentzError> {
        Self::new(m, q, Scale::Maximal)
    }

    pub fn l1q(q: f64) -> Result<Self, LorentzError> {
        Self::new(1.0, q, Scale::L1q)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    /// `m' = m/(m − 1)`; infinite for `m = 1`.
    pub fn conjugate(&self) -> f64 {
        if self.m == 1.0 {
            f64::INFINITY
        } else {
            self.m / (self.m - 1.0)
        }
    }
}
