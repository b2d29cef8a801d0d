use radial::{Kind, ProblemParams};
use rearrange::unit_ball_volume;

/// Direction of the radial field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Toward the origin; the extremal case for both problem kinds.
    Inward,
    Outward,
}

impl Orientation {
    fn sign(self) -> f64 {
        match self {
            Orientation::Inward => -1.0,
            Orientation::Outward => 1.0,
        }
    }
}

/// Radial field `E_r(r) = ±(b(r) + ‖ℱ‖_∞)` with the singular part
/// `b(r) = B ω_N^{−e/N} r^{−e}`.
///
/// `e = p − 1` for convection and `e = 1` for drift, so that `b` saturates
/// the Marcinkiewicz bound: `b(r)(ω_N r^N)^{e/N} = B` at every radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    pub kind: Kind,
    pub b: f64,
    pub f_bound: f64,
    pub exponent: f64,
    pub orientation: Orientation,
    dim: u32,
    /// `B ω_N^{−e/N}`.
    coef: f64,
}

impl FieldSpec {
    pub fn new(params: &ProblemParams, orientation: Orientation) -> Self {
        let exponent = match params.kind() {
            Kind::Convection => params.p() - 1.0,
            Kind::Drift => 1.0,
        };
        Self::with_parts(
            params.kind(),
            params.dim(),
            params.b(),
            params.f_bound(),
            exponent,
            orientation,
        )
    }

    pub fn with_parts(
        kind: Kind,
        dim: u32,
        b: f64,
        f_bound: f64,
        exponent: f64,
        orientation: Orientation,
    ) -> Self {
        let coef = b * unit_ball_volume(dim).powf(-exponent / dim as f64);
        Self {
            kind,
            b,
            f_bound,
            exponent,
            orientation,
            dim,
            coef,
        }
    }

    /// No field at all.
    pub fn zero(kind: Kind, dim: u32) -> Self {
        Self::with_parts(kind, dim, 0.0, 0.0, 1.0, Orientation::Inward)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `|E(r)|`, clipped at `level`.
    pub fn magnitude(&self, r: f64, level: f64) -> f64 {
        let singular = if self.coef == 0.0 {
            0.0
        } else {
            self.coef * r.powf(-self.exponent)
        };
        (singular + self.f_bound).min(level)
    }

    /// Signed radial component, clipped at `level` in magnitude.
    pub fn radial(&self, r: f64, level: f64) -> f64 {
        self.orientation.sign() * self.magnitude(r, level)
    }

    /// `∫_a^b r^{N−1} E_r(r) dr` with `|E|` clipped at `level`.
    pub fn weighted_integral(&self, a: f64, b: f64, level: f64) -> f64 {
        self.moment(a, b, level, 0.0)
    }

    /// `∫_a^b r^N E_r(r) dr` with `|E|` clipped at `level`.
    pub fn weighted_moment(&self, a: f64, b: f64, level: f64) -> f64 {
        self.moment(a, b, level, 1.0)
    }

    fn moment(&self, a: f64, b: f64, level: f64, shift: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let n = self.dim as f64 + shift;
        let mag = |r0: f64, r1: f64| {
            let singular = if self.coef == 0.0 {
                0.0
            } else {
                let k = n - self.exponent;
                self.coef * (r1.powf(k) - r0.powf(k)) / k
            };
            singular + self.f_bound * (r1.powf(n) - r0.powf(n)) / n
        };
        let clipped = |r0: f64, r1: f64| level * (r1.powf(n) - r0.powf(n)) / n;
        let total = if level.is_infinite() {
            mag(a, b)
        } else if level <= self.f_bound {
            clipped(a, b)
        } else if self.coef == 0.0 {
            mag(a, b)
        } else {
            // |E| exceeds the level below this radius.
            let cut = (self.coef / (level - self.f_bound)).powf(1.0 / self.exponent);
            if cut <= a {
                mag(a, b)
            } else if cut >= b {
                clipped(a, b)
            } else {
                clipped(a, cut) + mag(cut, b)
            }
        };
        self.orientation.sign() * total
    }
}
