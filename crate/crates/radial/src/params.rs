use rearrange::unit_ball_volume;

use crate::RadialError;

/// Which first-order term the problem carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `−div(a(∇u)) = −div(u|u|^{p−2}E) + f`.
    Convection,
    /// `−div(a(∇w)) = E·|∇w|^{p−2}∇w + f`.
    Drift,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Convection => "convection",
            Kind::Drift => "drift",
        }
    }
}

/// Structural data of one problem instance.
///
/// `b` is the Marcinkiewicz constant of the singular field part, `f_bound`
/// the sup norm of the bounded part. `ball_volume` and `sigma` are
/// `ω_N` and `σ_N = N ω_N^{1/N}`, computed once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    kind: Kind,
    dim: u32,
    p: f64,
    alpha: f64,
    beta_growth: f64,
    omega: f64,
    b: f64,
    f_bound: f64,
    m: f64,
    q: f64,
    ball_volume: f64,
    sigma: f64,
}

fn invalid(what: &'static str, value: f64, reason: &'static str) -> RadialError {
    RadialError::InvalidParams { what, value, reason }
}

impl ProblemParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        kind: Kind,
        dim: u32,
        p: f64,
        alpha: f64,
        beta_growth: f64,
        omega: f64,
        b: f64,
        f_bound: f64,
        m: f64,
        q: f64,
    ) -> Result<Self, RadialError> {
        let n = dim as f64;
        if dim < 3 {
            return Err(invalid("N", n, "dimension must be at least 3"));
        }
        if !(p > 1.0 && p < n) {
            return Err(invalid("p", p, "must lie in (1, N)"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid("alpha", alpha, "must be positive"));
        }
        if !(beta_growth >= alpha && beta_growth.is_finite()) {
            return Err(invalid("beta", beta_growth, "must be at least alpha"));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(invalid("omega", omega, "domain measure must be positive"));
        }
        if !(b >= 0.0 && b.is_finite()) {
            return Err(invalid("B", b, "must be nonnegative"));
        }
        if !(f_bound >= 0.0 && f_bound.is_finite()) {
            return Err(invalid("Fbound", f_bound, "must be nonnegative"));
        }
        if !(m >= 1.0 && m.is_finite()) {
            return Err(invalid("m", m, "must be at least 1"));
        }
        if !(q > 0.0) {
            return Err(invalid("q", q, "must be positive"));
        }
        match kind {
            Kind::Convection if m >= n / p => {
                return Err(invalid("m", m, "convection needs m < N/p"));
            }
            Kind::Drift if m <= 1.0 => {
                return Err(invalid("m", m, "drift needs m > 1"));
            }
            _ => {}
        }
        let ball_volume = unit_ball_volume(dim);
        Ok(Self {
            kind,
            dim,
            p,
            alpha,
            beta_growth,
            omega,
            b,
            f_bound,
            m,
            q,
            ball_volume,
            sigma: n * ball_volume.powf(1.0 / n),
        })
    }

    /// Linear-operator instance: `α = β = 1`, `|Ω| = 1`, no bounded field.
    pub fn model(kind: Kind, dim: u32, p: f64, m: f64, q: f64) -> Result<Self, RadialError> {
        Self::new(kind, dim, p, 1.0, 1.0, 1.0, 0.0, 0.0, m, q)
    }

    /// Same instance with a different singular-field constant.
    pub fn with_b(&self, b: f64) -> Result<Self, RadialError> {
        Self::new(
            self.kind,
            self.dim,
            self.p,
            self.alpha,
            self.beta_growth,
            self.omega,
            b,
            self.f_bound,
            self.m,
            self.q,
        )
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta_growth(&self) -> f64 {
        self.beta_growth
    }

    /// `|Ω|`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Marcinkiewicz constant of the singular field part.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Sup norm of the bounded field part.
    pub fn f_bound(&self) -> f64 {
        self.f_bound
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> f64 {
        self.dim as f64
    }

    /// `ω_N`.
    pub fn ball_volume(&self) -> f64 {
        self.ball_volume
    }

    /// `σ_N = N ω_N^{1/N}`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `p' = p/(p − 1)`.
    pub fn p_conj(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// Radius of the ball with measure `|Ω|`.
    pub fn radius(&self) -> f64 {
        (self.omega / self.ball_volume).powf(1.0 / self.n())
    }

    /// Exponent of the standard solution profile, `(N − pm)/((p−1)Nm)`.
    pub fn critical_exponent(&self) -> f64 {
        let n = self.n();
        (n - self.p * self.m) / ((self.p - 1.0) * n * self.m)
    }

    /// `(p*)' = Np/(Np − N + p)`.
    pub fn sobolev_dual_exponent(&self) -> f64 {
        let n = self.n();
        n * self.p / (n * self.p - n + self.p)
    }

    /// `max{1, N/(N(p−1)+1)}`.
    pub fn lower_exponent(&self) -> f64 {
        let n = self.n();
        (n / (n * (self.p - 1.0) + 1.0)).max(1.0)
    }
}
