use std::fmt;
use std::sync::Arc;

use radial::Datum;
use rearrange::unit_ball_volume;

use crate::SolverError;

/// Right-hand side of a radial problem, given through what the finite-volume
/// scheme needs: `G(r) = ∫₀^r s^{N−1} f(s) ds`.
#[derive(Clone)]
pub enum Source {
    /// `f(x) = f̄(ω_N|x|^N)` for a radially decreasing datum.
    Datum(Datum),
    /// Any radial source through its primitive `G`, with `G(0) = 0`.
    Primitive(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Datum(d) => f.debug_tuple("Datum").field(d).finish(),
            Source::Primitive(_) => f.write_str("Primitive(..)"),
        }
    }
}

impl From<Datum> for Source {
    fn from(d: Datum) -> Self {
        Source::Datum(d)
    }
}

impl Source {
    pub fn primitive(g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Source::Primitive(Arc::new(g))
    }

    pub fn datum(&self) -> Option<&Datum> {
        match self {
            Source::Datum(d) => Some(d),
            Source::Primitive(_) => None,
        }
    }

    /// `G(b) − G(a)` for each consecutive pair of `radii`, with `f` clipped
    /// at `level` (only data can be clipped).
    pub(crate) fn loads(&self, dim: u32, radii: &[f64], level: f64) -> Result<Vec<f64>, SolverError> {
        let w = unit_ball_volume(dim);
        let n = dim as f64;
        let measure = |r: f64| w * r.powf(n);
        let g: Box<dyn Fn(f64) -> f64> = match self {
            Source::Primitive(g) => {
                if level.is_finite() {
                    return Err(SolverError::Unsupported(
                        "only data sources can be truncated",
                    ));
                }
                let g = g.clone();
                Box::new(move |r| g(r))
            }
            Source::Datum(d) => {
                let d = d.clone();
                if level.is_infinite() {
                    Box::new(move |r| d.cumulative(measure(r)) / (n * w))
                } else {
                    let cut = level_crossing(&d, level)?;
                    Box::new(move |r| {
                        let s = measure(r);
                        let clipped = if s <= cut {
                            level * s
                        } else {
                            level * cut + d.cumulative(s) - d.cumulative(cut)
                        };
                        clipped / (n * w)
                    })
                }
            }
        };
        let values: Vec<f64> = radii.iter().map(|&r| if r == 0.0 { 0.0 } else { g(r) }).collect();
        Ok(values.windows(2).map(|v| v[1] - v[0]).collect())
    }
}

/// Measure `s` at which `f̄` drops to `level`; `0` if it never exceeds it.
fn level_crossing(d: &Datum, level: f64) -> Result<f64, SolverError> {
    if let radial::DatumShape::Concentrated { mass } = d.shape() {
        if *mass > 0.0 {
            return Err(SolverError::Unsupported(
                "a concentrated mass has no truncation",
            ));
        }
        return Ok(0.0);
    }
    let omega = d.omega();
    if d.fbar(omega) >= level {
        return Ok(omega);
    }
    let (mut lo, mut hi) = (0.0, omega);
    if d.fbar(omega * 1e-300_f64.max(f64::MIN_POSITIVE)) <= level {
        return Ok(0.0);
    }
    // Bisection in log scale once the bracket is positive.
    for _ in 0..200 {
        let mid = if lo == 0.0 { hi * 1e-3 } else { (lo * hi).sqrt() };
        if d.fbar(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
        if lo > 0.0 && hi / lo < 1.0 + 1e-14 {
            break;
        }
    }
    Ok(hi)
}
