use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use rearrange::csv::{fmt17, two_column};
use rearrange::DecreasingProfile;

use crate::RadialError;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A closed-form a priori bound on `(0, |Ω|]`, together with every constant
/// that went into it.
///
/// Cloning shares the evaluator.
#[derive(Clone)]
pub struct BoundProfile {
    evaluator: Evaluator,
    provenance: Vec<(&'static str, f64)>,
    omega: f64,
}

impl fmt::Debug for BoundProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundProfile")
            .field("omega", &self.omega)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

impl BoundProfile {
    pub(crate) fn new(
        evaluator: impl Fn(f64) -> f64 + Send + Sync + 'static,
        provenance: Vec<(&'static str, f64)>,
        omega: f64,
    ) -> Self {
        Self {
            evaluator: Arc::new(evaluator),
            provenance,
            omega,
        }
    }

    /// The bound at `t`; `+∞` at the origin and zero beyond `|Ω|`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            f64::INFINITY
        } else if t >= self.omega {
            (self.evaluator)(self.omega)
        } else {
            (self.evaluator)(t)
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Named constant from the provenance list.
    pub fn get(&self, key: &str) -> Option<f64> {
        self.provenance
            .iter()
            .find(|(k, _)| *k == key)
            .map(|&(_, v)| v)
    }

    /// Overall multiplicative constant.
    pub fn constant(&self) -> f64 {
        self.get("C").unwrap_or(f64::NAN)
    }

    pub fn gamma(&self) -> f64 {
        self.get("gamma").unwrap_or(f64::NAN)
    }

    pub fn delta(&self) -> f64 {
        self.get("delta").unwrap_or(f64::NAN)
    }

    pub fn provenance(&self) -> &[(&'static str, f64)] {
        &self.provenance
    }

    /// One `key = value` line per tracked constant.
    pub fn provenance_block(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.provenance {
            let _ = writeln!(out, "{k} = {}", fmt17(*v));
        }
        out
    }

    /// Raw evaluations on `grid`.
    pub fn samples(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&t| self.eval(t)).collect()
    }

    /// Step profile with the bound's value at each grid point, clipped to a
    /// running minimum so that rounding cannot break monotonicity.
    pub fn profile(&self, grid: &[f64]) -> Result<DecreasingProfile, RadialError> {
        let mut values = self.samples(grid);
        for i in 1..values.len() {
            values[i] = values[i].min(values[i - 1]);
        }
        let total = grid.last().copied().unwrap_or(self.omega);
        Ok(DecreasingProfile::new(grid.to_vec(), values, total)?)
    }

    /// `t,bound` rows on `grid`.
    pub fn csv(&self, grid: &[f64]) -> String {
        two_column("t,bound", grid.iter().map(|&t| (t, self.eval(t))))
    }
}
