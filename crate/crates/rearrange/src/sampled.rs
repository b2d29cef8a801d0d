use crate::RearrangeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// Value on `(x_{i-1}, x_i]` is `y_i`; `y_0` at and below `x_0`.
    PiecewiseConstant,
    /// Linear between abscissae, constant extension outside.
    PiecewiseLinear,
}

/// A real function known on a strictly increasing set of abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    abscissae: Vec<f64>,
    ordinates: Vec<f64>,
    interpolation: Interpolation,
}

impl SampledFunction {
    pub fn new(
        abscissae: Vec<f64>,
        ordinates: Vec<f64>,
        interpolation: Interpolation,
    ) -> Result<Self, RearrangeError> {
        if abscissae.is_empty() {
            return Err(RearrangeError::Empty);
        }
        if ordinates.len() != abscissae.len() {
            return Err(RearrangeError::Length {
                what: "ordinates",
                got: ordinates.len(),
                expected: abscissae.len(),
            });
        }
        for (index, w) in abscissae.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(RearrangeError::Abscissae { index: index + 1 });
            }
        }
        Ok(Self {
            abscissae,
            ordinates,
            interpolation,
        })
    }

    /// Tabulates `f` on the given abscissae.
    pub fn tabulate<F: Fn(f64) -> f64>(
        abscissae: &[f64],
        f: F,
        interpolation: Interpolation,
    ) -> Result<Self, RearrangeError> {
        let ordinates = abscissae.iter().map(|&x| f(x)).collect();
        Self::new(abscissae.to_vec(), ordinates, interpolation)
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn len(&self) -> usize {
        self.abscissae.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissae.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let xs = &self.abscissae;
        let ys = &self.ordinates;
        let i = xs.partition_point(|&a| a < x);
        if i == 0 {
            return ys[0];
        }
        if i >= xs.len() {
            return ys[xs.len() - 1];
        }
        match self.interpolation {
            Interpolation::PiecewiseConstant => ys[i],
            Interpolation::PiecewiseLinear => {
                let w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
                ys[i - 1] + w * (ys[i] - ys[i - 1])
            }
        }
    }
}
