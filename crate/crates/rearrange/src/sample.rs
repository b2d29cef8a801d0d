use crate::RearrangeError;

/// Relative tolerance between the sum of cell measures and the declared
/// total measure.
const TOTAL_RTOL: f64 = 1e-12;

/// A function discretized as `(|value|, measure)` cells over a domain of total
/// measure `|Ω|`.
///
/// Values are stored as absolute values; the sign of the input is discarded on
/// construction because every consumer works with `|v|`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample {
    values: Vec<f64>,
    measures: Vec<f64>,
    total_measure: f64,
}

impl WeightedSample {
    /// Builds a sample whose total measure is the sum of the cell measures,
    /// taken in ascending order so that it does not depend on the cell order.
    pub fn new(values: &[f64], measures: &[f64]) -> Result<Self, RearrangeError> {
        let mut sorted = measures.to_vec();
        sorted.sort_by(f64::total_cmp);
        let total: f64 = sorted.iter().sum();
        Self::with_total(values, measures, total)
    }

    /// Builds a sample over a domain of declared measure `total`; the cell
    /// measures must add up to it within `1e-12` relative.
    pub fn with_total(values: &[f64], measures: &[f64], total: f64) -> Result<Self, RearrangeError> {
        if values.is_empty() {
            return Err(RearrangeError::Empty);
        }
        if measures.len() != values.len() {
            return Err(RearrangeError::Length {
                what: "measures",
                got: measures.len(),
                expected: values.len(),
            });
        }
        for (index, (&value, &measure)) in values.iter().zip(measures).enumerate() {
            if !value.is_finite() {
                return Err(RearrangeError::NonFinite { index, value });
            }
            if !(measure > 0.0 && measure.is_finite()) {
                return Err(RearrangeError::NonPositiveMeasure { index, measure });
            }
        }
        let sum: f64 = measures.iter().sum();
        if !(total > 0.0) || (sum - total).abs() > TOTAL_RTOL * total {
            return Err(RearrangeError::TotalMismatch { sum, total });
        }
        Ok(Self {
            values: values.iter().map(|v| v.abs()).collect(),
            measures: measures.to_vec(),
            total_measure: total,
        })
    }

    /// Builds a sample from `(value, measure)` pairs.
    pub fn from_cells(cells: &[(f64, f64)]) -> Result<Self, RearrangeError> {
        let values: Vec<f64> = cells.iter().map(|c| c.0).collect();
        let measures: Vec<f64> = cells.iter().map(|c| c.1).collect();
        Self::new(&values, &measures)
    }

    /// A constant function `c` on a domain of measure `total`, as one cell.
    pub fn constant(c: f64, total: f64) -> Result<Self, RearrangeError> {
        Self::with_total(&[c], &[total], total)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Absolute cell values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Same partition, new values.
    pub fn with_values(&self, values: &[f64]) -> Result<Self, RearrangeError> {
        Self::with_total(values, &self.measures, self.total_measure)
    }

    /// `(∑ |v|^r μ)^{1/r}`, summed in cell order.
    pub fn lr_norm(&self, r: f64) -> f64 {
        let sum: f64 = self
            .values
            .iter()
            .zip(&self.measures)
            .map(|(v, m)| v.powf(r) * m)
            .sum();
        sum.powf(1.0 / r)
    }

    /// True if both samples have the same number of cells and equal measures
    /// up to `1e-12` relative.
    pub fn same_partition(&self, other: &Self) -> Result<(), RearrangeError> {
        if self.len() != other.len() {
            return Err(RearrangeError::Length {
                what: "cells",
                got: other.len(),
                expected: self.len(),
            });
        }
        for (index, (a, b)) in self.measures.iter().zip(&other.measures).enumerate() {
            if (a - b).abs() > TOTAL_RTOL * a.max(*b) {
                return Err(RearrangeError::Partition { index });
            }
        }
        Ok(())
    }
}
