use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RearrangeError {
    #[error("sample is empty")]
    Empty,
    #[error("length mismatch: {what} has {got} entries, expected {expected}")]
    Length {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("cell {index}: measure {measure} is not strictly positive")]
    NonPositiveMeasure { index: usize, measure: f64 },
    #[error("cell {index}: value {value} is not finite")]
    NonFinite { index: usize, value: f64 },
    #[error("cell measures sum to {sum}, declared total is {total}")]
    TotalMismatch { sum: f64, total: f64 },
    #[error("breakpoints must be strictly increasing in (0, {total}]; violated at index {index}")]
    Breakpoints { index: usize, total: f64 },
    #[error("profile values must be nonnegative and nonincreasing; violated at index {index}")]
    NotDecreasing { index: usize },
    #[error("samples do not share a cell partition (cell {index})")]
    Partition { index: usize },
    #[error("abscissae must be strictly increasing; violated at index {index}")]
    Abscissae { index: usize },
    #[error("{what} is negative at abscissa {at}")]
    Domain { what: &'static str, at: f64 },
    #[error("cell {index}: |v| = {value} exceeds the sequence liminf {liminf}")]
    LiminfPrecondition {
        index: usize,
        value: f64,
        liminf: f64,
    },
    #[error("invalid head exponent {0}: must be finite and nonpositive")]
    HeadExponent(f64),
}
