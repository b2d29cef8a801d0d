use rearrange::WeightedSample;

use crate::SolverError;

/// `(T_k(v), G_k(v))`: `T_k` clamps to `[−k, k]` and `G_k = v − T_k(v)`.
///
/// Samples store `|v|`, so both parts are nonnegative. The split is exact in
/// floating point: `T + G == v` cell by cell and `T ≤ k`.
pub fn truncation_operators(
    v: &WeightedSample,
    k: f64,
) -> Result<(WeightedSample, WeightedSample), SolverError> {
    if !(k >= 0.0) {
        return Err(SolverError::InvalidArgument {
            what: "truncation level",
            reason: "must be nonnegative",
        });
    }
    let (t, g): (Vec<f64>, Vec<f64>) = v.values().iter().map(|&x| split(x, k)).unzip();
    Ok((v.with_values(&t)?, v.with_values(&g)?))
}

/// For `k ≥ x/2` the difference `x − k` is exact (Sterbenz); below that the
/// tail `g ≥ x/2` is rounded first and `x − g` is exact instead.
fn split(x: f64, k: f64) -> (f64, f64) {
    if x <= k {
        return (x, 0.0);
    }
    let g = x - k;
    if k >= 0.5 * x {
        return (k, g);
    }
    let t = x - g;
    if t <= k {
        (t, g)
    } else {
        // One ulp more tail pushes the head back under the level.
        let g = f64::from_bits(g.to_bits() + 1);
        (x - g, g)
    }
}
