use rearrange::unit_ball_volume;

use crate::SolverError;

/// Nodes `r_0 < … < r_{n−1} = R` on `(0, R]` with spacings growing
/// geometrically away from the origin.
///
/// `grading` is the ratio of the last spacing to the first; `1` gives a
/// uniform mesh. The first node sits one spacing from the origin, and node
/// `i` owns the cell `(r_{i−1}, r_i]` (with `r_{−1} = 0`) for rearrangement
/// purposes.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMesh {
    dim: u32,
    radius: f64,
    grading: f64,
    nodes: Vec<f64>,
}

pub const MIN_NODES: usize = 16;

impl RadialMesh {
    pub fn new(dim: u32, radius: f64, nodes: usize, grading: f64) -> Result<Self, SolverError> {
        if dim < 1 {
            return Err(SolverError::Mesh("dimension must be positive"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(SolverError::Mesh("outer radius must be positive"));
        }
        if nodes < MIN_NODES {
            return Err(SolverError::Mesh("at least 16 nodes are required"));
        }
        if !(grading >= 1.0 && grading.is_finite()) {
            return Err(SolverError::Mesh("grading must be at least 1"));
        }
        // n nodes, n spacings counting the gap from the origin to r_0.
        let ratio = grading.powf(1.0 / (nodes - 1) as f64);
        let spacings: Vec<f64> = (0..nodes).map(|k| ratio.powi(k as i32)).collect();
        let total: f64 = spacings.iter().sum();
        let mut acc = 0.0;
        let mut radii: Vec<f64> = spacings
            .iter()
            .map(|h| {
                acc += h;
                radius * acc / total
            })
            .collect();
        radii[nodes - 1] = radius;
        Ok(Self {
            dim,
            radius,
            grading,
            nodes: radii,
        })
    }

    /// Mesh of the ball with the same measure as the domain.
    pub fn for_domain(dim: u32, omega: f64, nodes: usize, grading: f64) -> Result<Self, SolverError> {
        let radius = (omega / unit_ball_volume(dim)).powf(1.0 / dim as f64);
        Self::new(dim, radius, nodes, grading)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Largest spacing.
    pub fn max_spacing(&self) -> f64 {
        let mut prev = 0.0;
        self.nodes
            .iter()
            .map(|&r| {
                let h = r - prev;
                prev = r;
                h
            })
            .fold(0.0, f64::max)
    }

    /// Control-volume faces: `0`, the midpoints between nodes, then `R`.
    pub(crate) fn faces(&self) -> Vec<f64> {
        let mut faces = Vec::with_capacity(self.len() + 1);
        faces.push(0.0);
        faces.extend(self.nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        faces.push(self.radius);
        faces
    }

    /// `ω_N (r_i^N − r_{i−1}^N)`; they add up to `ω_N R^N`.
    pub fn cell_measures(&self) -> Vec<f64> {
        let w = unit_ball_volume(self.dim);
        let n = self.dim as i32;
        let mut prev = 0.0_f64;
        self.nodes
            .iter()
            .map(|&r| {
                let m = w * (r.powi(n) - prev.powi(n));
                prev = r;
                m
            })
            .collect()
    }

    /// `ω_N R^N`.
    pub fn domain_measure(&self) -> f64 {
        unit_ball_volume(self.dim) * self.radius.powi(self.dim as i32)
    }
}
