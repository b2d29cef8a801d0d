//! Vertex-centered finite volumes for the radial problems.
//!
//! Node `i` owns the control volume between the faces `F_{i−1}` and `F_i`
//! (midpoints between nodes, with `F_{−1} = 0`). The convection problem is
//! written in flux form `−J' = r^{N−1}f` with
//! `J = r^{N−1}(a(u') − u|u|^{p−2}E_r)`, the drift problem as
//! `−J' = r^{N−1}(E_r|w'|^{p−2}w' + f)` with `J = r^{N−1}a(w')`.
//! Source loads are exact integrals of `f` over each control volume.
//!
//! Nonlinear problems start from the `p = 2` solve and take under-relaxed
//! Picard steps (coefficients frozen at the current iterate) until the
//! update drops below [`FULL_STEP_UPDATE`], then full Newton steps (both
//! `a(u')` and the lower-order term linearized). Picard is robust far from
//! the solution; Newton brings the weak residual down to rounding.

use radial::{convection_threshold, drift_threshold, Kind, ProblemParams};

use crate::banded::BandedMatrix;
use crate::{FieldSpec, RadialMesh, SolveResult, SolverError, Source};

/// Cell Péclet number above which the convective face value is shifted
/// upstream; the shift is continuous and reaches full upwinding only in the
/// limit.
pub const UPWIND_PECLET: f64 = 1.0;

/// Smallest Picard relaxation reached by repeated halving.
const MIN_RELAXATION: f64 = 1.0 / 64.0;

/// Relative update below which the iteration switches from relaxed Picard
/// steps to full Newton steps.
pub const FULL_STEP_UPDATE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative max-norm update (before relaxation) at which the iteration
    /// stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial weight of the new iterate in Picard steps; halved whenever
    /// the update fails to shrink.
    pub relaxation: f64,
    /// Floor on the p-Laplacian coefficient (`p > 2`) or on `|u'|` (`p < 2`).
    pub coefficient_floor: f64,
    /// Allow `B ≥ B_crit` (only for `p = 2`).
    pub sharpness: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
            relaxation: 0.5,
            coefficient_floor: 1e-10,
            sharpness: false,
        }
    }
}

/// Discrete operator with every mesh-dependent quantity precomputed.
#[derive(Clone)]
struct Operator {
    kind: Kind,
    p: f64,
    alpha: f64,
    level: f64,
    floor: f64,
    nodes: Vec<f64>,
    /// Node spacings `h_k = r_{k+1} − r_k`.
    spacings: Vec<f64>,
    /// `F_k^{N−1}` at the face between nodes `k` and `k+1`.
    face_weights: Vec<f64>,
    /// Clipped `E_r(F_k)`.
    face_fields: Vec<f64>,
    /// Drift: the drift integral over volume `i` is
    /// `half_left[i]·a(s_{i−1}) + half_right[i]·a(s_i)` for the cell slopes
    /// `s`, from a lower-order term interpolated linearly between the cell
    /// midpoints and the node.
    half_left: Vec<f64>,
    half_right: Vec<f64>,
    loads: Vec<f64>,
}

impl Operator {
    fn new(
        params: &ProblemParams,
        mesh: &RadialMesh,
        field: &FieldSpec,
        source: &Source,
        level: f64,
        options: &SolverOptions,
    ) -> Result<Self, SolverError> {
        check_setup(params, mesh, field, options)?;
        let n = params.n();
        let nodes = mesh.nodes().to_vec();
        let faces = mesh.faces();
        let spacings: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        let inner = &faces[1..faces.len() - 1];
        let face_weights = inner.iter().map(|f| f.powf(n - 1.0)).collect();
        let face_fields = inner.iter().map(|&f| field.radial(f, level)).collect();
        let (mut half_left, mut half_right) = (Vec::new(), Vec::new());
        if params.kind() == Kind::Drift {
            let last = nodes.len() - 1;
            for (i, &r) in nodes[..last].iter().enumerate() {
                let (lo, hi) = (faces[i], faces[i + 1]);
                // Zeroth and first moments of r^{N−1}E_r on each half, the
                // first one against the hat rising towards the node.
                let zeroth_left = field.weighted_integral(lo, r, level);
                let zeroth_right = field.weighted_integral(r, hi, level);
                let first_left =
                    (field.weighted_moment(lo, r, level) - lo * zeroth_left) / (r - lo);
                let first_right =
                    (hi * zeroth_right - field.weighted_moment(r, hi, level)) / (hi - r);
                let at_node = first_left + first_right;
                // Weights of the two cell slopes in the nodal slope; the
                // first node interpolates towards u'(0) = 0 at the origin.
                let (left_weight, right_weight) = if i == 0 {
                    (0.0, r / (r + 0.5 * spacings[0]))
                } else {
                    let (hl, hr) = (spacings[i - 1], spacings[i]);
                    (hr / (hl + hr), hl / (hl + hr))
                };
                half_left.push(if i == 0 {
                    0.0
                } else {
                    zeroth_left - first_left + left_weight * at_node
                });
                half_right.push(zeroth_right - first_right + right_weight * at_node);
            }
            // The Dirichlet row carries no drift term.
            half_left.push(0.0);
            half_right.push(0.0);
        }
        // Volumes are (F_{i−1}, F_i); the last node is Dirichlet.
        let mut loads = source.loads(mesh.dim(), &faces[..faces.len() - 1], level)?;
        loads.push(0.0);
        Ok(Self {
            kind: params.kind(),
            p: params.p(),
            alpha: params.alpha(),
            level,
            floor: options.coefficient_floor,
            nodes,
            spacings,
            face_weights,
            face_fields,
            half_left,
            half_right,
            loads,
        })
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn is_linear(&self) -> bool {
        self.p == 2.0 && self.level.is_infinite()
    }

    /// `α|g|^{p−2}` with the floor: on the coefficient for `p ≥ 2`, on `|g|`
    /// for `p < 2`.
    fn diffusion(&self, slope: f64) -> f64 {
        let g = slope.abs();
        if self.p == 2.0 {
            self.alpha
        } else if self.p > 2.0 {
            self.alpha * g.powf(self.p - 2.0).max(self.floor)
        } else {
            self.alpha * g.max(self.floor).powf(self.p - 2.0)
        }
    }

    /// Derivative of `s ↦ diffusion(s)·s` (Newton) or `diffusion(s)` itself
    /// (Picard); off the floor the derivative is `(p − 1)·diffusion(s)`.
    fn diffusion_slope(&self, slope: f64, newton: bool) -> f64 {
        let d = self.diffusion(slope);
        if self.p == 2.0 || !newton {
            return d;
        }
        let g = slope.abs();
        let floored = if self.p > 2.0 {
            g.powf(self.p - 2.0) <= self.floor
        } else {
            g <= self.floor
        };
        if floored {
            d
        } else {
            (self.p - 1.0) * d
        }
    }

    /// Lower-order nonlinearity `ψ(x) = |x|^{p−2}x/(1 + |x|^{p−1}/n)` and its
    /// derivative (Newton) or secant `ψ(x)/x` (Picard). For `p ≠ 2` the base
    /// of `|x|^{p−2}` is floored.
    fn lower_order(&self, x: f64, newton: bool) -> (f64, f64) {
        if self.p == 2.0 && self.level.is_infinite() {
            return (x, 1.0);
        }
        let a = x.abs();
        let power = if self.p == 2.0 {
            1.0
        } else {
            a.max(self.floor).powf(self.p - 2.0)
        };
        let damping = if self.level.is_infinite() {
            1.0
        } else {
            1.0 / (1.0 + a.powf(self.p - 1.0) / self.level)
        };
        if !newton {
            return (x * power * damping, power * damping);
        }
        let growth = if a > self.floor { self.p - 1.0 } else { 1.0 };
        (x * power * damping, growth * power * damping * damping)
    }

    /// Face coefficients `(A, C, w0, w1, K)` at state `û`: the flux is
    /// `A(u_{k+1} − u_k) − C(w0 u_k + w1 u_{k+1}) − K`, linearized at `û`
    /// (exact when `u = û`).
    fn face(&self, k: usize, u: &[f64], newton: bool) -> (f64, f64, f64, f64, f64) {
        let h = self.spacings[k];
        let s = (u[k + 1] - u[k]) / h;
        let d = self.diffusion(s);
        let d_slope = self.diffusion_slope(s, newton);
        let a = self.face_weights[k] * d_slope / h;
        // a(s) − a'(s)s, zero for p = 2.
        let diffusion_offset = self.face_weights[k] * (d - d_slope) * s;
        if self.kind == Kind::Drift {
            return (a, 0.0, 0.5, 0.5, -diffusion_offset);
        }
        let e = self.face_fields[k];
        // Past the threshold the downstream weight decays as `(P*/Pe)²/2`:
        // continuous in the Péclet number, and the downstream coefficient
        // `d/h − |E|·weight` never drops below `d/(2h)`.
        let peclet = e.abs() * h / d;
        let downstream = if peclet > UPWIND_PECLET {
            0.5 * (UPWIND_PECLET / peclet).powi(2)
        } else {
            0.5
        };
        let (w0, w1) = if e > 0.0 {
            (1.0 - downstream, downstream)
        } else {
            (downstream, 1.0 - downstream)
        };
        let x = w0 * u[k] + w1 * u[k + 1];
        let (value, slope) = self.lower_order(x, newton);
        let weight = self.face_weights[k] * e;
        (
            a,
            weight * slope,
            w0,
            w1,
            weight * (value - slope * x) - diffusion_offset,
        )
    }

    /// Drift coefficients `(left, right, K)`: the drift integral over volume
    /// `i` is `left·(u_i − u_{i−1}) + right·(u_{i+1} − u_i) + K`, linearized
    /// at `û`.
    fn drift(&self, i: usize, u: &[f64], newton: bool) -> (f64, f64, f64) {
        let mut offset = 0.0;
        let left = if i == 0 {
            0.0
        } else {
            let h = self.spacings[i - 1];
            let s = (u[i] - u[i - 1]) / h;
            let (value, slope) = self.lower_order(s, newton);
            offset += self.half_left[i] * (value - slope * s);
            self.half_left[i] * slope / h
        };
        let h = self.spacings[i];
        let s = (u[i + 1] - u[i]) / h;
        let (value, slope) = self.lower_order(s, newton);
        offset += self.half_right[i] * (value - slope * s);
        (left, self.half_right[i] * slope / h, offset)
    }

    /// Linear system with every nonlinearity linearized (Newton) or frozen
    /// (Picard) at `u`.
    fn assemble(&self, u: &[f64], newton: bool) -> (BandedMatrix, Vec<f64>) {
        let n = self.len();
        let mut m = BandedMatrix::zeros(n, 1, 1);
        let mut rhs = self.loads.clone();
        for i in 0..n - 1 {
            // −J_i
            let (a, c, w0, w1, k) = self.face(i, u, newton);
            m.add(i, i, a + c * w0);
            m.add(i, i + 1, -a + c * w1);
            rhs[i] -= k;
            // +J_{i−1}
            if i > 0 {
                let (a, c, w0, w1, k) = self.face(i - 1, u, newton);
                m.add(i, i, a - c * w1);
                m.add(i, i - 1, -a - c * w0);
                rhs[i] += k;
            }
            // −Q_i
            if self.kind == Kind::Drift {
                let (left, right, k) = self.drift(i, u, newton);
                m.add(i, i, -left + right);
                if i > 0 {
                    m.add(i, i - 1, left);
                }
                m.add(i, i + 1, -right);
                rhs[i] += k;
            }
        }
        m.add(n - 1, n - 1, 1.0);
        (m, rhs)
    }

    /// Nonlinear residual `J_{i−1} − J_i − Q_i − S_i` at `u`.
    fn residual(&self, u: &[f64]) -> Vec<f64> {
        let flux = |k: usize| {
            let (a, c, w0, w1, offset) = self.face(k, u, false);
            a * (u[k + 1] - u[k]) - c * (w0 * u[k] + w1 * u[k + 1]) - offset
        };
        (0..self.len() - 1)
            .map(|i| {
                let mut r = -flux(i) - self.loads[i];
                if i > 0 {
                    r += flux(i - 1);
                }
                if self.kind == Kind::Drift {
                    let (left, right, offset) = self.drift(i, u, false);
                    let q = if i > 0 { left * (u[i] - u[i - 1]) } else { 0.0 }
                        + right * (u[i + 1] - u[i])
                        + offset;
                    r -= q;
                }
                r
            })
            .collect()
    }

    fn solve_linearized(&self, u: &[f64], newton: bool) -> Result<Vec<f64>, SolverError> {
        let (matrix, rhs) = self.assemble(u, newton);
        let lu = matrix.factor().ok_or(SolverError::Singular)?;
        let mut x = lu.solve(&rhs);
        *x.last_mut().unwrap() = 0.0;
        Ok(x)
    }

    fn gradients(&self, u: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = Vec::with_capacity(u.len());
        g.push(0.0);
        for k in 0..u.len() - 1 {
            g.push(((u[k + 1] - u[k]) / self.spacings[k]).abs());
        }
        g[0] = g[1];
        g
    }

    fn relative_residual(&self, u: &[f64], test_count: usize) -> f64 {
        let res = self.residual(u);
        let tests = test_nodes(res.len(), test_count);
        let worst = tests.iter().map(|&i| res[i].abs()).fold(0.0, f64::max);
        // ℓ¹ of the loads, i.e. ∫|f| against hats that sum to one; a max-norm
        // would shrink with h and inflate rounding in the fluxes.
        let load: f64 = self.loads.iter().map(|s| s.abs()).sum();
        if load > 0.0 {
            worst / load
        } else {
            worst
        }
    }

    fn run(&self, options: &SolverOptions) -> Result<SolveResult, SolverError> {
        let n = self.len();
        let zero = vec![0.0; n];
        // Start from the p = 2 problem linearized at u = 0, which is the
        // exact linear operator up to truncation damping.
        let mut u = if self.p == 2.0 {
            self.solve_linearized(&zero, false)?
        } else {
            Self { p: 2.0, ..self.clone() }.solve_linearized(&zero, false)?
        };
        let mut iterations = 1;
        let mut final_update = 0.0;
        if !self.is_linear() {
            final_update = f64::INFINITY;
            let mut relaxation = options.relaxation;
            while iterations < options.max_iter {
                let newton = final_update < FULL_STEP_UPDATE;
                let next = self.solve_linearized(&u, newton)?;
                // Unrelaxed update, relative to the new iterate.
                let (change, size) = next
                    .iter()
                    .zip(&u)
                    .fold((0.0f64, 0.0f64), |(c, s), (new, old)| {
                        (c.max((new - old).abs()), s.max(new.abs()))
                    });
                let update = if size > 0.0 { change / size } else { change };
                iterations += 1;
                // A Picard update that fails to shrink signals a cycle.
                if !newton && update >= final_update {
                    relaxation = (0.5 * relaxation).max(MIN_RELAXATION);
                }
                let step = if newton { 1.0 } else { relaxation };
                for (old, new) in u.iter_mut().zip(&next) {
                    *old = step * new + (1.0 - step) * *old;
                }
                final_update = update;
                if final_update <= options.tol {
                    break;
                }
            }
            if !(final_update <= options.tol) {
                return Err(SolverError::NonConvergence {
                    iterations,
                    final_update,
                });
            }
        }
        let weak_residual = self.relative_residual(&u, n);
        Ok(SolveResult {
            grad: self.gradients(&u),
            u,
            iterations,
            final_update,
            weak_residual,
            truncation: self.level,
        })
    }
}

/// `count` node indices spread evenly over `0..len`.
fn test_nodes(len: usize, count: usize) -> Vec<usize> {
    if count == 0 || len == 0 {
        return Vec::new();
    }
    if count >= len {
        return (0..len).collect();
    }
    (0..count)
        .map(|k| k * (len - 1) / (count - 1).max(1))
        .collect()
}

fn check_setup(
    params: &ProblemParams,
    mesh: &RadialMesh,
    field: &FieldSpec,
    options: &SolverOptions,
) -> Result<(), SolverError> {
    if mesh.dim() != params.dim() || field.dim() != params.dim() {
        return Err(SolverError::Mismatch("dimension"));
    }
    if field.kind != params.kind() {
        return Err(SolverError::Mismatch("field kind"));
    }
    if (mesh.domain_measure() - params.omega()).abs() > 1e-10 * params.omega() {
        return Err(SolverError::Mismatch("mesh ball and domain measure"));
    }
    if !(options.relaxation > 0.0 && options.relaxation <= 1.0) {
        return Err(SolverError::InvalidArgument {
            what: "relaxation",
            reason: "must lie in (0, 1]",
        });
    }
    let b_crit = match params.kind() {
        Kind::Convection => convection_threshold(params)?,
        Kind::Drift => drift_threshold(params)?,
    };
    if field.b >= b_crit {
        if !options.sharpness {
            return Err(SolverError::ThresholdViolation { b: field.b, b_crit });
        }
        if params.p() != 2.0 {
            return Err(SolverError::Unsupported(
                "fields above the threshold are only solved for p = 2",
            ));
        }
    }
    Ok(())
}

fn require(params: &ProblemParams, kind: Kind) -> Result<(), SolverError> {
    if params.kind() != kind {
        return Err(SolverError::Mismatch("problem kind"));
    }
    Ok(())
}

/// `−(r^{N−1}a(u'))' = −(r^{N−1}u|u|^{p−2}E_r)' + r^{N−1}f`, `u(R) = 0`.
pub fn solve_radial_convection(
    params: &ProblemParams,
    mesh: &RadialMesh,
    field: &FieldSpec,
    source: &Source,
    options: &SolverOptions,
) -> Result<SolveResult, SolverError> {
    require(params, Kind::Convection)?;
    Operator::new(params, mesh, field, source, f64::INFINITY, options)?.run(options)
}

/// `−(r^{N−1}a(w'))' = r^{N−1}(E_r|w'|^{p−2}w' + f)`, `w(R) = 0`.
pub fn solve_radial_drift(
    params: &ProblemParams,
    mesh: &RadialMesh,
    field: &FieldSpec,
    source: &Source,
    options: &SolverOptions,
) -> Result<SolveResult, SolverError> {
    require(params, Kind::Drift)?;
    Operator::new(params, mesh, field, source, f64::INFINITY, options)?.run(options)
}

/// Truncated approximation at level `n`: `E` and `f` clipped at `n`, and the
/// lower-order term damped by `1/(1 + |u|^{p−1}/n)` (convection) or
/// `1/(1 + |∇w|^{p−1}/n)` (drift). `n = +∞` is the untruncated solve.
pub fn solve_truncated(
    params: &ProblemParams,
    mesh: &RadialMesh,
    field: &FieldSpec,
    source: &Source,
    level: f64,
    options: &SolverOptions,
) -> Result<SolveResult, SolverError> {
    if level.is_infinite() && level > 0.0 {
        return match params.kind() {
            Kind::Convection => solve_radial_convection(params, mesh, field, source, options),
            Kind::Drift => solve_radial_drift(params, mesh, field, source, options),
        };
    }
    if !(level >= 1.0) {
        return Err(SolverError::InvalidArgument {
            what: "truncation level",
            reason: "must be at least 1",
        });
    }
    Operator::new(params, mesh, field, source, level, options)?.run(options)
}

/// Largest hat-function residual of `result` over `test_count` nodes spread
/// over the mesh, relative to the ℓ¹ norm of the nodal loads, for the problem the
/// result was solved at (including its truncation level).
pub fn weak_residual(
    result: &SolveResult,
    params: &ProblemParams,
    mesh: &RadialMesh,
    field: &FieldSpec,
    source: &Source,
    test_count: usize,
) -> Result<f64, SolverError> {
    let options = SolverOptions {
        sharpness: params.p() == 2.0,
        ..SolverOptions::default()
    };
    let op = Operator::new(params, mesh, field, source, result.truncation, &options)?;
    if result.u.len() != op.len() {
        return Err(SolverError::Mismatch("result length and mesh"));
    }
    Ok(op.relative_residual(&result.u, test_count))
}

