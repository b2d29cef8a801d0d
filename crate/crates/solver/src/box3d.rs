//! Cell-centered finite volumes on the unit cube for
//! `−div(A∇u) = −div(uE) + f`, `u = 0` on the boundary.
//!
//! Seven-point stencil: each face flux uses the normal diagonal entry of `A`
//! (harmonic mean across the face) and the normal component of `E` at the
//! face center. Off-diagonal entries of `A` enter only the ellipticity check.

use std::sync::Arc;

use crate::{SolveResult, SolverError};

/// Largest number of cells per direction.
pub const MAX_BOX_CELLS: usize = 64;

type Point = [f64; 3];

/// Coefficients of a box problem and the iteration controls.
#[derive(Clone)]
pub struct BoxProblem {
    pub cells: usize,
    /// Required lower bound on the smallest eigenvalue of `(A + Aᵀ)/2`.
    pub alpha: f64,
    /// Relative residual at which the Krylov iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    diffusion: Arc<dyn Fn(Point) -> [[f64; 3]; 3] + Send + Sync>,
    field: Arc<dyn Fn(Point) -> Point + Send + Sync>,
    source: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
}

impl BoxProblem {
    pub fn new(
        cells: usize,
        diffusion: impl Fn(Point) -> [[f64; 3]; 3] + Send + Sync + 'static,
        field: impl Fn(Point) -> Point + Send + Sync + 'static,
        source: impl Fn(Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            cells,
            alpha: 0.0,
            tol: 1e-10,
            max_iter: 20_000,
            diffusion: Arc::new(diffusion),
            field: Arc::new(field),
            source: Arc::new(source),
        }
    }

    /// `A = I`.
    pub fn laplacian(
        cells: usize,
        field: impl Fn(Point) -> Point + Send + Sync + 'static,
        source: impl Fn(Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let mut problem = Self::new(
            cells,
            |_| [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            field,
            source,
        );
        problem.alpha = 1.0;
        problem
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Center of cell `(i, j, k)`.
    pub fn center(&self, i: usize, j: usize, k: usize) -> Point {
        let h = 1.0 / self.cells as f64;
        [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h, (k as f64 + 0.5) * h]
    }

    /// Linear index of cell `(i, j, k)`.
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.cells * (j + self.cells * k)
    }
}

/// Smallest eigenvalue of a symmetric 3×3 matrix (trigonometric form).
fn min_eigenvalue(m: [[f64; 3]; 3]) -> f64 {
    let p1 = m[0][1].powi(2) + m[0][2].powi(2) + m[1][2].powi(2);
    let tr = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    if p1 == 0.0 {
        return m[0][0].min(m[1][1]).min(m[2][2]);
    }
    let p2 = (m[0][0] - tr).powi(2) + (m[1][1] - tr).powi(2) + (m[2][2] - tr).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = m;
    for (d, row) in b.iter_mut().enumerate() {
        row[d] -= tr;
        for x in row.iter_mut() {
            *x /= p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
    tr + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos()
}

/// Compressed sparse rows with at most seven entries per row.
struct Csr {
    starts: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Csr {
    fn mul(&self, x: &[f64], out: &mut [f64]) {
        for (row, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for e in self.starts[row]..self.starts[row + 1] {
                s += self.vals[e] * x[self.cols[e]];
            }
            *o = s;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.starts.len() - 1)
            .map(|row| {
                (self.starts[row]..self.starts[row + 1])
                    .find(|&e| self.cols[e] == row)
                    .map_or(0.0, |e| self.vals[e])
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Jacobi-preconditioned BiCGSTAB from a zero start. Returns the iterate,
/// the iteration count and the final relative residual.
fn bicgstab(a: &Csr, b: &[f64], tol: f64, max_iter: usize) -> (Vec<f64>, usize, f64) {
    let n = b.len();
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|d| 1.0 / d).collect();
    let precondition = |v: &[f64], out: &mut [f64]| {
        for ((o, x), d) in out.iter_mut().zip(v).zip(&inv_diag) {
            *o = x * d;
        }
    };
    let b_norm = norm(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return (x, 0, 0.0);
    }
    let mut r = b.to_vec();
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let (mut y, mut z, mut s, mut t) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut rel = 1.0;
    for it in 1..=max_iter {
        let rho_new = dot(&r_hat, &r);
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        precondition(&p, &mut y);
        a.mul(&y, &mut v);
        alpha = rho / dot(&r_hat, &v);
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) / b_norm <= tol {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            return (x, it, norm(&s) / b_norm);
        }
        precondition(&s, &mut z);
        a.mul(&z, &mut t);
        omega = dot(&t, &s) / dot(&t, &t);
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        rel = norm(&r) / b_norm;
        if rel <= tol || !rel.is_finite() {
            return (x, it, rel);
        }
    }
    (x, max_iter, rel)
}

/// Solves the box problem; `u` and `grad` are per cell in
/// [`BoxProblem::index`] order.
pub fn solve_box_convection_3d(problem: &BoxProblem) -> Result<SolveResult, SolverError> {
    let n = problem.cells;
    if !(2..=MAX_BOX_CELLS).contains(&n) {
        return Err(SolverError::InvalidArgument {
            what: "cells",
            reason: "box grids take 2 to 64 cells per direction",
        });
    }
    let h = 1.0 / n as f64;
    let total = n * n * n;
    let mut diag_a = vec![[0.0; 3]; total];
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let a = (problem.diffusion)(problem.center(i, j, k));
                let mut sym = a;
                for (r, row) in sym.iter_mut().enumerate() {
                    for (c, x) in row.iter_mut().enumerate() {
                        *x = 0.5 * (a[r][c] + a[c][r]);
                    }
                }
                let eigenvalue = min_eigenvalue(sym);
                if !(eigenvalue >= problem.alpha && eigenvalue > 0.0) {
                    return Err(SolverError::Ellipticity {
                        cell: (i, j, k),
                        eigenvalue,
                        alpha: problem.alpha,
                    });
                }
                diag_a[problem.index(i, j, k)] = [a[0][0], a[1][1], a[2][2]];
            }
        }
    }

    let mut starts = Vec::with_capacity(total + 1);
    let mut cols = Vec::with_capacity(7 * total);
    let mut vals = Vec::with_capacity(7 * total);
    let mut rhs = vec![0.0; total];
    starts.push(0);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let me = problem.index(i, j, k);
                let c = problem.center(i, j, k);
                let mut diag = 0.0;
                let mut row: Vec<(usize, f64)> = Vec::with_capacity(6);
                let ijk = [i, j, k];
                for d in 0..3 {
                    for dir in [-1i64, 1] {
                        let mut face = c;
                        face[d] += 0.5 * h * dir as f64;
                        let e_n = (problem.field)(face)[d] * dir as f64;
                        let pos = ijk[d] as i64 + dir;
                        let a_p = diag_a[me][d];
                        if pos < 0 || pos >= n as i64 {
                            // Dirichlet face at distance h/2.
                            diag += 2.0 * a_p * h;
                            if e_n > 0.0 && e_n * h > crate::UPWIND_PECLET * a_p {
                                diag += e_n * h * h;
                            }
                            continue;
                        }
                        let mut other = ijk;
                        other[d] = pos as usize;
                        let q = problem.index(other[0], other[1], other[2]);
                        let a_q = diag_a[q][d];
                        let a_f = 2.0 * a_p * a_q / (a_p + a_q);
                        let (w_p, w_q) = if e_n.abs() * h > crate::UPWIND_PECLET * a_f {
                            if e_n > 0.0 {
                                (1.0, 0.0)
                            } else {
                                (0.0, 1.0)
                            }
                        } else {
                            (0.5, 0.5)
                        };
                        diag += a_f * h + e_n * h * h * w_p;
                        row.push((q, -a_f * h + e_n * h * h * w_q));
                    }
                }
                row.push((me, diag));
                row.sort_by_key(|e| e.0);
                for (col, val) in row {
                    cols.push(col);
                    vals.push(val);
                }
                starts.push(cols.len());
                rhs[me] = (problem.source)(c) * h * h * h;
            }
        }
    }
    let matrix = Csr { starts, cols, vals };
    let (u, iterations, rel) = bicgstab(&matrix, &rhs, problem.tol, problem.max_iter);
    if !(rel <= problem.tol) {
        return Err(SolverError::NonConvergence {
            iterations,
            final_update: rel,
        });
    }
    let mut au = vec![0.0; total];
    matrix.mul(&u, &mut au);
    let load = rhs.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let worst = au
        .iter()
        .zip(&rhs)
        .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
    let weak_residual = if load > 0.0 { worst / load } else { worst };

    let value = |i: i64, j: i64, k: i64, own: f64| {
        let inside = |x: i64| (0..n as i64).contains(&x);
        if inside(i) && inside(j) && inside(k) {
            u[problem.index(i as usize, j as usize, k as usize)]
        } else {
            // Ghost value reflecting the zero boundary value at the face.
            -own
        }
    };
    let mut grad = vec![0.0; total];
    for k in 0..n as i64 {
        for j in 0..n as i64 {
            for i in 0..n as i64 {
                let own = u[problem.index(i as usize, j as usize, k as usize)];
                let gx = value(i + 1, j, k, own) - value(i - 1, j, k, own);
                let gy = value(i, j + 1, k, own) - value(i, j - 1, k, own);
                let gz = value(i, j, k + 1, own) - value(i, j, k - 1, own);
                grad[problem.index(i as usize, j as usize, k as usize)] =
                    (gx * gx + gy * gy + gz * gz).sqrt() / (2.0 * h);
            }
        }
    }
    Ok(SolveResult {
        u,
        grad,
        iterations,
        final_update: rel,
        weak_residual,
        truncation: f64::INFINITY,
    })
}
