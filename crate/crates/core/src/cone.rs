//! Finitely generated convex cones and the point-to-cone distance.
//!
//! Distances are metric projections onto the conical hull of the generators,
//! computed as a non-negative least squares problem `min ‖Gλ − v‖, λ ≥ 0`
//! with the Lawson–Hanson active-set iteration.

use nalgebra::DVector;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{orthonormalize, Matrix, Point, Subspace};

/// Convergence tolerance of the active-set iteration (relative to the data scale).
pub const NNLS_TOL: f64 = 1e-12;

/// A finitely generated convex cone `{Σ λ_i g_i : λ_i ≥ 0}` with unit generators.
/// An empty generator list is the zero cone.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCone {
    ambient_dim: usize,
    generators: Vec<Point>,
}

impl ConvexCone {
    /// Builds a cone from arbitrary nonzero vectors; each is normalized to unit
    /// length and zero vectors are dropped.
    pub fn new(ambient_dim: usize, generators: Vec<Point>) -> Result<Self> {
        let mut unit = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != ambient_dim {
                return Err(dim_mismatch(ambient_dim, g.len(), "generator length"));
            }
            if g.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("non-finite generator".into()));
            }
            let n = g.norm();
            if n > 0.0 {
                unit.push(g / n);
            }
        }
        Ok(ConvexCone { ambient_dim, generators: unit })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        ConvexCone { ambient_dim, generators: Vec::new() }
    }

    /// The full line `{t u : t ∈ R}`.
    pub fn line(direction: &Point) -> Result<Self> {
        ConvexCone::new(direction.len(), vec![direction.clone(), -direction])
    }

    /// The subspace `s` viewed as a cone, generated by ± its basis vectors.
    pub fn from_subspace(s: &Subspace) -> Self {
        let generators = s.basis_vectors().into_iter().flat_map(|b| [b.clone(), -b]).collect();
        ConvexCone { ambient_dim: s.ambient_dim(), generators }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Metric projection of `v` onto the cone.
    pub fn project(&self, v: &Point) -> Result<Point> {
        if v.len() != self.ambient_dim {
            return Err(dim_mismatch(self.ambient_dim, v.len(), "query vector length"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite query vector".into()));
        }
        if self.generators.is_empty() {
            return Ok(Point::zeros(self.ambient_dim));
        }
        let g = Matrix::from_columns(&self.generators);
        let lambda = nnls(&g, v);
        Ok(g * lambda)
    }

    /// Span of the generators at relative rank threshold `tol`.
    pub fn span(&self, tol: f64) -> Result<Subspace> {
        orthonormalize(self.ambient_dim, &self.generators, tol)
    }
}

/// Euclidean distance from `v` to the cone `k`; `|v|` for the zero cone.
pub fn cone_distance(v: &Point, k: &ConvexCone) -> Result<f64> {
    let p = k.project(v)?;
    Ok((v - p).norm())
}

/// Dimension of the span of the generators (numerical rank at `tol`).
pub fn cone_dimension(k: &ConvexCone, tol: f64) -> Result<usize> {
    Ok(k.span(tol)?.dim())
}

/// Whether the cone equals its linear span, up to `tol`.
///
/// A convex cone containing `−g` for each of its generators `g` contains the
/// span of the generators, so the test checks `dist(−g, K) ≤ tol` for every
/// generator. The zero cone is its own span.
pub fn contains_line(k: &ConvexCone, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("line tolerance must be positive, got {tol}")));
    }
    for g in &k.generators {
        if cone_distance(&(-g), k)? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lawson–Hanson non-negative least squares: `argmin ‖g λ − v‖` over `λ ≥ 0`.
///
/// At most `10 · ncols` outer iterations are performed.
pub fn nnls(g: &Matrix, v: &Point) -> DVector<f64> {
    let n = g.ncols();
    let mut x = DVector::zeros(n);
    if n == 0 {
        return x;
    }
    let scale = v.norm().max(1.0) * g.amax().max(1.0);
    let tol = NNLS_TOL * scale;
    let mut passive = vec![false; n];
    let max_iter = 10 * n;

    for _ in 0..max_iter {
        let residual = v - g * &x;
        let w = g.transpose() * residual;
        // Entering index: most positive gradient component among active constraints,
        // lowest index on ties.
        let mut enter = None;
        let mut best = tol;
        for j in 0..n {
            if !passive[j] && w[j] > best {
                best = w[j];
                enter = Some(j);
            }
        }
        let Some(j) = enter else { break };
        passive[j] = true;

        loop {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let z = solve_passive(g, v, &idx);
            if idx.iter().zip(z.iter()).all(|(_, &zi)| zi > tol) {
                for (&i, &zi) in idx.iter().zip(z.iter()) {
                    x[i] = zi;
                }
                break;
            }
            // Step back to the boundary of the feasible region.
            let mut alpha = f64::INFINITY;
            for (&i, &zi) in idx.iter().zip(z.iter()) {
                if zi <= tol {
                    let denom = x[i] - zi;
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    } else {
                        alpha = 0.0;
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (&i, &zi) in idx.iter().zip(z.iter()) {
                x[i] += alpha * (zi - x[i]);
            }
            let mut dropped = false;
            for &i in &idx {
                if x[i] <= tol {
                    x[i] = 0.0;
                    passive[i] = false;
                    dropped = true;
                }
            }
            if !dropped || passive.iter().all(|p| !p) {
                break;
            }
        }
    }
    x
}

/// Unconstrained least squares restricted to the columns `idx`.
fn solve_passive(g: &Matrix, v: &Point, idx: &[usize]) -> DVector<f64> {
    let cols: Vec<_> = idx.iter().map(|&i| g.column(i).into_owned()).collect();
    let sub = Matrix::from_columns(&cols);
    let svd = sub.svd(true, true);
    svd.solve(v, 1e-13).unwrap_or_else(|_| DVector::zeros(idx.len()))
}
