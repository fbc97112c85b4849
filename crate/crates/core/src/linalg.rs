//! Linear subspaces of R^d, orthogonal projectors and the gap metric on the
//! Grassmannian G(d, k).
//!
//! The gap metric is evaluated as the operator norm of the difference of the
//! two orthogonal projectors, which coincides with the one-sided supremum
//! `sup_{u in U, |u| = 1} dist(u, V)` whenever both subspaces have the same
//! dimension.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{dim_mismatch, Error, Result};

/// A point (or free vector) of R^d.
pub type Point = DVector<f64>;

/// A dense real matrix; used for projectors, jumps and product integrals.
pub type Matrix = DMatrix<f64>;

/// Tolerance used when checking that a basis is orthonormal.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Default relative threshold for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// A k-dimensional linear subspace of R^d stored as a d×k matrix with
/// orthonormal columns. `k = 0` and `k = d` are legal.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// The zero subspace of R^d.
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { basis: Matrix::zeros(ambient_dim, 0) }
    }

    /// R^d itself, with the standard basis.
    pub fn full(ambient_dim: usize) -> Self {
        Subspace { basis: Matrix::identity(ambient_dim, ambient_dim) }
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: Matrix) -> Result<Self> {
        let k = basis.ncols();
        let gram = basis.transpose() * &basis;
        let err = (gram - Matrix::identity(k, k)).amax();
        if err > ORTHONORMAL_TOL || basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "basis columns are not orthonormal (max deviation {err:e})"
            )));
        }
        Ok(Subspace { basis })
    }

    /// Span of the given vectors; see [`orthonormalize`].
    pub fn span(ambient_dim: usize, vectors: &[Point]) -> Result<Self> {
        orthonormalize(ambient_dim, vectors, RANK_TOL)
    }

    /// Span of the coordinate axes with the given (0-based) indices.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Result<Self> {
        let mut basis = Matrix::zeros(ambient_dim, axes.len());
        for (col, &axis) in axes.iter().enumerate() {
            if axis >= ambient_dim {
                return Err(Error::InvalidArgument(format!(
                    "axis {axis} out of range for R^{ambient_dim}"
                )));
            }
            basis[(axis, col)] = 1.0;
        }
        Subspace::from_orthonormal(basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Basis vectors as owned points.
    pub fn basis_vectors(&self) -> Vec<Point> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// The orthogonal projector `B Bᵀ`.
    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.transpose()
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &Point) -> Point {
        &self.basis * (self.basis.transpose() * v)
    }

    /// Distance from `v` to the subspace.
    pub fn distance(&self, v: &Point) -> f64 {
        (v - self.project(v)).norm()
    }

    /// The orthogonal complement, of dimension d − k.
    pub fn complement(&self) -> Subspace {
        let d = self.ambient_dim();
        let k = self.dim();
        if k == 0 {
            return Subspace::full(d);
        }
        if k == d {
            return Subspace::zero(d);
        }
        let residual = Matrix::identity(d, d) - self.projector();
        let eig = SymmetricEigen::new(residual);
        // Eigenvalues of I - P are 0 (multiplicity k) and 1 (multiplicity d - k).
        let mut cols: Vec<(f64, usize)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i))
            .collect();
        cols.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut basis = Matrix::zeros(d, d - k);
        for (j, &(_, i)) in cols.iter().take(d - k).enumerate() {
            basis.set_column(j, &eig.eigenvectors.column(i));
        }
        Subspace { basis: gram_schmidt(basis) }
    }
}

/// Re-orthonormalizes columns that are already orthonormal up to rounding.
fn gram_schmidt(mut m: Matrix) -> Matrix {
    for j in 0..m.ncols() {
        for i in 0..j {
            let proj = m.column(i).dot(&m.column(j));
            let ci = m.column(i).into_owned();
            m.column_mut(j).axpy(-proj, &ci, 1.0);
        }
        let n = m.column(j).norm();
        m.column_mut(j).unscale_mut(n);
    }
    m
}

/// Returns the span of `vectors` with an orthonormal basis.
///
/// The dimension is the numerical rank: left singular vectors whose singular
/// value exceeds `tol · σ_max` are kept, in decreasing order of singular value.
pub fn orthonormalize(ambient_dim: usize, vectors: &[Point], tol: f64) -> Result<Subspace> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("rank tolerance must be positive, got {tol}")));
    }
    for v in vectors {
        if v.len() != ambient_dim {
            return Err(dim_mismatch(ambient_dim, v.len(), "vector length"));
        }
    }
    if vectors.is_empty() || ambient_dim == 0 {
        return Ok(Subspace::zero(ambient_dim));
    }
    let m = Matrix::from_columns(vectors);
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma = &svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 || !smax.is_finite() {
        return Ok(Subspace::zero(ambient_dim));
    }
    let mut kept: Vec<(f64, usize)> = sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol * smax)
        .map(|(i, &s)| (s, i))
        .collect();
    kept.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut basis = Matrix::zeros(ambient_dim, kept.len());
    for (j, &(_, i)) in kept.iter().enumerate() {
        basis.set_column(j, &u.column(i));
    }
    Ok(Subspace { basis: gram_schmidt(basis) })
}

/// Span of the `k` leading left singular vectors of the matrix with columns
/// `vectors` (ties broken by index).
pub fn principal_subspace(ambient_dim: usize, vectors: &[Point], k: usize) -> Result<Subspace> {
    for v in vectors {
        if v.len() != ambient_dim {
            return Err(dim_mismatch(ambient_dim, v.len(), "vector length"));
        }
    }
    if k > ambient_dim || k > vectors.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot take {k} principal directions of {} vectors in R^{ambient_dim}",
            vectors.len()
        )));
    }
    if k == 0 {
        return Ok(Subspace::zero(ambient_dim));
    }
    let svd = Matrix::from_columns(vectors).svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<(f64, usize)> = svd.singular_values.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut basis = Matrix::zeros(ambient_dim, k);
    for (j, &(_, i)) in order.iter().take(k).enumerate() {
        basis.set_column(j, &u.column(i));
    }
    Ok(Subspace { basis: gram_schmidt(basis) })
}

/// Number of singular values above `tol · σ_max`; zero for an empty or zero
/// family.
pub fn numerical_rank(vectors: &[Point], tol: f64) -> usize {
    if vectors.is_empty() || vectors[0].is_empty() {
        return 0;
    }
    let sigma = Matrix::from_columns(vectors).singular_values();
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 || !smax.is_finite() {
        return 0;
    }
    sigma.iter().filter(|&&s| s > tol * smax).count()
}

/// Euclidean distance without allocating a difference vector.
#[inline]
pub fn distance(a: &Point, b: &Point) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Largest singular value. Zero for empty matrices.
pub fn operator_norm(m: &Matrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Gap distance ρ_k(U, V) = ‖π_U − π_V‖ on G(d, k).
pub fn gap_distance(u: &Subspace, v: &Subspace) -> Result<f64> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(dim_mismatch(u.ambient_dim(), v.ambient_dim(), "ambient dimension"));
    }
    if u.dim() != v.dim() {
        return Err(dim_mismatch(u.dim(), v.dim(), "subspace dimension (gap is defined within one G(d,k))"));
    }
    let diff = u.projector() - v.projector();
    Ok(operator_norm(&diff).min(1.0))
}

/// Maximum absolute row sum, `max_i Σ_j |a_ij|`.
pub fn gj_norm(m: &Matrix) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument(format!(
            "GJ norm requires a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max))
}

/// Equivalence constant between the operator norm and the GJ norm on d×d
/// matrices: `‖M‖_GJ / k_d ≤ ‖M‖ ≤ k_d ‖M‖_GJ` with `k_d = √d`.
pub fn norm_equivalence_constant(d: usize) -> f64 {
    (d.max(1) as f64).sqrt()
}
