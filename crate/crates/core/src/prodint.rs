//! Purely atomic additive matrix-valued interval functions and their product
//! integrals `μ(s, t) = ∏_{(s,t]} (I + dα)`.
//!
//! Atoms are counted on half-open intervals `(s, t]`. Products are ordered with
//! the earlier atom as the left factor, so that `μ(s, u) = μ(s, t) · μ(t, u)`.

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{gj_norm, norm_equivalence_constant, operator_norm, Matrix, Subspace};

/// Relative slack allowed when checking `w ≥ ‖J‖_GJ`.
const WEIGHT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub t: f64,
    pub jump: Matrix,
    /// Domination weight, at least the GJ norm of the jump.
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicIntervalFunction {
    dim: usize,
    atoms: Vec<Atom>,
}

impl AtomicIntervalFunction {
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        for (k, a) in atoms.iter().enumerate() {
            if a.jump.nrows() != dim || a.jump.ncols() != dim {
                return Err(dim_mismatch(dim, a.jump.nrows().max(a.jump.ncols()), "jump size"));
            }
            if !a.t.is_finite() || a.jump.iter().any(|x| !x.is_finite()) || !a.w.is_finite() {
                return Err(Error::InvalidArgument(format!("atom {k} has non-finite data")));
            }
            let gj = gj_norm(&a.jump)?;
            if a.w < gj * (1.0 - WEIGHT_SLACK) {
                return Err(Error::InvalidArgument(format!(
                    "atom {k}: weight {} is below the GJ norm {gj} of its jump",
                    a.w
                )));
            }
        }
        if atoms.windows(2).any(|w| !(w[0].t < w[1].t)) {
            return Err(Error::InvalidArgument("atom locations must be strictly increasing".into()));
        }
        Ok(AtomicIntervalFunction { dim, atoms })
    }

    /// Atoms with weights `w_i = ‖J_i‖_GJ`.
    pub fn from_jumps(dim: usize, jumps: Vec<(f64, Matrix)>) -> Result<Self> {
        let atoms = jumps
            .into_iter()
            .map(|(t, jump)| Ok(Atom { t, w: gj_norm(&jump)?, jump }))
            .collect::<Result<Vec<_>>>()?;
        AtomicIntervalFunction::new(dim, atoms)
    }

    pub fn empty(dim: usize) -> Self {
        AtomicIntervalFunction { dim, atoms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Atoms with `s < t_i ≤ t`.
    pub fn atoms_in(&self, s: f64, t: f64) -> Result<&[Atom]> {
        check_interval(s, t)?;
        let lo = self.atoms.partition_point(|a| a.t <= s);
        let hi = self.atoms.partition_point(|a| a.t <= t);
        Ok(&self.atoms[lo..hi.max(lo)])
    }
}

fn check_interval(s: f64, t: f64) -> Result<()> {
    if !(s <= t) {
        return Err(Error::InvalidArgument(format!("interval needs s ≤ t, got s = {s}, t = {t}")));
    }
    Ok(())
}

/// `α(s, t)`: the sum of jumps in `(s, t]`.
pub fn alpha_eval(f: &AtomicIntervalFunction, s: f64, t: f64) -> Result<Matrix> {
    let mut acc = Matrix::zeros(f.dim, f.dim);
    for a in f.atoms_in(s, t)? {
        acc += &a.jump;
    }
    Ok(acc)
}

/// `(I + J_1)(I + J_2)⋯` over the atoms of `(s, t]` in increasing order.
pub fn product_integral_atomic(f: &AtomicIntervalFunction, s: f64, t: f64) -> Result<Matrix> {
    let id = Matrix::identity(f.dim, f.dim);
    let mut mu = id.clone();
    for a in f.atoms_in(s, t)? {
        mu = &mu * (&id + &a.jump);
    }
    Ok(mu)
}

/// `∏ (I + α(t_{i−1}, t_i))` over the uniform partition of `[s, t]` into
/// `⌈(t − s)/mesh⌉` cells. Equals the atomic product exactly once every cell
/// holds at most one atom.
pub fn product_integral_partition(f: &AtomicIntervalFunction, s: f64, t: f64, mesh: f64) -> Result<Matrix> {
    check_interval(s, t)?;
    if !(mesh > 0.0) {
        return Err(Error::InvalidArgument(format!("mesh must be positive, got {mesh}")));
    }
    let id = Matrix::identity(f.dim, f.dim);
    let mut mu = id.clone();
    if s == t {
        return Ok(mu);
    }
    let k = ((t - s) / mesh).ceil().max(1.0) as usize;
    let step = (t - s) / k as f64;
    let mut prev = s;
    for i in 1..=k {
        let next = if i == k { t } else { s + i as f64 * step };
        let cell = f.atoms_in(prev, next)?;
        if !cell.is_empty() {
            let mut alpha = Matrix::zeros(f.dim, f.dim);
            for a in cell {
                alpha += &a.jump;
            }
            mu = &mu * (&id + alpha);
        }
        prev = next;
    }
    Ok(mu)
}

/// `exp(α₀(s, t)) − 1` with `α₀(s, t) = Σ_{s < t_i ≤ t} w_i`.
pub fn domination_bound(f: &AtomicIntervalFunction, s: f64, t: f64) -> Result<f64> {
    let total: f64 = f.atoms_in(s, t)?.iter().map(|a| a.w).sum();
    Ok(total.exp_m1())
}

/// One leaf's contribution: the tangent planes at its two ends and its right
/// endpoint `b`.
#[derive(Debug, Clone)]
pub struct LeafPlanes {
    pub b: f64,
    pub plane_at_a: Subspace,
    pub plane_at_b: Subspace,
}

/// Atomic function with jump `π_{plane_at_a} − π_{plane_at_b}` at each `b` and
/// weight `√d · ‖jump‖`.
pub fn build_alpha_from_leaves(leaves: &[LeafPlanes]) -> Result<AtomicIntervalFunction> {
    let Some(first) = leaves.first() else {
        return Err(Error::InvalidArgument("no leaves given".into()));
    };
    let d = first.plane_at_a.ambient_dim();
    let kd = norm_equivalence_constant(d);
    let mut sorted: Vec<&LeafPlanes> = leaves.iter().collect();
    sorted.sort_by(|x, y| x.b.total_cmp(&y.b));
    let mut atoms = Vec::with_capacity(leaves.len());
    for (k, leaf) in sorted.iter().enumerate() {
        for p in [&leaf.plane_at_a, &leaf.plane_at_b] {
            if p.ambient_dim() != d {
                return Err(dim_mismatch(d, p.ambient_dim(), "plane ambient dimension"));
            }
            if p.dim() != 2 {
                return Err(Error::InvalidArgument(format!("leaf planes must be 2-dimensional, got {}", p.dim())));
            }
        }
        if k > 0 && sorted[k - 1].b == leaf.b {
            return Err(Error::InvalidArgument(format!("duplicate leaf endpoint b = {}", leaf.b)));
        }
        let jump = leaf.plane_at_a.projector() - leaf.plane_at_b.projector();
        let w = kd * operator_norm(&jump);
        atoms.push(Atom { t: leaf.b, jump, w });
    }
    AtomicIntervalFunction::new(d, atoms)
}

/// Whether `m e₁ = e₁` and `e₁ᵀ m = e₁ᵀ` within `tol`.
pub fn has_property_p(m: &Matrix, tol: f64) -> bool {
    let d = m.nrows();
    (0..d).all(|i| {
        let delta = if i == 0 { 1.0 } else { 0.0 };
        (m[(i, 0)] - delta).abs() <= tol && (m[(0, i)] - delta).abs() <= tol
    })
}
