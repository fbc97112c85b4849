//! Tangent-cone estimation from secant directions, the tangent field ψ_k and
//! the T_k / T_k^± stratification of a sampled set.
//!
//! At a point `a` the estimator takes the neighbors within distance `h`. The
//! dimension `k` is the numerical rank, at relative threshold `τ_rank`, of the
//! neighbor offsets `p − a` (together with `a` itself) centered at their mean.
//! The span is the `k` leading principal directions of the unit secants
//! `(p − a)/|p − a|` weighted by `1/max(|p − a|, h/4)`, and the cone is the
//! conical hull of the unit secants projected onto that span. The weights favor
//! short secants, whose curvature tilt is smallest; the floor keeps near
//! coincident samples across thin parts of a set from dominating. Projection removes the curvature tilt of
//! secants, of order `h / reach`; centering keeps narrow wedges at corners
//! two-dimensional, since their spread does not shrink with `h`.

use rayon::prelude::*;

use crate::cloud::{neighbors, GridIndex, PointCloud, StratumLabel};
use crate::cone::{contains_line, ConvexCone};
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{numerical_rank, principal_subspace, Point, Subspace};

/// Default relative singular-value threshold for the secant span.
pub const DEFAULT_TAU_RANK: f64 = 0.25;
/// Default tolerance of the full-span (line containment) test.
pub const DEFAULT_TAU_LINE: f64 = 0.2;
/// Secants shorter than this fraction of `h` get the same span weight.
pub const WEIGHT_FLOOR: f64 = 0.25;
/// Secant directions closer than this are merged.
pub const DEDUP_TOL: f64 = 1e-6;
/// Tolerance for membership of an axis coordinate in a T_1 set or slab.
pub const AXIS_TOL: f64 = 1e-9;

/// Scale and thresholds of the single-scale tangent estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentParams {
    pub h: f64,
    pub tau_rank: f64,
    pub tau_line: f64,
}

impl TangentParams {
    pub fn new(h: f64) -> Self {
        TangentParams { h, tau_rank: DEFAULT_TAU_RANK, tau_line: DEFAULT_TAU_LINE }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0) {
            return Err(Error::InvalidArgument(format!("h must be positive, got {}", self.h)));
        }
        if !(self.tau_rank > 0.0 && self.tau_rank < 1.0) {
            return Err(Error::InvalidArgument(format!("τ_rank must lie in (0,1), got {}", self.tau_rank)));
        }
        if !(self.tau_line > 0.0) {
            return Err(Error::InvalidArgument(format!("τ_line must be positive, got {}", self.tau_line)));
        }
        Ok(())
    }
}

/// Tangent cone estimate together with its span ψ.
#[derive(Debug, Clone)]
pub struct TangentEstimate {
    pub cone: ConvexCone,
    pub span: Subspace,
}

fn push_unique(dirs: &mut Vec<Point>, u: Point) {
    if !dirs.iter().any(|v| (v - &u).norm() < DEDUP_TOL) {
        dirs.push(u);
    }
}

fn check_tau_rank(tau_rank: f64) -> Result<()> {
    if !(tau_rank > 0.0 && tau_rank < 1.0) {
        return Err(Error::InvalidArgument(format!("τ_rank must lie in (0,1), got {tau_rank}")));
    }
    Ok(())
}

/// Estimates the tangent cone and its span at `a`.
pub fn estimate_tangent(cloud: &PointCloud, a: &Point, h: f64, tau_rank: f64) -> Result<TangentEstimate> {
    check_tau_rank(tau_rank)?;
    let nb = neighbors(cloud, a, h)?;
    from_neighbors(cloud, a, &nb, h, tau_rank)
}

fn from_neighbors(cloud: &PointCloud, a: &Point, nb: &[usize], h: f64, tau_rank: f64) -> Result<TangentEstimate> {
    let d = cloud.dim();
    let weight_floor = WEIGHT_FLOOR * h;
    let mut secants = Vec::with_capacity(nb.len());
    let mut weighted = Vec::with_capacity(nb.len());
    let mut offsets = Vec::with_capacity(nb.len() + 1);
    offsets.push(Point::zeros(d));
    for &i in nb {
        let s = cloud.point(i) - a;
        let n = s.norm();
        offsets.push(s.clone());
        weighted.push(&s / (n * n.max(weight_floor)));
        push_unique(&mut secants, s / n);
    }
    let mean = offsets.iter().fold(Point::zeros(d), |acc, o| acc + o) / offsets.len() as f64;
    let centered: Vec<Point> = offsets.iter().map(|o| o - &mean).collect();
    let k = numerical_rank(&centered, tau_rank).min(secants.len());
    let span = principal_subspace(d, &weighted, k)?;
    let mut generators = Vec::with_capacity(secants.len());
    for s in &secants {
        let p = span.project(s);
        let n = p.norm();
        if n > 1e-12 {
            push_unique(&mut generators, p / n);
        }
    }
    let cone = ConvexCone::new(d, generators)?;
    Ok(TangentEstimate { cone, span })
}

/// Conical hull of the (span-projected) unit secants at `a`; the zero cone when
/// no point lies within `h`.
pub fn estimate_tangent_cone(cloud: &PointCloud, a: &Point, h: f64, tau_rank: f64) -> Result<ConvexCone> {
    Ok(estimate_tangent(cloud, a, h, tau_rank)?.cone)
}

/// ψ_k(a): the span of the estimated tangent cone.
pub fn psi_k(cloud: &PointCloud, a: &Point, h: f64, tau_rank: f64) -> Result<Subspace> {
    Ok(estimate_tangent(cloud, a, h, tau_rank)?.span)
}

/// Tangent estimates at every cloud point, in cloud order.
pub fn estimate_all(cloud: &PointCloud, h: f64, tau_rank: f64) -> Result<Vec<TangentEstimate>> {
    let all: Vec<usize> = (0..cloud.len()).collect();
    estimate_at(cloud, &all, h, tau_rank)
}

/// Tangent estimates at the cloud points `indices`, sharing one neighbor index.
pub fn estimate_at(cloud: &PointCloud, indices: &[usize], h: f64, tau_rank: f64) -> Result<Vec<TangentEstimate>> {
    check_tau_rank(tau_rank)?;
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("neighborhood radius must be positive, got {h}")));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= cloud.len()) {
        return Err(Error::InvalidArgument(format!("point index {bad} out of range")));
    }
    let index = GridIndex::new(cloud, h);
    indices
        .par_iter()
        .map(|&i| {
            let a = cloud.point(i);
            from_neighbors(cloud, a, &index.neighbors(a, h), h, tau_rank)
        })
        .collect()
}

/// Labels derived from tangent estimates.
pub fn label_of(est: &TangentEstimate, tau_line: f64) -> Result<StratumLabel> {
    Ok(StratumLabel::new(est.span.dim(), contains_line(&est.cone, tau_line)?))
}

/// Result of [`stratify_with_dim`].
#[derive(Debug, Clone)]
pub struct Stratification {
    pub cloud: PointCloud,
    /// Points whose estimated tangent dimension exceeds the declared dimension of
    /// the set (a sampling artifact for genuine positive-reach sets).
    pub over_dimension: Vec<usize>,
}

/// Labels every point with `(k, full_span)`.
pub fn stratify(cloud: &PointCloud, params: &TangentParams) -> Result<PointCloud> {
    Ok(stratify_with_dim(cloud, params, None)?.cloud)
}

/// [`stratify`], flagging points with `k > declared_dim`.
pub fn stratify_with_dim(
    cloud: &PointCloud,
    params: &TangentParams,
    declared_dim: Option<usize>,
) -> Result<Stratification> {
    params.validate()?;
    let labels: Vec<StratumLabel> = estimate_all(cloud, params.h, params.tau_rank)?
        .iter()
        .map(|e| label_of(e, params.tau_line))
        .collect::<Result<_>>()?;
    let over_dimension = match declared_dim {
        Some(m) => labels.iter().enumerate().filter(|(_, l)| l.k > m).map(|(i, _)| i).collect(),
        None => Vec::new(),
    };
    Ok(Stratification { cloud: cloud.clone().with_labels(labels)?, over_dimension })
}

/// A leaf: cloud points whose axis coordinate lies in one open component λ of
/// `R ∖ T_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    /// The component λ (endpoints may be infinite).
    pub component: (f64, f64),
    /// λ ∩ [p, q].
    pub interval: (f64, f64),
    pub indices: Vec<usize>,
}

/// Partitions the points off the T_1 set into leaves by the component of
/// `R ∖ t1_set` containing their first coordinate.
pub fn leaves(cloud: &PointCloud, t1_set: &[f64], p: f64, q: f64) -> Result<Vec<Leaf>> {
    if t1_set.is_empty() {
        return Err(Error::InvalidArgument("T_1 set must be nonempty".into()));
    }
    if !(p <= q) {
        return Err(Error::InvalidArgument(format!("segment [{p}, {q}] is empty")));
    }
    if t1_set.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("T_1 set must be strictly increasing".into()));
    }
    if t1_set.iter().any(|&t| t < p - AXIS_TOL || t > q + AXIS_TOL) {
        return Err(Error::SkeweredViolation("T_1 set leaves the segment [p, q]".into()));
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); t1_set.len() + 1];
    for (i, x) in cloud.points().iter().enumerate() {
        if x.is_empty() {
            return Err(dim_mismatch(1, 0, "point length"));
        }
        let t = x[0];
        if t < p - AXIS_TOL || t > q + AXIS_TOL {
            return Err(Error::SkeweredViolation(format!(
                "point {i} projects to {t}, outside [{p}, {q}]"
            )));
        }
        // Index of the first T_1 value strictly above t (up to tolerance).
        let pos = t1_set.partition_point(|&c| c < t - AXIS_TOL);
        if pos < t1_set.len() && (t1_set[pos] - t).abs() <= AXIS_TOL {
            continue;
        }
        buckets[pos].push(i);
    }
    let mut out = Vec::new();
    for (c, indices) in buckets.into_iter().enumerate() {
        if indices.is_empty() {
            continue;
        }
        let lo = if c == 0 { f64::NEG_INFINITY } else { t1_set[c - 1] };
        let hi = if c == t1_set.len() { f64::INFINITY } else { t1_set[c] };
        out.push(Leaf { component: (lo, hi), interval: (lo.max(p), hi.min(q)), indices });
    }
    Ok(out)
}
