//! Reach estimators for sampled sets and the pointwise inequality checks they
//! rest on.
//!
//! * `federer`: `|b − a|² / (2 dist(b − a, Tan(A, a)))` minimized over pairs.
//! * `midpoint`: inverts `m = r − √(r² − e²/4)` for the distance `m` of a chord
//!   midpoint from the set.
//! * `projection`: the smallest offset at which a probe point sees two
//!   well-separated nearest points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloud::{bounding_box, median_spacing, GridIndex, PointCloud};
use crate::cone::{cone_distance, contains_line, ConvexCone};
use crate::error::{Error, Result};
use crate::halton::{halton, MAX_DIM};
use crate::linalg::{distance, Point, Subspace};
use crate::tangent::estimate_all;

/// Clouds up to this size are scanned over all pairs.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 4096;
/// Number of random pairs drawn for larger clouds.
pub const PAIR_SUBSAMPLE: usize = 1 << 21;
/// Seed of the pair subsample.
pub const PAIR_SEED: u64 = 0;
/// `dist(b − a, Tan) ≤ DELTA_ZERO · |b − a|` counts as zero.
pub const DELTA_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReachMethod {
    Federer,
    Midpoint,
    Projection,
}

impl ReachMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReachMethod::Federer => "federer",
            ReachMethod::Midpoint => "midpoint",
            ReachMethod::Projection => "projection",
        }
    }
}

impl std::str::FromStr for ReachMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "federer" => Ok(ReachMethod::Federer),
            "midpoint" => Ok(ReachMethod::Midpoint),
            "projection" => Ok(ReachMethod::Projection),
            other => Err(Error::InvalidArgument(format!("unknown reach method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReachEstimate {
    /// In `(0, ∞]`.
    pub value: f64,
    pub method: ReachMethod,
    /// Pair attaining the infimum; `None` iff `value` is infinite.
    pub witness: Option<(usize, usize)>,
    pub pairs_used: u64,
    /// The pair filter actually applied (`h_min` for pairwise methods, the
    /// probe exclusion radius for `projection`).
    pub min_pair_distance: f64,
    /// Set for clouds with fewer than two points.
    pub degenerate: bool,
}

impl ReachEstimate {
    fn infinite(method: ReachMethod, pairs_used: u64, min_pair_distance: f64, degenerate: bool) -> Self {
        ReachEstimate { value: f64::INFINITY, method, witness: None, pairs_used, min_pair_distance, degenerate }
    }

    fn from_best(method: ReachMethod, best: Option<Candidate>, pairs_used: u64, min_pair_distance: f64) -> Self {
        match best {
            Some(c) if c.value.is_finite() => ReachEstimate {
                value: c.value,
                method,
                witness: Some((c.i, c.j)),
                pairs_used,
                min_pair_distance,
                degenerate: false,
            },
            _ => ReachEstimate::infinite(method, pairs_used, min_pair_distance, false),
        }
    }
}

/// A pair bound; ordered by value, then lexicographically by pair.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    i: usize,
    j: usize,
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            let ord = x.value.total_cmp(&y.value).then(x.i.cmp(&y.i)).then(x.j.cmp(&y.j));
            Some(if ord.is_le() { x } else { y })
        }
    }
}

fn check_h_min(h_min: f64) -> Result<()> {
    if !(h_min > 0.0) {
        return Err(Error::InvalidArgument(format!("h_min must be positive, got {h_min}")));
    }
    Ok(())
}

/// Pairs for clouds above [`EXHAUSTIVE_PAIR_LIMIT`]: a fixed-seed sample of
/// distinct index pairs, sorted and deduplicated.
fn sampled_pairs(n: usize, ordered: bool) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SEED);
    let mut pairs = Vec::with_capacity(PAIR_SUBSAMPLE);
    while pairs.len() < PAIR_SUBSAMPLE {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        pairs.push(if ordered || i < j { (i, j) } else { (j, i) });
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Evaluates `bound(i, j)` over all admissible pairs and returns the best
/// candidate and the number of pairs evaluated.
fn pair_infimum<F>(n: usize, ordered: bool, bound: F) -> (Option<Candidate>, u64)
where
    F: Fn(usize, usize) -> Option<f64> + Sync,
{
    let eval = |i: usize, j: usize| -> (Option<Candidate>, u64) {
        match bound(i, j) {
            Some(v) => (Some(Candidate { value: v, i, j }), 1),
            None => (None, 0),
        }
    };
    let merge = |a: (Option<Candidate>, u64), b: (Option<Candidate>, u64)| (better(a.0, b.0), a.1 + b.1);
    if n <= EXHAUSTIVE_PAIR_LIMIT {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let start = if ordered { 0 } else { i + 1 };
                (start..n).filter(|&j| j != i).map(|j| eval(i, j)).fold((None, 0), merge)
            })
            .reduce(|| (None, 0), merge)
    } else {
        sampled_pairs(n, ordered).into_par_iter().map(|(i, j)| eval(i, j)).reduce(|| (None, 0), merge)
    }
}

/// Per-point tangent model used by the Federer criterion. Cones that equal a
/// subspace are projected onto directly.
enum TangentModel {
    Subspace(Subspace),
    Cone(ConvexCone),
}

impl TangentModel {
    fn of(cone: &ConvexCone) -> Result<Self> {
        if contains_line(cone, 1e-9)? {
            Ok(TangentModel::Subspace(cone.span(1e-10)?))
        } else {
            Ok(TangentModel::Cone(cone.clone()))
        }
    }

    fn distance(&self, v: &Point) -> Result<f64> {
        match self {
            TangentModel::Subspace(s) => Ok(s.distance(v)),
            TangentModel::Cone(k) => cone_distance(v, k),
        }
    }
}

/// Federer pair bound `|b − a|² / (2δ)` with `δ = dist(b − a, Tan(A, a))`;
/// `None` (no bound) when `δ` is numerically zero.
pub fn federer_pair_bound(chord: &Point, delta: f64) -> Option<f64> {
    let e = chord.norm();
    if delta <= DELTA_ZERO * e {
        None
    } else {
        Some(e * e / (2.0 * delta))
    }
}

/// Federer criterion with tangent cones estimated at scale `h`.
pub fn federer_reach(cloud: &PointCloud, h: f64, tau_rank: f64, h_min: f64) -> Result<ReachEstimate> {
    check_h_min(h_min)?;
    if cloud.len() < 2 {
        return Ok(ReachEstimate::infinite(ReachMethod::Federer, 0, h_min, true));
    }
    let cones: Vec<ConvexCone> = estimate_all(cloud, h, tau_rank)?.into_iter().map(|e| e.cone).collect();
    federer_reach_with_cones(cloud, &cones, h_min)
}

/// Federer criterion with caller-supplied tangent cones (one per point), e.g.
/// analytic tangents of a fixture.
pub fn federer_reach_with_cones(cloud: &PointCloud, cones: &[ConvexCone], h_min: f64) -> Result<ReachEstimate> {
    check_h_min(h_min)?;
    if cones.len() != cloud.len() {
        return Err(crate::error::dim_mismatch(cloud.len(), cones.len(), "number of tangent cones"));
    }
    if cloud.len() < 2 {
        return Ok(ReachEstimate::infinite(ReachMethod::Federer, 0, h_min, true));
    }
    for k in cones {
        if k.ambient_dim() != cloud.dim() {
            return Err(crate::error::dim_mismatch(cloud.dim(), k.ambient_dim(), "tangent cone dimension"));
        }
    }
    let models: Vec<TangentModel> = cones.par_iter().map(TangentModel::of).collect::<Result<_>>()?;
    let pts = cloud.points();
    let (best, used) = pair_infimum(cloud.len(), true, |i, j| {
        if distance(&pts[j], &pts[i]) < h_min {
            return None;
        }
        let chord = &pts[j] - &pts[i];
        let delta = models[i].distance(&chord).expect("dimensions checked");
        // Evaluated pairs without a bound still count as used.
        Some(federer_pair_bound(&chord, delta).unwrap_or(f64::INFINITY))
    });
    Ok(ReachEstimate::from_best(ReachMethod::Federer, best, used, h_min))
}

/// Radius `r` with `d(e, r) = m`: `(m² + e²/4) / (2m)`.
pub fn midpoint_pair_bound(e: f64, m: f64) -> f64 {
    (m * m + 0.25 * e * e) / (2.0 * m)
}

pub fn default_eps_zero(cloud: &PointCloud) -> f64 {
    0.5 * (cloud.dim() as f64).sqrt() * median_spacing(cloud)
}

/// Midpoint criterion with `ε_zero = ½√d ×` median spacing, the covering radius
/// of a cubic lattice of that spacing in `R^d`.
pub fn midpoint_reach(cloud: &PointCloud, h_min: f64) -> Result<ReachEstimate> {
    midpoint_reach_eps(cloud, h_min, default_eps_zero(cloud))
}

/// Midpoint criterion. A pair imposes no bound when a cloud point other than
/// the pair itself lies within `eps_zero` of its midpoint; otherwise the bound
/// uses the distance `m` from the midpoint to the whole cloud.
pub fn midpoint_reach_eps(cloud: &PointCloud, h_min: f64, eps_zero: f64) -> Result<ReachEstimate> {
    check_h_min(h_min)?;
    if !(eps_zero >= 0.0) {
        return Err(Error::InvalidArgument(format!("ε_zero must be non-negative, got {eps_zero}")));
    }
    let n = cloud.len();
    if n < 2 {
        return Ok(ReachEstimate::infinite(ReachMethod::Midpoint, 0, h_min, true));
    }
    let cell = index_cell(cloud);
    let index = GridIndex::new(cloud, cell);
    let pts = cloud.points();
    let (best, used) = pair_infimum(n, false, |i, j| {
        let e = distance(&pts[j], &pts[i]);
        if e < h_min {
            return None;
        }
        let mid = (&pts[i] + &pts[j]) * 0.5;
        let covered = index.any_within(&mid, eps_zero * (1.0 + 1e-9), |k| k != i && k != j);
        if covered {
            return Some(f64::INFINITY);
        }
        let m = index.nearest(&mid, 1)[0].0;
        if m == 0.0 {
            return Some(f64::INFINITY);
        }
        Some(midpoint_pair_bound(e, m))
    });
    Ok(ReachEstimate::from_best(ReachMethod::Midpoint, best, used, h_min))
}

fn index_cell(cloud: &PointCloud) -> f64 {
    let s = median_spacing(cloud);
    if s > 0.0 {
        2.0 * s
    } else {
        1.0
    }
}

/// Parameters of [`projection_uniqueness_reach`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionParams {
    pub probe_count: usize,
    /// Increasing positive radii.
    pub r_grid: Vec<f64>,
    /// Two nearest points tie when their distances differ by at most
    /// `amb_tol ×` median spacing.
    pub amb_tol: f64,
    /// Probes closer than `min_probe_factor ×` median spacing to the cloud are
    /// skipped; ties there are sampling artifacts rather than geometry.
    pub min_probe_factor: f64,
    /// Probes are Halton points `seed + 1, …, seed + probe_count`.
    pub seed: u64,
}

impl ProjectionParams {
    pub fn new(probe_count: usize, r_grid: Vec<f64>) -> Self {
        ProjectionParams { probe_count, r_grid, amb_tol: 0.5, min_probe_factor: 1.0, seed: 0 }
    }
}

/// Uniform grid `step, 2·step, …` up to and including `max` (within rounding).
pub fn uniform_grid(step: f64, max: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(max >= step) {
        return Err(Error::InvalidArgument(format!("invalid grid: step {step}, max {max}")));
    }
    let count = (max / step + 1e-9).floor() as usize;
    Ok((1..=count).map(|i| i as f64 * step).collect())
}

/// Projection-uniqueness reach: the largest grid radius `r` such that no probe
/// at distance below `r` from the cloud has an ambiguous nearest point.
///
/// Probes are Halton points in the bounding box enlarged by `max(r_grid)`. A
/// probe `p` with nearest point `s₁` at distance `d₁` is ambiguous when some
/// `s₂` has `|p − s₂| ≤ d₁ + amb_tol · spacing` and `∠(s₁ − p, s₂ − p) ≥ π/2`.
/// If even the smallest grid radius is ambiguous the smallest ambiguous `d₁` is
/// returned instead.
pub fn projection_uniqueness_reach(cloud: &PointCloud, params: &ProjectionParams) -> Result<ReachEstimate> {
    let grid = &params.r_grid;
    if grid.is_empty() {
        return Err(Error::InvalidArgument("r_grid is empty".into()));
    }
    if grid.iter().any(|r| !(*r > 0.0)) || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("r_grid must be increasing and positive".into()));
    }
    if params.probe_count == 0 {
        return Err(Error::InvalidArgument("probe_count must be positive".into()));
    }
    if !(params.amb_tol >= 0.0) || !(params.min_probe_factor >= 0.0) {
        return Err(Error::InvalidArgument("tolerances must be non-negative".into()));
    }
    let d = cloud.dim();
    if d > MAX_DIM {
        return Err(Error::InvalidArgument(format!("projection probes support at most {MAX_DIM} dimensions")));
    }
    let spacing = median_spacing(cloud);
    let min_probe = params.min_probe_factor * spacing;
    if cloud.len() < 2 {
        return Ok(ReachEstimate::infinite(ReachMethod::Projection, 0, min_probe, cloud.len() < 2));
    }
    let r_max = *grid.last().expect("nonempty");
    let (lo, hi) = bounding_box(cloud);
    let lo = lo.add_scalar(-r_max);
    let hi = hi.add_scalar(r_max);
    let index = GridIndex::new(cloud, index_cell(cloud));
    let tol = params.amb_tol * spacing;

    let (best, used) = (params.seed + 1..=params.seed + params.probe_count as u64)
        .into_par_iter()
        .map(|k| {
            let u = halton(k, d);
            let p = Point::from_fn(d, |j, _| lo[j] + u[j] * (hi[j] - lo[j]));
            let nearest = index.nearest(&p, 1);
            let (d1, s1) = nearest[0];
            if d1 >= r_max || d1 < min_probe || d1 == 0.0 {
                return (None, 0u64);
            }
            let to1 = &cloud.points()[s1] - &p;
            let mut tie: Option<usize> = None;
            for s2 in index.neighbors(&p, d1 + tol) {
                if s2 == s1 {
                    continue;
                }
                let to2 = &cloud.points()[s2] - &p;
                if to1.dot(&to2) <= 0.0 {
                    tie = Some(s2);
                    break;
                }
            }
            match tie {
                Some(s2) => (Some(Candidate { value: d1, i: s1.min(s2), j: s1.max(s2) }), 1),
                None => (None, 1),
            }
        })
        .reduce(|| (None, 0), |a, b| (better(a.0, b.0), a.1 + b.1));

    let Some(c) = best else {
        return Ok(ReachEstimate::infinite(ReachMethod::Projection, used, min_probe, false));
    };
    let value = grid.iter().copied().rfind(|&r| r <= c.value).unwrap_or(c.value);
    Ok(ReachEstimate {
        value,
        method: ReachMethod::Projection,
        witness: Some((c.i, c.j)),
        pairs_used: used,
        min_pair_distance: min_probe,
        degenerate: false,
    })
}

/// Sagitta `d(p, q, r) = r − √(r² − e²/4)` of a chord of length `e` on a circle
/// of radius `r`; lies in `[e²/(8r), e²/(4r)]`.
pub fn d_of_pair(e: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !(e >= 0.0) {
        return Err(Error::InvalidArgument(format!("need e ≥ 0 and r > 0, got e = {e}, r = {r}")));
    }
    if e >= 2.0 * r {
        return Err(Error::InvalidArgument(format!("need e < 2r, got e = {e}, r = {r}")));
    }
    // e²/4 / (r + √(r² − e²/4)) avoids cancellation for short chords.
    let q = 0.25 * e * e;
    Ok(q / (r + (r * r - q).sqrt()))
}

/// Result of [`angle_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleCheck {
    pub satisfied: bool,
    /// Angle between `b − a` and its projection onto `K` (`π/2` when the
    /// projection vanishes).
    pub angle: f64,
    /// `π/6 · |b − a| / r`.
    pub bound: f64,
}

/// Checks `∠(b − a, v) < π/6 · |b − a| / r` for the best direction `v ∈ K`.
pub fn angle_bound_check(a: &Point, b: &Point, k: &ConvexCone, r: f64) -> Result<AngleCheck> {
    if a.len() != b.len() {
        return Err(crate::error::dim_mismatch(a.len(), b.len(), "point length"));
    }
    let v = b - a;
    let e = v.norm();
    if e == 0.0 {
        return Err(Error::InvalidArgument("angle check needs a ≠ b".into()));
    }
    if !(e < r) {
        return Err(Error::InvalidArgument(format!("angle check needs |b − a| < r, got {e} ≥ {r}")));
    }
    let p = k.project(&v)?;
    let pn = p.norm();
    let angle = if pn <= 1e-15 * e {
        std::f64::consts::FRAC_PI_2
    } else {
        (v.dot(&p) / (e * pn)).clamp(-1.0, 1.0).acos()
    };
    let bound = std::f64::consts::FRAC_PI_6 * e / r;
    Ok(AngleCheck { satisfied: angle < bound, angle, bound })
}
