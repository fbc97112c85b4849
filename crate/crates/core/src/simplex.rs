//! Simplex volume, fullness `Θ(σ) = |σ| / (diam σ)^k` and the relatedness test.

use itertools::Itertools;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{Matrix, Point};

/// Default subset budget for the exhaustive relatedness search.
pub const DEFAULT_RELATED_BUDGET: u64 = 100_000;

/// Simplex `conv{a_0, …, a_k}` with `1 ≤ k ≤ d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument("a simplex needs at least two vertices".into()));
        }
        let d = vertices[0].len();
        for v in &vertices {
            if v.len() != d {
                return Err(dim_mismatch(d, v.len(), "vertex length"));
            }
        }
        if vertices.len() - 1 > d {
            return Err(Error::InvalidArgument(format!(
                "a {}-simplex does not fit in R^{d}",
                vertices.len() - 1
            )));
        }
        Ok(Simplex { vertices })
    }

    /// Simplex dimension k (number of vertices minus one).
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Largest pairwise vertex distance.
    pub fn diameter(&self) -> f64 {
        self.vertices
            .iter()
            .tuple_combinations()
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Smallest pairwise vertex distance.
    pub fn min_edge(&self) -> f64 {
        self.vertices
            .iter()
            .tuple_combinations()
            .map(|(a, b)| (a - b).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// k-dimensional volume `√det(GᵀG) / k!`, where G has columns `a_i − a_0`.
pub fn simplex_volume(s: &Simplex) -> f64 {
    let a0 = &s.vertices[0];
    let cols: Vec<Point> = s.vertices[1..].iter().map(|a| a - a0).collect();
    let g = Matrix::from_columns(&cols);
    let gram = g.transpose() * g;
    let det = gram.determinant();
    det.max(0.0).sqrt() / factorial(s.dim())
}

/// Fullness `Θ(σ) ∈ [0, 1/k!]`. Errors if all vertices coincide.
pub fn fullness(s: &Simplex) -> Result<f64> {
    // Powers of the squared diameter avoid a rounding step through the square root.
    let diam_sq = s
        .vertices
        .iter()
        .tuple_combinations()
        .map(|(a, b)| (a - b).norm_squared())
        .fold(0.0, f64::max);
    if !(diam_sq > 0.0) {
        return Err(Error::Degenerate("fullness needs diam σ > 0".into()));
    }
    let k = s.dim() as i32;
    let mut denom = diam_sq.powi(k / 2);
    if k % 2 == 1 {
        denom *= diam_sq.sqrt();
    }
    Ok(simplex_volume(s) / denom)
}

/// Outcome of [`related`].
#[derive(Debug, Clone, PartialEq)]
pub struct Relatedness {
    /// `true` is always sound; `false` is conclusive only for an exhaustive search
    /// over the supplied candidates.
    pub related: bool,
    /// Candidate indices `(z_1, …, z_{k−1})` of the witness simplex.
    pub witness: Option<Vec<usize>>,
    /// Fullness of the witness (or of the best simplex found when unrelated).
    pub fullness: f64,
    pub exhaustive: bool,
}

fn simplex_fullness(a: &Point, b: &Point, zs: &[&Point]) -> f64 {
    let mut verts = Vec::with_capacity(zs.len() + 2);
    verts.push(a.clone());
    verts.push(b.clone());
    verts.extend(zs.iter().map(|z| (*z).clone()));
    match Simplex::new(verts) {
        Ok(s) => fullness(&s).unwrap_or(0.0),
        Err(_) => 0.0,
    }
}

fn binomial_saturating(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Searches `candidates` for `z_1, …, z_{k−1}` with `Θ(σ(a, b, z_1, …, z_{k−1})) ≥ θ`.
///
/// Subsets are enumerated exhaustively in lexicographic order when their count is
/// at most `budget`; otherwise each `z_j` is chosen greedily to maximize the
/// fullness of the partial simplex (lowest index on ties).
pub fn related(
    a: &Point,
    b: &Point,
    candidates: &[Point],
    k: usize,
    theta: f64,
    budget: u64,
) -> Result<Relatedness> {
    if a.len() != b.len() {
        return Err(dim_mismatch(a.len(), b.len(), "point length"));
    }
    if (a - b).norm() == 0.0 {
        return Err(Error::InvalidArgument("related() requires a ≠ b".into()));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("related() requires k ≥ 2, got {k}")));
    }
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument(format!("θ must be positive, got {theta}")));
    }
    if k - 1 > candidates.len() {
        return Err(Error::InvalidArgument(format!(
            "k − 1 = {} exceeds the number of candidates ({})",
            k - 1,
            candidates.len()
        )));
    }
    for c in candidates {
        if c.len() != a.len() {
            return Err(dim_mismatch(a.len(), c.len(), "candidate length"));
        }
    }

    let count = binomial_saturating(candidates.len(), k - 1);
    if count <= budget {
        let mut best = 0.0f64;
        for subset in (0..candidates.len()).combinations(k - 1) {
            let zs: Vec<&Point> = subset.iter().map(|&i| &candidates[i]).collect();
            let f = simplex_fullness(a, b, &zs);
            if f >= theta {
                return Ok(Relatedness { related: true, witness: Some(subset), fullness: f, exhaustive: true });
            }
            best = best.max(f);
        }
        return Ok(Relatedness { related: false, witness: None, fullness: best, exhaustive: true });
    }

    let mut chosen: Vec<usize> = Vec::with_capacity(k - 1);
    let mut current = 0.0;
    for _ in 0..k - 1 {
        let mut pick = None;
        let mut pick_f = f64::NEG_INFINITY;
        for (i, _) in candidates.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let mut zs: Vec<&Point> = chosen.iter().map(|&j| &candidates[j]).collect();
            zs.push(&candidates[i]);
            let f = simplex_fullness(a, b, &zs);
            if f > pick_f {
                pick_f = f;
                pick = Some(i);
            }
        }
        chosen.push(pick.expect("enough candidates checked above"));
        current = pick_f;
    }
    let related = current >= theta;
    Ok(Relatedness {
        related,
        witness: related.then_some(chosen),
        fullness: current,
        exhaustive: false,
    })
}
