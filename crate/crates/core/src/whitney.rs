//! First-order Whitney conditions on finite sets: the least `c` with
//! `‖φ(y) − φ(x)‖ ≤ c|y − x|` and `|f(y) − f(x) − φ(x)(y − x)| ≤ c|y − x|²`
//! for all `x, y` in the domain.

use rayon::prelude::*;

use crate::cloud::PointCloud;
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{operator_norm, Matrix, Point, Subspace};
use crate::tangent::estimate_at;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhitneyResult {
    /// `max(c1, c2)`.
    pub c: f64,
    /// Least constant of the derivative condition.
    pub c1: f64,
    /// Least constant of the Taylor condition.
    pub c2: f64,
    pub argmax1: Option<(usize, usize)>,
    pub argmax2: Option<(usize, usize)>,
}

fn max_pair(a: (f64, Option<(usize, usize)>), b: (f64, Option<(usize, usize)>)) -> (f64, Option<(usize, usize)>) {
    match (a.1, b.1) {
        (_, None) => a,
        (None, _) => b,
        (Some(pa), Some(pb)) => {
            if b.0 > a.0 || (b.0 == a.0 && pb < pa) {
                b
            } else {
                a
            }
        }
    }
}

/// Least `c` over all ordered pairs of distinct domain points; `0` for a
/// singleton domain. `phi[i]` is an `n × m` matrix.
pub fn whitney_check(domain: &[Point], f: &[Point], phi: &[Matrix]) -> Result<WhitneyResult> {
    let len = domain.len();
    if f.len() != len || phi.len() != len {
        return Err(Error::InvalidArgument(format!(
            "list lengths differ: {} domain points, {} values, {} derivatives",
            len,
            f.len(),
            phi.len()
        )));
    }
    let zero = WhitneyResult { c: 0.0, c1: 0.0, c2: 0.0, argmax1: None, argmax2: None };
    if len == 0 {
        return Ok(zero);
    }
    let (m, n) = (domain[0].len(), f[0].len());
    for i in 0..len {
        if domain[i].len() != m {
            return Err(dim_mismatch(m, domain[i].len(), "domain point length"));
        }
        if f[i].len() != n {
            return Err(dim_mismatch(n, f[i].len(), "value length"));
        }
        if phi[i].nrows() != n || phi[i].ncols() != m {
            return Err(Error::DimensionMismatch(format!(
                "derivative {i} is {}×{}, expected {n}×{m}",
                phi[i].nrows(),
                phi[i].ncols()
            )));
        }
    }
    type Acc = ((f64, Option<(usize, usize)>), (f64, Option<(usize, usize)>));
    let (w1, w2): Acc = (0..len)
        .into_par_iter()
        .map(|i| -> Result<Acc> {
            let mut acc: Acc = ((0.0, None), (0.0, None));
            for j in 0..len {
                if i == j {
                    continue;
                }
                let step = &domain[j] - &domain[i];
                let dist = step.norm();
                if dist == 0.0 {
                    return Err(Error::Degenerate(format!("domain points {i} and {j} coincide")));
                }
                let r1 = operator_norm(&(&phi[j] - &phi[i])) / dist;
                let r2 = (&f[j] - &f[i] - &phi[i] * &step).norm() / (dist * dist);
                acc.0 = max_pair(acc.0, (r1, Some((i, j))));
                acc.1 = max_pair(acc.1, (r2, Some((i, j))));
            }
            Ok(acc)
        })
        .try_reduce(|| ((0.0, None), (0.0, None)), |a, b| Ok((max_pair(a.0, b.0), max_pair(a.1, b.1))))?;
    Ok(WhitneyResult { c: w1.0.max(w2.0), c1: w1.0, c2: w2.0, argmax1: w1.1, argmax2: w2.1 })
}

/// Whitney data `f(x) = π_T x`, `φ(x) = π_T + π_{ψ(x)^⊥}` over a stratum.
#[derive(Debug, Clone)]
pub struct WhitneyData {
    /// Cloud indices of the stratum points, in cloud order.
    pub indices: Vec<usize>,
    pub domain: Vec<Point>,
    pub f: Vec<Point>,
    pub phi: Vec<Matrix>,
    /// Cloud index of the base point whose tangent space is `T`.
    pub base: usize,
}

/// Builds the data from explicit tangent spaces `psi[i]` at `points[i]`, with
/// `T = psi[base]`.
pub fn tdmnapl_data_with_field(points: &[Point], psi: &[Subspace], base: usize) -> Result<WhitneyData> {
    if points.len() != psi.len() {
        return Err(dim_mismatch(points.len(), psi.len(), "number of tangent spaces"));
    }
    if base >= points.len() {
        return Err(Error::InvalidArgument(format!("base index {base} out of range")));
    }
    let t = psi[base].projector();
    let d = t.nrows();
    let id = Matrix::identity(d, d);
    let f = points.iter().map(|x| &t * x).collect();
    let phi = psi.iter().map(|s| &t + (&id - s.projector())).collect();
    Ok(WhitneyData { indices: (0..points.len()).collect(), domain: points.to_vec(), f, phi, base })
}

/// Builds the data over the points labeled with tangent dimension `k`, using
/// tangent spaces estimated at scale `h`. The base is the first stratum point
/// unless given.
pub fn tdmnapl_data(cloud: &PointCloud, k: usize, h: f64, tau_rank: f64, base: Option<usize>) -> Result<WhitneyData> {
    let labels = cloud
        .labels()
        .ok_or_else(|| Error::InvalidArgument("cloud has no stratum labels".into()))?;
    let indices: Vec<usize> = (0..cloud.len()).filter(|&i| labels[i].k == k).collect();
    if indices.is_empty() {
        return Err(Error::InvalidArgument(format!("stratum T_{k} is empty")));
    }
    let base_pos = match base {
        None => 0,
        Some(b) => indices
            .iter()
            .position(|&i| i == b)
            .ok_or_else(|| Error::InvalidArgument(format!("base point {b} is not in T_{k}")))?,
    };
    let points: Vec<Point> = indices.iter().map(|&i| cloud.point(i).clone()).collect();
    let psi: Vec<Subspace> = estimate_at(cloud, &indices, h, tau_rank)?.into_iter().map(|e| e.span).collect();
    let mut data = tdmnapl_data_with_field(&points, &psi, base_pos)?;
    data.base = indices[base_pos];
    data.indices = indices;
    Ok(data)
}
