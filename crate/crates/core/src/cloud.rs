//! Point clouds, stratum labels and neighbor queries.

use std::collections::HashMap;
use std::sync::OnceLock;

use kdtree::distance::squared_euclidean;
use kdtree::KdTree;

use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{distance, Point};

/// Above this size radius queries go through a uniform grid instead of a full scan.
pub const GRID_THRESHOLD: usize = 5000;

/// Tangent-dimension label of a sample point: `k = dim Tan`, and whether the
/// tangent cone is the whole k-dimensional subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumLabel {
    pub k: usize,
    pub full_span: bool,
}

impl StratumLabel {
    pub fn new(k: usize, full_span: bool) -> Self {
        // The zero cone spans the zero space.
        StratumLabel { k, full_span: full_span || k == 0 }
    }
}

/// A finite sample of a set in R^d, optionally labeled by stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Point>,
    labels: Option<Vec<StratumLabel>>,
}

impl PointCloud {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(dim_mismatch(dim, p.len(), &format!("point {i}")));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(PointCloud { dim, points, labels: None })
    }

    /// Builds a cloud from coordinate rows.
    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        PointCloud::new(dim, rows.iter().map(|r| Point::from_vec(r.clone())).collect())
    }

    pub fn with_labels(mut self, labels: Vec<StratumLabel>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(dim_mismatch(self.points.len(), labels.len(), "label count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[StratumLabel]> {
        self.labels.as_deref()
    }

    /// Applies `f` to every point; labels are dropped.
    pub fn map_points<F: Fn(&Point) -> Point>(&self, f: F) -> Result<PointCloud> {
        let pts: Vec<Point> = self.points.iter().map(f).collect();
        let dim = pts.first().map_or(self.dim, |p| p.len());
        PointCloud::new(dim, pts)
    }

    /// Uniform scaling by `factor`; labels are kept.
    pub fn scaled(&self, factor: f64) -> PointCloud {
        PointCloud {
            dim: self.dim,
            points: self.points.iter().map(|p| p * factor).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Pads (or keeps) coordinates so that the cloud lives in R^dim.
    pub fn embed(&self, dim: usize) -> Result<PointCloud> {
        if dim < self.dim {
            return Err(Error::InvalidArgument(format!("cannot embed R^{} into R^{dim}", self.dim)));
        }
        let pts = self
            .points
            .iter()
            .map(|p| {
                let mut q = Point::zeros(dim);
                q.rows_mut(0, self.dim).copy_from(p);
                q
            })
            .collect();
        Ok(PointCloud { dim, points: pts, labels: self.labels.clone() })
    }

    /// Restriction to the points whose indices are listed; labels follow.
    pub fn subset(&self, indices: &[usize]) -> PointCloud {
        PointCloud {
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self.labels.as_ref().map(|l| indices.iter().map(|&i| l[i]).collect()),
        }
    }
}

/// Indices of cloud points `p` with `0 < |p − a| ≤ h`, sorted by distance then index.
pub fn neighbors(cloud: &PointCloud, a: &Point, h: f64) -> Result<Vec<usize>> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("neighborhood radius must be positive, got {h}")));
    }
    if a.len() != cloud.dim() {
        return Err(dim_mismatch(cloud.dim(), a.len(), "query point length"));
    }
    if cloud.len() > GRID_THRESHOLD {
        let index = GridIndex::new(cloud, h);
        return Ok(index.neighbors(a, h));
    }
    Ok(scan_neighbors(cloud.points(), a, h))
}

fn scan_neighbors(points: &[Point], a: &Point, h: f64) -> Vec<usize> {
    let mut hits: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let d = distance(p, a);
            (d > 0.0 && d <= h).then_some((d, i))
        })
        .collect();
    sort_hits(&mut hits);
    hits.into_iter().map(|(_, i)| i).collect()
}

fn sort_hits(hits: &mut [(f64, usize)]) {
    hits.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
}

/// Uniform bucket grid over a cloud. Query results are identical to a full scan.
#[derive(Debug)]
pub struct GridIndex<'a> {
    points: &'a [Point],
    cell: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    tree: OnceLock<KdTree<f64, usize, Vec<f64>>>,
    scan: bool,
}

/// Below this size [`GridIndex`] queries scan all points.
pub const SCAN_LIMIT: usize = 64;

impl<'a> GridIndex<'a> {
    pub fn new(cloud: &'a PointCloud, cell: f64) -> Self {
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in cloud.points().iter().enumerate() {
            buckets.entry(Self::key_of(p, cell)).or_default().push(i);
        }
        let scan = cloud.len() <= SCAN_LIMIT;
        GridIndex { points: cloud.points(), cell, buckets, tree: OnceLock::new(), scan }
    }

    fn key_of(p: &Point, cell: f64) -> Vec<i64> {
        p.iter().map(|x| (x / cell).floor() as i64).collect()
    }

    /// Visits every bucket whose cell lies within `reach` cells of `center`
    /// until `f` returns `false`; returns whether the visit ran to completion.
    fn visit_shell<F: FnMut(usize) -> bool>(&self, center: &[i64], reach: i64, mut f: F) -> bool {
        let d = center.len();
        let mut offset = vec![-reach; d];
        let mut key = vec![0i64; d];
        loop {
            for (k, (c, o)) in key.iter_mut().zip(center.iter().zip(&offset)) {
                *k = c + o;
            }
            if let Some(bucket) = self.buckets.get(&key) {
                if !bucket.iter().all(|&i| f(i)) {
                    return false;
                }
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    return true;
                }
                offset[axis] += 1;
                if offset[axis] <= reach {
                    break;
                }
                offset[axis] = -reach;
                axis += 1;
            }
        }
    }

    /// Whether some point `i` with `accept(i)` lies within distance `h` of `a`
    /// (coincident points included).
    pub fn any_within<F: Fn(usize) -> bool>(&self, a: &Point, h: f64, accept: F) -> bool {
        let hit = |i: usize| accept(i) && distance(&self.points[i], a) <= h;
        if self.scan {
            return (0..self.points.len()).any(hit);
        }
        let center = Self::key_of(a, self.cell);
        let reach = (h / self.cell).ceil() as i64;
        !self.visit_shell(&center, reach, |i| !hit(i))
    }

    /// Same contract as [`neighbors`].
    pub fn neighbors(&self, a: &Point, h: f64) -> Vec<usize> {
        if self.scan {
            return scan_neighbors(self.points, a, h);
        }
        let center = Self::key_of(a, self.cell);
        let reach = (h / self.cell).ceil() as i64;
        let mut hits = Vec::new();
        self.visit_shell(&center, reach, |i| {
            let d = distance(&self.points[i], a);
            if d > 0.0 && d <= h {
                hits.push((d, i));
            }
            true
        });
        sort_hits(&mut hits);
        hits.into_iter().map(|(_, i)| i).collect()
    }

    /// The `count` nearest points to `a` as `(distance, index)`, nearest first
    /// (ties by index). Points coinciding with `a` are included.
    pub fn nearest(&self, a: &Point, count: usize) -> Vec<(f64, usize)> {
        let count = count.min(self.points.len());
        if count == 0 {
            return Vec::new();
        }
        if self.scan {
            return self.scan_nearest(a, count);
        }
        let tree = self.tree.get_or_init(|| {
            let mut tree = KdTree::new(self.points[0].len());
            for (i, p) in self.points.iter().enumerate() {
                tree.add(p.as_slice().to_vec(), i).expect("cloud coordinates are finite");
            }
            tree
        });
        let q = a.as_slice();
        let kth = tree
            .nearest(q, count, &squared_euclidean)
            .expect("query is finite")
            .last()
            .map_or(0.0, |hit| hit.0);
        // Collect every point tied with the count-th one so ties resolve by index.
        let mut found: Vec<(f64, usize)> = tree
            .within(q, kth * (1.0 + 1e-12), &squared_euclidean)
            .expect("query is finite")
            .into_iter()
            .map(|(_, &i)| (distance(&self.points[i], a), i))
            .collect();
        sort_hits(&mut found);
        found.truncate(count);
        found
    }

    fn scan_nearest(&self, a: &Point, count: usize) -> Vec<(f64, usize)> {
        let mut found: Vec<(f64, usize)> = self.points.iter().enumerate().map(|(i, p)| (distance(p, a), i)).collect();
        if count < found.len() {
            found.select_nth_unstable_by(count, |x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            found.truncate(count);
        }
        sort_hits(&mut found);
        found
    }
}

/// Distance from each point to its nearest distinct neighbor.
pub fn nearest_neighbor_distances(cloud: &PointCloud) -> Vec<f64> {
    let n = cloud.len();
    if n < 2 {
        return Vec::new();
    }
    let cell = bounding_extent(cloud) / (n as f64).powf(1.0 / cloud.dim() as f64);
    let cell = if cell > 0.0 { cell } else { 1.0 };
    let index = GridIndex::new(cloud, cell);
    cloud
        .points()
        .iter()
        .map(|p| {
            index
                .nearest(p, n.min(8))
                .into_iter()
                .map(|(d, _)| d)
                .find(|&d| d > 0.0)
                .unwrap_or_else(|| {
                    cloud
                        .points()
                        .iter()
                        .map(|q| distance(q, p))
                        .filter(|&d| d > 0.0)
                        .fold(f64::INFINITY, f64::min)
                })
        })
        .collect()
}

/// Median nearest-neighbor spacing; `0` for clouds with fewer than two points.
pub fn median_spacing(cloud: &PointCloud) -> f64 {
    let mut d: Vec<f64> = nearest_neighbor_distances(cloud).into_iter().filter(|x| x.is_finite()).collect();
    if d.is_empty() {
        return 0.0;
    }
    d.sort_by(f64::total_cmp);
    let m = d.len();
    if m % 2 == 1 {
        d[m / 2]
    } else {
        0.5 * (d[m / 2 - 1] + d[m / 2])
    }
}

/// Largest coordinate range of the cloud's bounding box.
pub fn bounding_extent(cloud: &PointCloud) -> f64 {
    let (lo, hi) = bounding_box(cloud);
    lo.iter().zip(hi.iter()).map(|(a, b)| b - a).fold(0.0, f64::max)
}

/// Coordinate-wise minimum and maximum.
pub fn bounding_box(cloud: &PointCloud) -> (Point, Point) {
    let d = cloud.dim();
    let mut lo = Point::from_element(d, f64::INFINITY);
    let mut hi = Point::from_element(d, f64::NEG_INFINITY);
    for p in cloud.points() {
        for j in 0..d {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(n: usize) -> PointCloud {
        let pts = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Point::from_vec(vec![t.cos(), t.sin()])
            })
            .collect();
        PointCloud::new(2, pts).unwrap()
    }

    #[test]
    fn isolated_point_has_no_neighbors() {
        let c = PointCloud::from_rows(2, &[vec![0.0, 0.0], vec![5.0, 0.0]]).unwrap();
        assert!(neighbors(&c, &Point::from_vec(vec![0.0, 0.0]), 1.0).unwrap().is_empty());
    }

    #[test]
    fn circle_neighbors_match_brute_force() {
        let c = circle(64);
        let a = c.point(0).clone();
        let nb = neighbors(&c, &a, 0.2).unwrap();
        // Brute force: spacing 2 sin(π/64) ≈ 0.098, so offsets ±1, ±2 are inside 0.2.
        let mut expect: Vec<(f64, usize)> = (1..64)
            .map(|i| ((c.point(i) - &a).norm(), i))
            .filter(|&(d, _)| d <= 0.2)
            .collect();
        expect.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        assert_eq!(nb.len(), 4);
        assert_eq!(nb, expect.into_iter().map(|(_, i)| i).collect::<Vec<_>>());
        let mut first: Vec<usize> = nb[..2].to_vec();
        first.sort();
        assert_eq!(first, vec![1, 63]);
    }

    #[test]
    fn coincident_point_excluded() {
        let c = PointCloud::from_rows(1, &[vec![0.0], vec![0.5]]).unwrap();
        assert_eq!(neighbors(&c, &Point::from_vec(vec![0.0]), 1.0).unwrap(), vec![1]);
    }

    #[test]
    fn grid_index_agrees_with_scan() {
        let pts: Vec<Point> = (0..900)
            .map(|i| {
                let x = (i % 30) as f64 * 0.037 + 0.001 * (i as f64).sin();
                let y = (i / 30) as f64 * 0.041;
                Point::from_vec(vec![x, y])
            })
            .collect();
        let c = PointCloud::new(2, pts).unwrap();
        let idx = GridIndex::new(&c, 0.05);
        for q in [c.point(17).clone(), Point::from_vec(vec![0.5, 0.5]), Point::from_vec(vec![-0.3, 2.0])] {
            assert_eq!(idx.neighbors(&q, 0.13), scan_neighbors(c.points(), &q, 0.13));
            let near = idx.nearest(&q, 3);
            let mut brute: Vec<(f64, usize)> = c.points().iter().enumerate().map(|(i, p)| ((p - &q).norm(), i)).collect();
            sort_hits(&mut brute);
            assert_eq!(near, brute[..3].to_vec());
        }
    }

    #[test]
    fn median_spacing_of_circle() {
        let c = circle(64);
        let expect = 2.0 * (PI / 64.0).sin();
        assert!((median_spacing(&c) - expect).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(PointCloud::from_rows(2, &[vec![0.0, f64::NAN]]).is_err());
        assert!(PointCloud::from_rows(2, &[vec![0.0]]).is_err());
    }

    #[test]
    fn zero_label_spans() {
        assert!(StratumLabel::new(0, false).full_span);
    }
}
