//! Oracle fixtures with known reach, the example set M and bi-Lipschitz
//! distortion of point maps.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bset::{make_bset, BSetSample, BSetSpec, BSetVariant, SemiFunctionSpec, SemiKind};
use super::multirotation::{apply_multirotation, MultirotationSpec, PlaneRotation};
use super::poly::PolyPiece;
use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::linalg::{distance, Point};

/// Named fixture families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Canonical {
    /// Circle of the given radius in R².
    Circle { radius: f64 },
    /// Fibonacci sample of a sphere in R³.
    Sphere { radius: f64 },
    /// `[0, e₁]` in `R^dim`.
    Segment { dim: usize },
    /// `{0, 2h·e₁}` in R² (the sample size is ignored).
    Doubleton { h: f64 },
    /// Filled regular polygon with `sides` vertices on a circle of `radius`,
    /// sampled by a uniform subdivision of its fan triangulation.
    ConvexPolygon { sides: usize, radius: f64 },
    /// Square grid sample of a filled disk.
    Disk { radius: f64 },
}

impl Canonical {
    pub fn known_reach(&self) -> f64 {
        match *self {
            Canonical::Circle { radius } | Canonical::Sphere { radius } => radius,
            Canonical::Doubleton { h } => h,
            Canonical::Segment { .. } | Canonical::ConvexPolygon { .. } | Canonical::Disk { .. } => f64::INFINITY,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "circle" => Canonical::Circle { radius: 1.0 },
            "sphere" => Canonical::Sphere { radius: 1.0 },
            "segment" => Canonical::Segment { dim: 2 },
            "doubleton" => Canonical::Doubleton { h: 0.3 },
            "convex_polygon" | "convex-polygon" | "polygon" => Canonical::ConvexPolygon { sides: 6, radius: 1.0 },
            "disk" => Canonical::Disk { radius: 1.0 },
            other => return Err(Error::InvalidArgument(format!("unknown fixture '{other}'"))),
        })
    }
}

/// A deterministic sample with its analytic reach.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub cloud: PointCloud,
    pub known_reach: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
    }
}

pub fn canonical(kind: &Canonical, n: usize) -> Result<Fixture> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("fixtures need n ≥ 2, got {n}")));
    }
    let pts: Vec<Point> = match *kind {
        Canonical::Circle { radius } => {
            positive("radius", radius)?;
            (0..n)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / n as f64;
                    Point::from_vec(vec![radius * t.cos(), radius * t.sin()])
                })
                .collect()
        }
        Canonical::Sphere { radius } => {
            positive("radius", radius)?;
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    Point::from_vec(vec![radius * rho * t.cos(), radius * rho * t.sin(), radius * z])
                })
                .collect()
        }
        Canonical::Segment { dim } => {
            if dim == 0 {
                return Err(Error::InvalidArgument("segment needs dim ≥ 1".into()));
            }
            (0..n)
                .map(|i| {
                    let mut p = Point::zeros(dim);
                    p[0] = i as f64 / (n - 1) as f64;
                    p
                })
                .collect()
        }
        Canonical::Doubleton { h } => {
            positive("h", h)?;
            vec![Point::from_vec(vec![0.0, 0.0]), Point::from_vec(vec![2.0 * h, 0.0])]
        }
        Canonical::ConvexPolygon { sides, radius } => {
            positive("radius", radius)?;
            if sides < 3 {
                return Err(Error::InvalidArgument(format!("a polygon needs ≥ 3 sides, got {sides}")));
            }
            polygon_points(sides, radius, n)
        }
        Canonical::Disk { radius } => {
            positive("radius", radius)?;
            // Grid step chosen so that about n points fall inside.
            let step = radius * (PI / n as f64).sqrt();
            let m = (radius / step).floor() as i64;
            let mut pts = Vec::new();
            for i in -m..=m {
                for j in -m..=m {
                    let (x, y) = (i as f64 * step, j as f64 * step);
                    if x * x + y * y <= radius * radius {
                        pts.push(Point::from_vec(vec![x, y]));
                    }
                }
            }
            pts
        }
    };
    let dim = pts[0].len();
    Ok(Fixture { cloud: PointCloud::new(dim, pts)?, known_reach: kind.known_reach() })
}

/// Points `c + (i/m)(v_k − c) + (j/m)(v_{k+1} − c)`, `i + j ≤ m`, over the fan
/// triangles of the polygon, with shared points kept once.
fn polygon_points(sides: usize, radius: f64, n: usize) -> Vec<Point> {
    let m = ((2.0 * n as f64 / sides as f64).sqrt().round() as usize).max(1);
    let verts: Vec<(f64, f64)> = (0..sides)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / sides as f64;
            (radius * t.cos(), radius * t.sin())
        })
        .collect();
    let mut pts = vec![Point::from_vec(vec![0.0, 0.0])];
    for k in 0..sides {
        let (a, b) = (verts[k], verts[(k + 1) % sides]);
        // The spoke towards v_{k+1} (i = 0) belongs to the next triangle.
        for i in 1..=m {
            for j in 0..=(m - i) {
                let (s, t) = (i as f64 / m as f64, j as f64 / m as f64);
                pts.push(Point::from_vec(vec![s * a.0 + t * b.0, s * a.1 + t * b.1]));
            }
        }
    }
    pts
}

/// Output of [`example_m`].
#[derive(Debug, Clone)]
pub struct ExampleM {
    /// The multirotated set in R³.
    pub cloud: PointCloud,
    /// The underlying B-set sample embedded in R³.
    pub bset: BSetSample,
    pub multirotation: MultirotationSpec,
}

/// B-set boundary with a prescribed contact set: `top` vanishes on `contact`,
/// equals `u²(w − u)²/w²` on each bounded gap of width `w` and `(x − a)²` after
/// the last contact point `a`; `bottom = −top`. Both have modulus 2.
pub fn contact_bset(r: f64, contact: &[(f64, f64)]) -> Result<BSetSpec> {
    positive("r", r)?;
    if contact.is_empty() || contact[0].0 != 0.0 {
        return Err(Error::InvalidSpec("contact set must start at 0".into()));
    }
    for (k, &(a, b)) in contact.iter().enumerate() {
        if !(a <= b) || b > r {
            return Err(Error::InvalidSpec(format!("contact interval {k} = [{a}, {b}] is not inside [0, r]")));
        }
        if k > 0 && !(contact[k - 1].1 < a) {
            return Err(Error::InvalidSpec(format!("contact intervals {} and {k} overlap", k - 1)));
        }
    }
    let mut top = Vec::new();
    for (k, &(a, b)) in contact.iter().enumerate() {
        if b > a {
            top.push(PolyPiece::new(a, b, vec![0.0]));
        }
        let next = contact.get(k + 1).map(|c| c.0);
        match next {
            Some(a2) => {
                let w = a2 - b;
                top.push(PolyPiece::new(b, a2, vec![0.0, 0.0, 1.0, -2.0 / w, 1.0 / (w * w)]));
            }
            None if b < r => top.push(PolyPiece::new(b, r, vec![0.0, 0.0, 1.0])),
            None => {}
        }
    }
    let bottom = top
        .iter()
        .map(|p| PolyPiece::new(p.start(), p.end(), p.coeffs.iter().map(|c| -c).collect()))
        .collect();
    Ok(BSetSpec {
        variant: BSetVariant::Minus,
        r,
        top: SemiFunctionSpec::new(top, 2.0, SemiKind::Semiconcave),
        bottom: SemiFunctionSpec::new(bottom, 2.0, SemiKind::Semiconvex),
    })
}

/// Number of components of `(0, r] ∖ contact`.
pub fn leaf_count(r: f64, contact: &[(f64, f64)]) -> usize {
    let bounded = contact.len().saturating_sub(1);
    bounded + usize::from(contact.last().is_some_and(|c| c.1 < r))
}

/// The example set M: the B-set of [`contact_bset`] in R³ with its leaf over
/// the `k`-th component of `(0, r] ∖ contact` rotated about the x₁-axis by
/// `angles[k]`. An empty angle list leaves every leaf in place.
pub fn example_m(r: f64, contact: &[(f64, f64)], angles: &[f64], grid_step: f64) -> Result<ExampleM> {
    let spec = contact_bset(r, contact)?;
    let leaves = leaf_count(r, contact);
    if !angles.is_empty() && angles.len() != leaves {
        return Err(Error::InvalidArgument(format!("{} angles given for {leaves} leaves", angles.len())));
    }
    let bset = make_bset(&spec, grid_step, 3)?;
    let mut rotations = vec![PlaneRotation::identity()];
    for k in 0..contact.len() {
        let angle = if angles.is_empty() || k >= leaves { 0.0 } else { angles[k] };
        rotations.push(PlaneRotation { plane: [2, 3], angle });
    }
    let multirotation = MultirotationSpec {
        dim: 3,
        contact: contact.iter().map(|&(a, b)| [a, b]).collect(),
        rotations,
    };
    let cloud = apply_multirotation(&multirotation, &bset.cloud)?;
    Ok(ExampleM { cloud, bset, multirotation })
}

/// Middle-thirds Cantor set of the given depth on `[0, r]`, as closed intervals.
pub fn cantor_contact(r: f64, depth: usize) -> Vec<(f64, f64)> {
    let mut ivs = vec![(0.0, r)];
    for _ in 0..depth {
        ivs = ivs
            .into_iter()
            .flat_map(|(a, b)| {
                let w = (b - a) / 3.0;
                [(a, a + w), (b - w, b)]
            })
            .collect();
    }
    ivs
}

/// Bi-Lipschitz constant `E = max(2/√3, √(1 + L²))` of a multirotation of a
/// set whose boundary slopes are bounded by `L`.
pub fn distortion_constant(lipschitz: f64) -> f64 {
    (2.0 / 3f64.sqrt()).max((1.0 + lipschitz * lipschitz).sqrt())
}

/// Minimum and maximum of `|map(x) − map(y)| / |x − y|` over distinct pairs.
pub fn bilipschitz_distortion<F>(map: F, cloud: &PointCloud) -> Result<(f64, f64)>
where
    F: Fn(&Point) -> Result<Point> + Sync,
{
    if cloud.len() < 2 {
        return Err(Error::InvalidArgument("distortion needs at least two points".into()));
    }
    let images = cloud.points().par_iter().map(&map).collect::<Result<Vec<_>>>()?;
    let pts = cloud.points();
    let (lo, hi) = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for j in i + 1..pts.len() {
                let d = distance(&pts[i], &pts[j]);
                if d == 0.0 {
                    continue;
                }
                let q = distance(&images[i], &images[j]) / d;
                lo = lo.min(q);
                hi = hi.max(q);
            }
            (lo, hi)
        })
        .reduce(|| (f64::INFINITY, 0.0), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fixtures_and_reach() {
        let f = canonical(&Canonical::Circle { radius: 1.0 }, 256).unwrap();
        assert_eq!(f.cloud.len(), 256);
        assert_eq!(f.known_reach, 1.0);
        let f = canonical(&Canonical::Doubleton { h: 0.3 }, 2).unwrap();
        assert_eq!(f.known_reach, 0.3);
        assert_abs_diff_eq!(f.cloud.point(1)[0], 0.6, epsilon = 1e-15);
        let f = canonical(&Canonical::Segment { dim: 3 }, 100).unwrap();
        assert!(f.known_reach.is_infinite());
        assert_eq!(f.cloud.len(), 100);
        assert_eq!(f.cloud.point(99)[0], 1.0);
        let f = canonical(&Canonical::Sphere { radius: 2.0 }, 500).unwrap();
        assert!(f.cloud.points().iter().all(|p| (p.norm() - 2.0).abs() < 1e-12));
        assert!(canonical(&Canonical::Circle { radius: 1.0 }, 1).is_err());
        assert!(Canonical::parse("torus").is_err());
    }

    #[test]
    fn polygon_points_are_distinct_and_inside() {
        let f = canonical(&Canonical::ConvexPolygon { sides: 6, radius: 1.0 }, 300).unwrap();
        let pts = f.cloud.points();
        for i in 0..pts.len() {
            assert!(pts[i].norm() <= 1.0 + 1e-12);
            for j in i + 1..pts.len() {
                assert!((&pts[i] - &pts[j]).norm() > 1e-9, "duplicate {i} {j}");
            }
        }
    }

    #[test]
    fn example_m_without_rotation_is_bset() {
        let m = example_m(1.0, &[(0.0, 0.0), (0.5, 0.5)], &[], 0.05).unwrap();
        assert_eq!(m.cloud.points(), m.bset.cloud.points());
        assert_eq!(m.bset.contact.len(), 2);
    }

    #[test]
    fn example_m_rotation_moves_leaf() {
        let m = example_m(1.0, &[(0.0, 0.0)], &[PI / 2.0], 0.05).unwrap();
        for (p, q) in m.bset.cloud.points().iter().zip(m.cloud.points()) {
            assert_eq!(p[0], q[0]);
            if p[0] > 0.0 {
                assert!(q[1].abs() < 1e-12);
                assert_abs_diff_eq!(q[2], p[1], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn contact_set_is_recovered() {
        let c = cantor_contact(1.0, 2);
        let spec = contact_bset(1.0, &c).unwrap();
        let s = make_bset(&spec, 0.02, 2).unwrap();
        assert_eq!(s.contact.len(), c.len());
        for (a, b) in s.contact.iter().zip(&c) {
            assert_abs_diff_eq!(a.0, b.0, epsilon = 1e-9);
            assert_abs_diff_eq!(a.1, b.1, epsilon = 1e-9);
        }
    }

    #[test]
    fn distortion_examples() {
        let f = canonical(&Canonical::Circle { radius: 1.0 }, 32).unwrap();
        let (lo, hi) = bilipschitz_distortion(|p| Ok(p.clone()), &f.cloud).unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-12);
        let (lo, hi) = bilipschitz_distortion(|p| Ok(p * 2.0), &f.cloud).unwrap();
        assert_abs_diff_eq!(lo, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 2.0, epsilon = 1e-12);
        let single = PointCloud::from_rows(2, &[vec![0.0, 0.0]]).unwrap();
        assert!(bilipschitz_distortion(|p| Ok(p.clone()), &single).is_err());
    }
}
