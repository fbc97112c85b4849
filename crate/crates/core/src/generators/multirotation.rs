//! Multirotations: the identity over a compact contact set `C ⊂ span{e₁}` and a
//! plane rotation fixing `e₁` over each open component of `R ∖ C`.

use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::linalg::Point;

/// Tolerance for membership of `π(x)` in a contact interval.
pub const CONTACT_TOL: f64 = 1e-12;

/// Rotation in the coordinate plane `(i, j)` (1-based, `2 ≤ i < j ≤ d`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneRotation {
    pub plane: [usize; 2],
    pub angle: f64,
}

impl PlaneRotation {
    pub fn identity() -> Self {
        PlaneRotation { plane: [2, 3], angle: 0.0 }
    }

    pub fn apply(&self, x: &Point) -> Point {
        let (i, j) = (self.plane[0] - 1, self.plane[1] - 1);
        let (s, c) = self.angle.sin_cos();
        let mut y = x.clone();
        y[i] = c * x[i] - s * x[j];
        y[j] = s * x[i] + c * x[j];
        y
    }
}

/// `contact` are the disjoint closed intervals of `C` in increasing order;
/// `rotations[k]` acts on the `k`-th open component of `R ∖ C`, counting the
/// unbounded component `(−∞, min C)` as component 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultirotationSpec {
    pub dim: usize,
    pub contact: Vec<[f64; 2]>,
    pub rotations: Vec<PlaneRotation>,
}

impl MultirotationSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 3 {
            return Err(Error::InvalidSpec(format!("multirotations need dim ≥ 3, got {}", self.dim)));
        }
        if self.contact.is_empty() {
            return Err(Error::InvalidSpec("contact set must be nonempty".into()));
        }
        for (k, iv) in self.contact.iter().enumerate() {
            if !(iv[0] <= iv[1]) || !iv[0].is_finite() || !iv[1].is_finite() {
                return Err(Error::InvalidSpec(format!("contact interval {k} is invalid: {iv:?}")));
            }
        }
        for (k, w) in self.contact.windows(2).enumerate() {
            if !(w[0][1] < w[1][0]) {
                return Err(Error::InvalidSpec(format!(
                    "contact intervals {k} and {} overlap or are unsorted",
                    k + 1
                )));
            }
        }
        if self.rotations.len() > self.contact.len() + 1 {
            return Err(Error::InvalidSpec(format!(
                "{} rotations for {} components",
                self.rotations.len(),
                self.contact.len() + 1
            )));
        }
        for (k, r) in self.rotations.iter().enumerate() {
            let [i, j] = r.plane;
            if !(2 <= i && i < j && j <= self.dim) {
                return Err(Error::InvalidSpec(format!(
                    "rotation {k}: plane ({i}, {j}) must satisfy 2 ≤ i < j ≤ {}",
                    self.dim
                )));
            }
            if !r.angle.is_finite() {
                return Err(Error::InvalidSpec(format!("rotation {k}: non-finite angle")));
            }
        }
        Ok(())
    }

    /// `None` when `t ∈ C`, otherwise the index of the component containing `t`.
    pub fn component_of(&self, t: f64) -> Option<usize> {
        let k = self.contact.partition_point(|iv| iv[1] + CONTACT_TOL < t);
        if k < self.contact.len() && self.contact[k][0] - CONTACT_TOL <= t {
            None
        } else {
            Some(k)
        }
    }

    /// Applies the multirotation to one point.
    pub fn apply_point(&self, x: &Point) -> Result<Point> {
        if x.len() != self.dim {
            return Err(crate::error::dim_mismatch(self.dim, x.len(), "point length"));
        }
        match self.component_of(x[0]) {
            None => Ok(x.clone()),
            Some(k) => match self.rotations.get(k) {
                Some(r) => Ok(r.apply(x)),
                None => Err(Error::InvalidSpec(format!(
                    "π(x) = {} lies in component {k}, which has no rotation",
                    x[0]
                ))),
            },
        }
    }
}

pub fn apply_multirotation(spec: &MultirotationSpec, cloud: &PointCloud) -> Result<PointCloud> {
    spec.validate()?;
    if cloud.dim() != spec.dim {
        return Err(crate::error::dim_mismatch(spec.dim, cloud.dim(), "cloud dimension"));
    }
    let pts = cloud.points().iter().map(|x| spec.apply_point(x)).collect::<Result<Vec<_>>>()?;
    let out = PointCloud::new(spec.dim, pts)?;
    match cloud.labels() {
        Some(l) => out.with_labels(l.to_vec()),
        None => Ok(out),
    }
}
