//! B-sets: planar regions `{(x, y) : bottom(x) ≤ y ≤ top(x)}` between a
//! semiconcave top and a semiconvex bottom that meet at the origin.

use serde::{Deserialize, Serialize};

use super::poly::{PiecewisePoly, PolyPiece, CONTINUITY_TOL};
use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::linalg::Point;

/// Grid size of the semiconcavity and sign checks.
pub const VERIFY_GRID: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemiKind {
    Semiconcave,
    Semiconvex,
}

/// A piecewise polynomial with its semiconcavity (or semiconvexity) modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiFunctionSpec {
    pub pieces: Vec<PolyPiece>,
    pub c: f64,
    /// Implied by the role (top or bottom) when omitted from JSON.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<SemiKind>,
}

impl SemiFunctionSpec {
    pub fn new(pieces: Vec<PolyPiece>, c: f64, kind: SemiKind) -> Self {
        SemiFunctionSpec { pieces, c, kind: Some(kind) }
    }

    /// Validates continuity and the semi-modulus, returning the function.
    pub fn build(&self, kind: SemiKind) -> Result<PiecewisePoly> {
        if let Some(k) = self.kind {
            if k != kind {
                return Err(Error::InvalidSpec(format!("expected a {kind:?} function, got {k:?}")));
            }
        }
        if !(self.c >= 0.0) {
            return Err(Error::InvalidSpec(format!("modulus c must be non-negative, got {}", self.c)));
        }
        let p = PiecewisePoly::new(self.pieces.clone())?;
        p.check_semi(self.c, kind == SemiKind::Semiconvex, VERIFY_GRID)
            .map_err(|e| Error::InvalidSpec(format!("{kind:?} check failed: {e}")))?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BSetVariant {
    /// Domain `[0, r]`.
    Minus,
    /// Domain `[−r, r]`, two-sided derivative zero at the origin.
    Plus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSetSpec {
    pub variant: BSetVariant,
    pub r: f64,
    pub top: SemiFunctionSpec,
    pub bottom: SemiFunctionSpec,
}

/// Validated B-set with its boundary functions.
#[derive(Debug, Clone)]
pub struct BSet {
    pub spec: BSetSpec,
    pub top: PiecewisePoly,
    pub bottom: PiecewisePoly,
}

impl BSetSpec {
    pub fn domain(&self) -> (f64, f64) {
        match self.variant {
            BSetVariant::Minus => (0.0, self.r),
            BSetVariant::Plus => (-self.r, self.r),
        }
    }

    /// Checks every invariant and returns the validated set.
    pub fn validate(&self) -> Result<BSet> {
        if !(self.r > 0.0) || !self.r.is_finite() {
            return Err(Error::InvalidSpec(format!("r must be positive, got {}", self.r)));
        }
        let top = self.top.build(SemiKind::Semiconcave).map_err(|e| prefix("top", e))?;
        let bottom = self.bottom.build(SemiKind::Semiconvex).map_err(|e| prefix("bottom", e))?;
        let (lo, hi) = self.domain();
        for (name, f) in [("top", &top), ("bottom", &bottom)] {
            let (a, b) = f.domain();
            if (a - lo).abs() > CONTINUITY_TOL || (b - hi).abs() > CONTINUITY_TOL {
                return Err(Error::InvalidSpec(format!("{name}: domain [{a}, {b}] differs from [{lo}, {hi}]")));
            }
            if f.eval(0.0)?.abs() > CONTINUITY_TOL {
                return Err(Error::InvalidSpec(format!("{name}(0) must be 0")));
            }
            if f.right_derivative(0.0)?.abs() > CONTINUITY_TOL {
                return Err(Error::InvalidSpec(format!("{name}: right derivative at 0 must be 0")));
            }
            if self.variant == BSetVariant::Plus && f.left_derivative(0.0)?.abs() > CONTINUITY_TOL {
                return Err(Error::InvalidSpec(format!("{name}: left derivative at 0 must be 0")));
            }
        }
        let n = super::bset::VERIFY_GRID;
        let mut xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        xs.extend(top.pieces.iter().chain(bottom.pieces.iter()).flat_map(|p| [p.start(), p.end()]));
        for x in xs {
            let (t, b) = (top.eval(x)?, bottom.eval(x)?);
            if t < -CONTINUITY_TOL {
                return Err(Error::InvalidSpec(format!("top({x}) = {t} is negative")));
            }
            if b > CONTINUITY_TOL {
                return Err(Error::InvalidSpec(format!("bottom({x}) = {b} is positive")));
            }
        }
        Ok(BSet { spec: self.clone(), top, bottom })
    }
}

fn prefix(what: &str, e: Error) -> Error {
    match e {
        Error::InvalidSpec(m) => Error::InvalidSpec(format!("{what}: {m}")),
        other => other,
    }
}

impl BSet {
    /// Connected components of `{x : top(x) = bottom(x)}`.
    pub fn contact_set(&self) -> Result<Vec<(f64, f64)>> {
        Ok(self.top.difference(&self.bottom)?.zero_set())
    }

    /// Largest boundary slope.
    pub fn lipschitz(&self) -> f64 {
        self.top.lipschitz().max(self.bottom.lipschitz())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        match (self.top.eval(x), self.bottom.eval(x)) {
            (Ok(t), Ok(b)) => b - 1e-12 <= y && y <= t + 1e-12,
            _ => false,
        }
    }
}

/// Generated B-set sample.
#[derive(Debug, Clone)]
pub struct BSetSample {
    pub cloud: PointCloud,
    pub contact: Vec<(f64, f64)>,
    pub set: BSet,
}

fn axis_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as i64;
    let mut xs: Vec<f64> = (0..=count).map(|i| lo + i as f64 * step).collect();
    if hi - xs[xs.len() - 1] > 1e-9 * step {
        xs.push(hi);
    }
    xs
}

/// Samples the B-set on a regular grid of the given step, including the
/// boundary curves at every grid abscissa, embedded in `R^dim` (`dim ≥ 2`).
pub fn make_bset(spec: &BSetSpec, grid_step: f64, dim: usize) -> Result<BSetSample> {
    if !(grid_step > 0.0) {
        return Err(Error::InvalidArgument(format!("grid step must be positive, got {grid_step}")));
    }
    if dim < 2 {
        return Err(Error::InvalidArgument("a B-set needs ambient dimension ≥ 2".into()));
    }
    let set = spec.validate()?;
    let (lo, hi) = spec.domain();
    let dedup = 1e-9 * grid_step;
    let mut pts = Vec::new();
    for x in axis_grid(lo, hi, grid_step) {
        let (t, b) = (set.top.eval(x)?, set.bottom.eval(x)?);
        let mut column = vec![b];
        let j0 = (b / grid_step).floor() as i64 + 1;
        let j1 = (t / grid_step).ceil() as i64 - 1;
        for j in j0..=j1 {
            let y = j as f64 * grid_step;
            if y > b + dedup && y < t - dedup {
                column.push(y);
            }
        }
        if t - b > dedup {
            column.push(t);
        }
        for y in column {
            let mut p = Point::zeros(dim);
            p[0] = x;
            p[1] = y + 0.0; // no negative zeros in the output
            pts.push(p);
        }
    }
    let cloud = PointCloud::new(dim, pts)?;
    let contact = set.contact_set()?;
    Ok(BSetSample { cloud, contact, set })
}

/// `top = x²` and `bottom = −x²` on `[0, r]` (contact set `{0}`).
pub fn parabola_bset(r: f64) -> BSetSpec {
    BSetSpec {
        variant: BSetVariant::Minus,
        r,
        top: SemiFunctionSpec::new(vec![PolyPiece::new(0.0, r, vec![0.0, 0.0, 1.0])], 2.0, SemiKind::Semiconcave),
        bottom: SemiFunctionSpec::new(vec![PolyPiece::new(0.0, r, vec![0.0, 0.0, -1.0])], 2.0, SemiKind::Semiconvex),
    }
}
