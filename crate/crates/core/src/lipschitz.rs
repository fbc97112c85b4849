//! Empirical Lipschitz constants of subspace-valued fields and the explicit
//! constants they are compared against.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{distance, gap_distance, Point, Subspace};
use crate::simplex::factorial;

/// Relative slack of constant comparisons.
pub const DEFAULT_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PaperConstant {
    /// `1/r`, for `k = 1`.
    #[serde(rename = "psi1_bound")]
    Psi1Bound,
    /// `k / ((k! θ)² r)`.
    #[serde(rename = "L_k_theta_r")]
    LKThetaR,
    /// `2^{2(k+2)} k³ (k!)^{−2} θ^{−2} r^{−1}`.
    #[serde(rename = "Ltilde_k_theta_r")]
    LTildeKThetaR,
    /// `2¹² π / r`, for `k = 2`.
    #[serde(rename = "psi2_special")]
    Psi2Special,
}

impl PaperConstant {
    pub fn as_str(&self) -> &'static str {
        match self {
            PaperConstant::Psi1Bound => "psi1_bound",
            PaperConstant::LKThetaR => "L_k_theta_r",
            PaperConstant::LTildeKThetaR => "Ltilde_k_theta_r",
            PaperConstant::Psi2Special => "psi2_special",
        }
    }
}

impl fmt::Display for PaperConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PaperConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi1_bound" => Ok(PaperConstant::Psi1Bound),
            "L_k_theta_r" => Ok(PaperConstant::LKThetaR),
            "Ltilde_k_theta_r" => Ok(PaperConstant::LTildeKThetaR),
            "psi2_special" => Ok(PaperConstant::Psi2Special),
            other => Err(Error::InvalidArgument(format!("unknown constant '{other}'"))),
        }
    }
}

/// Evaluates a named constant. `theta` is ignored by the constants that do not
/// depend on it.
pub fn paper_constant(name: PaperConstant, k: usize, theta: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
    }
    let needs_theta = |theta: f64| -> Result<()> {
        if k < 1 {
            return Err(Error::InvalidArgument(format!("{name} needs k ≥ 1")));
        }
        if !(theta > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} needs θ > 0, got {theta}")));
        }
        Ok(())
    };
    match name {
        PaperConstant::Psi1Bound => {
            if k != 1 {
                return Err(Error::InvalidArgument(format!("psi1_bound applies to k = 1, got k = {k}")));
            }
            Ok(1.0 / r)
        }
        PaperConstant::Psi2Special => {
            if k != 2 {
                return Err(Error::InvalidArgument(format!("psi2_special applies to k = 2, got k = {k}")));
            }
            Ok(4096.0 * PI / r)
        }
        PaperConstant::LKThetaR => {
            needs_theta(theta)?;
            let kt = factorial(k) * theta;
            Ok(k as f64 / (kt * kt * r))
        }
        PaperConstant::LTildeKThetaR => {
            needs_theta(theta)?;
            let kf = k as f64;
            let fact = factorial(k);
            Ok(2f64.powi(2 * (k as i32 + 2)) * kf.powi(3) / (fact * fact) / (theta * theta) / r)
        }
    }
}

/// Largest ratio and the (lexicographically first) pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalLipschitz {
    pub constant: f64,
    pub argmax: Option<(usize, usize)>,
    pub pairs_used: u64,
}

/// `max gap(ψ(x), ψ(y)) / |x − y|` over pairs `i < j` with `|x − y| ≥ h_min`.
pub fn empirical_lipschitz(points: &[Point], values: &[Subspace], h_min: f64) -> Result<EmpiricalLipschitz> {
    if points.len() != values.len() {
        return Err(dim_mismatch(points.len(), values.len(), "number of field values"));
    }
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    if !(h_min >= 0.0) {
        return Err(Error::InvalidArgument(format!("h_min must be non-negative, got {h_min}")));
    }
    let (d, k) = (values[0].ambient_dim(), values[0].dim());
    for v in values {
        if v.ambient_dim() != d || v.dim() != k {
            return Err(Error::InvalidArgument(format!(
                "mixed subspace dimensions: G({d},{k}) and G({},{})",
                v.ambient_dim(),
                v.dim()
            )));
        }
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidArgument("points have different lengths".into()));
    }
    type Best = (f64, Option<(usize, usize)>, u64);
    let merge = |a: Best, b: Best| -> Best {
        let pick_b = match (a.1, b.1) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(pa), Some(pb)) => b.0 > a.0 || (b.0 == a.0 && pb < pa),
        };
        if pick_b {
            (b.0, b.1, a.2 + b.2)
        } else {
            (a.0, a.1, a.2 + b.2)
        }
    };
    let n = points.len();
    let (constant, argmax, pairs_used) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Best = (0.0, None, 0);
            for j in i + 1..n {
                let dist = distance(&points[i], &points[j]);
                if dist < h_min || dist == 0.0 {
                    continue;
                }
                let q = gap_distance(&values[i], &values[j]).expect("dimensions checked") / dist;
                best = merge(best, (q, Some((i, j)), 1));
            }
            best
        })
        .reduce(|| (0.0, None, 0), merge);
    Ok(EmpiricalLipschitz { constant, argmax, pairs_used })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzReport {
    pub empirical: f64,
    pub argmax: Option<(usize, usize)>,
    pub paper: f64,
    pub name: PaperConstant,
    pub satisfied: bool,
}

impl LipschitzReport {
    pub fn new(empirical: EmpiricalLipschitz, name: PaperConstant, paper: f64, slack: f64) -> Self {
        LipschitzReport {
            empirical: empirical.constant,
            argmax: empirical.argmax,
            paper,
            name,
            satisfied: empirical.constant <= paper * (1.0 + slack),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn line(angle: f64) -> Subspace {
        Subspace::span(2, &[Point::from_vec(vec![angle.cos(), angle.sin()])]).unwrap()
    }

    #[test]
    fn constants() {
        assert_eq!(paper_constant(PaperConstant::LKThetaR, 2, 0.25, 1.0).unwrap(), 8.0);
        assert_eq!(paper_constant(PaperConstant::LTildeKThetaR, 2, 0.25, 1.0).unwrap(), 8192.0);
        assert_abs_diff_eq!(paper_constant(PaperConstant::Psi2Special, 2, 0.0, 2.0).unwrap(), 6433.98, epsilon = 0.01);
        assert_eq!(paper_constant(PaperConstant::Psi1Bound, 1, 0.0, 4.0).unwrap(), 0.25);
        assert!(paper_constant(PaperConstant::Psi1Bound, 2, 0.0, 1.0).is_err());
        assert!(paper_constant(PaperConstant::LKThetaR, 2, 0.0, 1.0).is_err());
    }

    #[test]
    fn constant_field_is_zero() {
        let pts: Vec<Point> = (0..5).map(|i| Point::from_vec(vec![i as f64, 0.0])).collect();
        let vals = vec![line(0.3); 5];
        assert_eq!(empirical_lipschitz(&pts, &vals, 0.0).unwrap().constant, 0.0);
    }

    #[test]
    fn orthogonal_lines_at_unit_distance() {
        let pts = vec![Point::from_vec(vec![0.0, 0.0]), Point::from_vec(vec![1.0, 0.0])];
        let r = empirical_lipschitz(&pts, &[line(0.0), line(PI / 2.0)], 0.0).unwrap();
        assert_abs_diff_eq!(r.constant, 1.0, epsilon = 1e-12);
        assert_eq!(r.argmax, Some((0, 1)));
    }

    #[test]
    fn circle_tangents_bounded_by_one() {
        let n = 64;
        let ts: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let pts: Vec<Point> = ts.iter().map(|t| Point::from_vec(vec![t.cos(), t.sin()])).collect();
        let vals: Vec<Subspace> = ts.iter().map(|t| line(t + PI / 2.0)).collect();
        let r = empirical_lipschitz(&pts, &vals, 0.0).unwrap();
        assert!(r.constant <= 1.0 + 1e-12);
        let dt = 2.0 * PI / n as f64;
        assert_abs_diff_eq!(r.constant, (dt / 2.0).cos(), epsilon = 1e-9);
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let pts = vec![Point::from_vec(vec![0.0, 0.0]), Point::from_vec(vec![1.0, 0.0])];
        assert!(empirical_lipschitz(&pts, &[line(0.0), Subspace::full(2)], 0.0).is_err());
    }

    #[test]
    fn report_slack() {
        let e = EmpiricalLipschitz { constant: 1.04, argmax: Some((0, 1)), pairs_used: 1 };
        assert!(LipschitzReport::new(e, PaperConstant::Psi1Bound, 1.0, DEFAULT_SLACK).satisfied);
        let e = EmpiricalLipschitz { constant: 1.06, ..e };
        assert!(!LipschitzReport::new(e, PaperConstant::Psi1Bound, 1.0, DEFAULT_SLACK).satisfied);
    }
}
