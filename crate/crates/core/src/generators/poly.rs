//! Piecewise polynomials of degree at most four on closed intervals, with exact
//! zero-set isolation.
//!
//! Coefficients of a piece on `[a, b]` are in powers of the local variable
//! `x − a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 4;
/// Bisection stops once a bracket is shorter than this.
pub const ROOT_TOL: f64 = 1e-12;
/// Continuity tolerance across piece boundaries.
pub const CONTINUITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPiece {
    pub interval: [f64; 2],
    pub coeffs: Vec<f64>,
}

impl PolyPiece {
    pub fn new(a: f64, b: f64, coeffs: Vec<f64>) -> Self {
        PolyPiece { interval: [a, b], coeffs }
    }

    pub fn start(&self) -> f64 {
        self.interval[0]
    }

    pub fn end(&self) -> f64 {
        self.interval[1]
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x - self.start())
    }

    pub fn eval_derivative(&self, x: f64) -> f64 {
        horner(&derivative(&self.coeffs), x - self.start())
    }

    /// The same polynomial expanded around `x0`.
    pub fn recentered(&self, x0: f64) -> Vec<f64> {
        taylor_shift(&self.coeffs, x0 - self.start())
    }
}

pub fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect()
}

/// Coefficients of `p(u + delta)` in powers of `u`.
pub fn taylor_shift(coeffs: &[f64], delta: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            c[j] += delta * c[j + 1];
        }
    }
    c
}

/// Piecewise polynomial on contiguous closed intervals. At a shared endpoint
/// the left piece is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePoly {
    pub pieces: Vec<PolyPiece>,
}

impl PiecewisePoly {
    pub fn new(pieces: Vec<PolyPiece>) -> Result<Self> {
        let p = PiecewisePoly { pieces };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            return Err(Error::InvalidSpec("piecewise polynomial has no pieces".into()));
        }
        for (k, piece) in self.pieces.iter().enumerate() {
            if !(piece.start() < piece.end()) || !piece.start().is_finite() || !piece.end().is_finite() {
                return Err(Error::InvalidSpec(format!("piece {k}: invalid interval {:?}", piece.interval)));
            }
            if piece.coeffs.len() > MAX_DEGREE + 1 {
                return Err(Error::InvalidSpec(format!("piece {k}: degree exceeds {MAX_DEGREE}")));
            }
            if piece.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidSpec(format!("piece {k}: non-finite coefficient")));
            }
        }
        for (k, w) in self.pieces.windows(2).enumerate() {
            if (w[0].end() - w[1].start()).abs() > CONTINUITY_TOL {
                return Err(Error::InvalidSpec(format!("pieces {k} and {} are not contiguous", k + 1)));
            }
            let jump = (w[0].eval(w[0].end()) - w[1].eval(w[1].start())).abs();
            if jump > CONTINUITY_TOL {
                return Err(Error::InvalidSpec(format!(
                    "discontinuity {jump:e} between pieces {k} and {}",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.pieces[0].start(), self.pieces[self.pieces.len() - 1].end())
    }

    fn piece_at(&self, x: f64) -> Option<&PolyPiece> {
        let (lo, hi) = self.domain();
        if x < lo - CONTINUITY_TOL || x > hi + CONTINUITY_TOL {
            return None;
        }
        let k = self.pieces.partition_point(|p| p.end() < x);
        Some(&self.pieces[k.min(self.pieces.len() - 1)])
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.piece_at(x)
            .map(|p| p.eval(x))
            .ok_or_else(|| Error::InvalidArgument(format!("{x} lies outside the domain")))
    }

    /// Right derivative at `x` (left derivative at the right end of the domain).
    pub fn right_derivative(&self, x: f64) -> Result<f64> {
        let (_, hi) = self.domain();
        let k = self.pieces.partition_point(|p| p.end() <= x);
        if k < self.pieces.len() && self.pieces[k].start() <= x + CONTINUITY_TOL {
            return Ok(self.pieces[k].eval_derivative(x));
        }
        if (x - hi).abs() <= CONTINUITY_TOL {
            return Ok(self.pieces[self.pieces.len() - 1].eval_derivative(x));
        }
        Err(Error::InvalidArgument(format!("{x} lies outside the domain")))
    }

    /// Left derivative at `x`.
    pub fn left_derivative(&self, x: f64) -> Result<f64> {
        let (lo, _) = self.domain();
        let k = self.pieces.partition_point(|p| p.end() < x);
        if k < self.pieces.len() && self.pieces[k].start() < x {
            return Ok(self.pieces[k].eval_derivative(x));
        }
        if (x - lo).abs() <= CONTINUITY_TOL {
            return Ok(self.pieces[0].eval_derivative(x));
        }
        Err(Error::InvalidArgument(format!("{x} lies outside the domain")))
    }

    /// Exact Lipschitz constant `max |p'|`, evaluated at piece endpoints and at
    /// the critical points of each `p'`.
    pub fn lipschitz(&self) -> f64 {
        let mut best = 0.0f64;
        for piece in &self.pieces {
            let d1 = derivative(&piece.coeffs);
            let d2 = derivative(&d1);
            let w = piece.end() - piece.start();
            let mut us = vec![0.0, w];
            us.extend(zero_set(&d2, 0.0, w).into_iter().flat_map(|(a, b)| [a, b]));
            for u in us {
                best = best.max(horner(&d1, u).abs());
            }
        }
        best
    }

    /// `self − other` on the common refinement of both partitions.
    pub fn difference(&self, other: &PiecewisePoly) -> Result<PiecewisePoly> {
        let (a0, a1) = self.domain();
        let (b0, b1) = other.domain();
        if (a0 - b0).abs() > CONTINUITY_TOL || (a1 - b1).abs() > CONTINUITY_TOL {
            return Err(Error::InvalidSpec("functions have different domains".into()));
        }
        let mut cuts: Vec<f64> = self
            .pieces
            .iter()
            .chain(other.pieces.iter())
            .flat_map(|p| [p.start(), p.end()])
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() <= CONTINUITY_TOL);
        let mut pieces = Vec::with_capacity(cuts.len());
        for w in cuts.windows(2) {
            let (s, e) = (w[0], w[1]);
            let mid = 0.5 * (s + e);
            let p = self.piece_at(mid).expect("inside domain").recentered(s);
            let q = other.piece_at(mid).expect("inside domain").recentered(s);
            let n = p.len().max(q.len());
            let coeffs =
                (0..n).map(|i| p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).collect();
            pieces.push(PolyPiece::new(s, e, coeffs));
        }
        Ok(PiecewisePoly { pieces })
    }

    /// Zero set on the domain as sorted, merged closed intervals (isolated zeros
    /// are degenerate intervals).
    pub fn zero_set(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for piece in &self.pieces {
            let w = piece.end() - piece.start();
            for (a, b) in zero_set(&piece.coeffs, 0.0, w) {
                push_merged(&mut out, (piece.start() + a, piece.start() + b));
            }
        }
        out
    }

    /// Checks `f(x) − (c/2)x²` concave (or, for `convex = true`, `f + (c/2)x²`
    /// convex) through second differences on a uniform grid of `n` points.
    pub fn check_semi(&self, c: f64, convex: bool, n: usize) -> std::result::Result<(), String> {
        let (lo, hi) = self.domain();
        let h = (hi - lo) / (n - 1) as f64;
        let xs: Vec<f64> = (0..n).map(|i| lo + i as f64 * h).collect();
        let vals: Vec<f64> = xs.iter().map(|&x| self.eval(x).expect("grid inside domain")).collect();
        let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-9 * scale;
        for i in 1..n - 1 {
            let second = vals[i - 1] - 2.0 * vals[i] + vals[i + 1];
            let violation = if convex { -second - c * h * h } else { second - c * h * h };
            if violation > tol {
                return Err(format!(
                    "second difference at x = {} exceeds the modulus c = {c} (excess {violation:e})",
                    xs[i]
                ));
            }
        }
        Ok(())
    }
}

fn push_merged(out: &mut Vec<(f64, f64)>, iv: (f64, f64)) {
    if let Some(last) = out.last_mut() {
        if iv.0 <= last.1 + ROOT_TOL {
            last.1 = last.1.max(iv.1);
            return;
        }
    }
    out.push(iv);
}

fn trim(coeffs: &[f64]) -> &[f64] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1] == 0.0 {
        n -= 1;
    }
    &coeffs[..n]
}

/// Zero set of the polynomial `p(u)` on `[lo, hi]`.
///
/// The interval is split at the zeros of `p'` (found recursively) into
/// monotone pieces; each is bisected on a sign change, and critical points or
/// endpoints where `|p|` is within rounding of zero are reported as (touching)
/// zeros. A polynomial that vanishes identically gives the whole interval.
pub fn zero_set(coeffs: &[f64], lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs())) * (1.0 + hi.abs().max(lo.abs())).powi(4);
    let c = trim(coeffs);
    if c.iter().all(|x| x.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE)) || c.is_empty() {
        return vec![(lo, hi)];
    }
    let zero_tol = 1e-12 * scale.max(1.0);
    let d = derivative(c);
    let mut knots = vec![lo];
    if c.len() > 2 {
        for (a, b) in zero_set(&d, lo, hi) {
            if a == lo && b == hi {
                // p' ≡ 0: constant and nonzero here.
                return Vec::new();
            }
            knots.push(0.5 * (a + b));
        }
    }
    knots.push(hi);
    knots.dedup_by(|x, y| (*x - *y).abs() <= ROOT_TOL);

    let mut out = Vec::new();
    for &k in &knots {
        if horner(c, k).abs() <= zero_tol {
            push_merged(&mut out, (k, k));
        }
    }
    for w in knots.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (mut fa, fb) = (horner(c, a), horner(c, b));
        if fa.abs() <= zero_tol || fb.abs() <= zero_tol || fa.signum() == fb.signum() {
            continue;
        }
        while b - a > ROOT_TOL {
            let m = 0.5 * (a + b);
            let fm = horner(c, m);
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        let r = 0.5 * (a + b);
        out.push((r, r));
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged = Vec::with_capacity(out.len());
    for iv in out {
        push_merged(&mut merged, iv);
    }
    merged
}
