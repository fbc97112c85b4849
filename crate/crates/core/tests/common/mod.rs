#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reachkit_core::{Matrix, Point, Subspace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_point(rng: &mut ChaCha8Rng, d: usize) -> Point {
    // Box–Muller keeps the tests free of extra distribution crates.
    Point::from_iterator(
        d,
        (0..d).map(|_| {
            let u: f64 = rng.gen_range(1e-12..1.0);
            let v: f64 = rng.gen();
            (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        }),
    )
}

pub fn unit_point(rng: &mut ChaCha8Rng, d: usize) -> Point {
    loop {
        let p = gaussian_point(rng, d);
        let n = p.norm();
        if n > 1e-6 {
            return p / n;
        }
    }
}

pub fn random_subspace(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Subspace {
    loop {
        let vs: Vec<Point> = (0..k).map(|_| gaussian_point(rng, d)).collect();
        if let Ok(s) = Subspace::span(d, &vs) {
            if s.dim() == k {
                return s;
            }
        }
    }
}

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
pub fn random_rotation(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let cols: Vec<Point> = (0..d).map(|_| gaussian_point(rng, d)).collect();
    Matrix::from_columns(&cols).qr().q()
}

pub fn pt(xs: &[f64]) -> Point {
    Point::from_vec(xs.to_vec())
}
