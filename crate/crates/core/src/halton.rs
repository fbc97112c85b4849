//! Halton low-discrepancy sequence used for deterministic probe placement.

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Largest supported dimension.
pub const MAX_DIM: usize = PRIMES.len();

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    r
}

/// The `i`-th Halton point in `[0,1)^dim` (index 0 is skipped by callers that
/// want to avoid the origin).
pub fn halton(i: u64, dim: usize) -> Vec<f64> {
    assert!(dim <= MAX_DIM, "Halton sequence supports at most {MAX_DIM} dimensions");
    PRIMES[..dim].iter().map(|&b| radical_inverse(i, b)).collect()
}
