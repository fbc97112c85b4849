mod common;

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use common::*;
use proptest::prelude::*;
use reachkit_core::{gap_distance, gj_norm, norm_equivalence_constant, operator_norm, Matrix, Point, Subspace};

/// Largest distance from a unit vector of `u` to `v`, sampled over the unit
/// sphere of `u` (exact for lines; dense circle sampling for planes).
fn sampled_gap(u: &Subspace, v: &Subspace) -> f64 {
    let basis = u.basis_vectors();
    let dist = |x: &Point| (x - v.project(x)).norm();
    match basis.len() {
        1 => dist(&basis[0]),
        2 => (0..20_000)
            .map(|i| {
                let t = PI * i as f64 / 20_000.0;
                dist(&(&basis[0] * t.cos() + &basis[1] * t.sin()))
            })
            .fold(0.0, f64::max),
        k => panic!("oracle covers k ≤ 2, got {k}"),
    }
}

#[test]
fn random_pairs_metric_axioms_and_duality() {
    let mut r = rng(3);
    for k in [1, 2] {
        for _ in 0..200 {
            let (u, v, w) = (random_subspace(&mut r, 4, k), random_subspace(&mut r, 4, k), random_subspace(&mut r, 4, k));
            let uv = gap_distance(&u, &v).unwrap();
            assert_eq!(uv, gap_distance(&v, &u).unwrap());
            let uw = gap_distance(&u, &w).unwrap();
            let wv = gap_distance(&w, &v).unwrap();
            assert!(uv <= uw + wv + 1e-12);
            let dual = gap_distance(&u.complement(), &v.complement()).unwrap();
            assert!((uv - dual).abs() <= 1e-10, "k={k}: {uv} vs {dual}");
            assert!((0.0..=1.0).contains(&uv));
        }
    }
}

#[test]
fn line_rotated_by_thirty_degrees() {
    let e1 = Subspace::coordinate(2, &[0]).unwrap();
    let rot = Subspace::span(2, &[pt(&[(PI / 6.0).cos(), (PI / 6.0).sin()])]).unwrap();
    assert_abs_diff_eq!(gap_distance(&e1, &rot).unwrap(), 0.5, epsilon = 1e-12);
}

#[test]
fn agrees_with_sampled_supremum() {
    let mut r = rng(11);
    for k in [1, 2] {
        for _ in 0..20 {
            let u = random_subspace(&mut r, 4, k);
            let v = random_subspace(&mut r, 4, k);
            let g = gap_distance(&u, &v).unwrap();
            let s = sampled_gap(&u, &v);
            assert!(s <= g + 1e-12, "sampled {s} exceeds {g}");
            assert!(g - s <= 1e-6, "sampled {s} far below {g}");
        }
    }
}

#[test]
fn mismatched_dimensions_rejected() {
    let u = Subspace::coordinate(3, &[0]).unwrap();
    assert!(gap_distance(&u, &Subspace::coordinate(3, &[0, 1]).unwrap()).is_err());
    assert!(gap_distance(&u, &Subspace::coordinate(4, &[0]).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gap_invariant_under_rotation(seed in any::<u64>(), d in 2usize..6, kk in 0usize..6) {
        let mut r = rng(seed);
        let k = kk % (d + 1);
        let u = random_subspace(&mut r, d, k);
        let v = random_subspace(&mut r, d, k);
        let q = random_rotation(&mut r, d);
        let rot = |s: &Subspace| Subspace::span(d, &s.basis_vectors().iter().map(|b| &q * b).collect::<Vec<_>>()).unwrap();
        let before = gap_distance(&u, &v).unwrap();
        let after = gap_distance(&rot(&u), &rot(&v)).unwrap();
        prop_assert!((before - after).abs() < 1e-10);
        prop_assert!(gap_distance(&u, &u).unwrap() < 1e-12);
    }

    #[test]
    fn operator_and_gj_norms_are_equivalent(seed in any::<u64>(), d in 1usize..7) {
        let mut r = rng(seed);
        let cols: Vec<Point> = (0..d).map(|_| gaussian_point(&mut r, d)).collect();
        let m = Matrix::from_columns(&cols);
        let (op, gj, kd) = (operator_norm(&m), gj_norm(&m).unwrap(), norm_equivalence_constant(d));
        prop_assert!(gj / kd <= op * (1.0 + 1e-12));
        prop_assert!(op <= kd * gj * (1.0 + 1e-12));
    }
}
