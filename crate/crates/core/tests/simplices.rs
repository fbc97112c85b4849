mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use reachkit_core::simplex::factorial;
use reachkit_core::{fullness, related, simplex_volume, Point, Simplex};

fn random_simplex(r: &mut rand_chacha::ChaCha8Rng, d: usize, k: usize) -> Simplex {
    Simplex::new((0..=k).map(|_| gaussian_point(r, d)).collect()).unwrap()
}

#[test]
fn right_isosceles_triangle() {
    let s = Simplex::new(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0])]).unwrap();
    assert_eq!(fullness(&s).unwrap(), 0.25);
    assert_eq!(simplex_volume(&s), 0.5);
}

#[test]
fn random_simplices_bounds() {
    let mut r = rng(17);
    for k in [2, 3] {
        let kf = factorial(k);
        for _ in 0..1000 {
            let s = random_simplex(&mut r, 3, k);
            let th = fullness(&s).unwrap();
            assert!(th <= 1.0 / kf * (1.0 + 1e-12), "Θ = {th} for k = {k}");
            assert!(s.min_edge() >= kf * th * s.diameter() * (1.0 - 1e-10));
        }
    }
}

#[test]
fn regular_triangle_is_fullest_among_samples() {
    let h = 3f64.sqrt() / 2.0;
    let s = Simplex::new(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.5, h])]).unwrap();
    assert!((fullness(&s).unwrap() - h / 2.0).abs() < 1e-15);
}

#[test]
fn coefficient_bound() {
    let mut r = rng(23);
    for k in [2, 3] {
        let kf = factorial(k);
        for _ in 0..500 {
            let s = random_simplex(&mut r, 3, k);
            let th = fullness(&s).unwrap();
            let v = s.vertices();
            let lambdas: Vec<f64> = (0..k).map(|_| r.gen_range(-3.0..3.0)).collect();
            let comb = (1..=k).fold(Point::zeros(3), |acc, j| acc + (&v[j] - &v[0]) * lambdas[j - 1]);
            for i in 1..=k {
                let bound = comb.norm() / (kf * th * (&v[i] - &v[0]).norm());
                assert!(lambdas[i - 1].abs() <= bound * (1.0 + 1e-9), "λ_{i} = {} > {bound}", lambdas[i - 1]);
            }
        }
    }
}

#[test]
fn swap_keeps_a_fraction_of_the_fullness() {
    let mut r = rng(29);
    for k in [2, 3] {
        let floor = 1.0 / (k as f64 * 2f64.powi(k as i32 + 1));
        let mut trials = 0;
        while trials < 500 {
            let vs: Vec<Point> = (0..k).map(|_| unit_point(&mut r, 3)).collect();
            let w = unit_point(&mut r, 3);
            let mut verts = vec![Point::zeros(3)];
            verts.extend(vs.iter().cloned());
            let theta = fullness(&Simplex::new(verts.clone()).unwrap()).unwrap();
            if theta <= 1e-6 {
                continue;
            }
            trials += 1;
            let best = (1..=k)
                .map(|i| {
                    let mut swapped = verts.clone();
                    swapped[i] = w.clone();
                    fullness(&Simplex::new(swapped).unwrap()).unwrap()
                })
                .fold(0.0, f64::max);
            assert!(best >= theta * floor, "k = {k}: best swap {best} < {}", theta * floor);
        }
    }
}

#[test]
fn related_finds_the_fullest_completion() {
    let a = pt(&[0.0, 0.0]);
    let b = pt(&[1.0, 0.0]);
    let cands = vec![pt(&[0.5, 0.01]), pt(&[0.0, 1.0]), pt(&[2.0, 0.0])];
    let yes = related(&a, &b, &cands, 2, 0.25, 1000).unwrap();
    assert!(yes.related && yes.exhaustive);
    assert_eq!(yes.witness, Some(vec![1]));
    let no = related(&a, &b, &cands, 2, 0.3, 1000).unwrap();
    assert!(!no.related && no.exhaustive);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn similarity_invariance(seed in any::<u64>(), k in 2usize..4, scale in 0.01f64..100.0) {
        let mut r = rng(seed);
        let s = random_simplex(&mut r, 3, k);
        let q = random_rotation(&mut r, 3);
        let shift = gaussian_point(&mut r, 3) * 10.0;
        let moved = Simplex::new(s.vertices().iter().map(|v| &q * v * scale + &shift).collect()).unwrap();
        let (a, b) = (fullness(&s).unwrap(), fullness(&moved).unwrap());
        prop_assert!((a - b).abs() <= 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn vertex_order_does_not_matter(seed in any::<u64>(), k in 1usize..4) {
        let mut r = rng(seed);
        let s = random_simplex(&mut r, 3, k);
        let mut rev = s.vertices().to_vec();
        rev.reverse();
        let t = Simplex::new(rev).unwrap();
        prop_assert!((fullness(&s).unwrap() - fullness(&t).unwrap()).abs() < 1e-12);
    }
}
