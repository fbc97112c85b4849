mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use reachkit_core::generators::bset::{make_bset, parabola_bset};
use reachkit_core::generators::canonical::{
    bilipschitz_distortion, cantor_contact, contact_bset, distortion_constant, example_m, ExampleM,
};
use reachkit_core::generators::multirotation::{apply_multirotation, MultirotationSpec, PlaneRotation};
use reachkit_core::{midpoint_reach, stratify, PointCloud, TangentParams};

fn random_spec(seed: u64, dim: usize) -> MultirotationSpec {
    let mut r = rng(seed);
    let mut cuts: Vec<f64> = (0..4).map(|_| r.gen_range(-2.0..2.0)).collect();
    cuts.sort_by(f64::total_cmp);
    let contact = vec![[cuts[0], cuts[0]], [cuts[1], cuts[2]], [cuts[3], cuts[3]]];
    let rotations = (0..=contact.len())
        .map(|_| {
            let i = r.gen_range(2..dim);
            let j = r.gen_range(i + 1..=dim);
            PlaneRotation { plane: [i, j], angle: r.gen_range(-PI..PI) }
        })
        .collect();
    MultirotationSpec { dim, contact, rotations }
}

fn t1_axis_values(cloud: &PointCloud, h: f64) -> Vec<f64> {
    let labeled = stratify(cloud, &TangentParams::new(h)).unwrap();
    let labels = labeled.labels().unwrap();
    (0..cloud.len()).filter(|&i| labels[i].k == 1).map(|i| cloud.point(i)[0]).collect()
}

fn fixtures(step: f64) -> Vec<(&'static str, ExampleM)> {
    vec![
        ("single", example_m(1.0, &[(0.0, 0.0)], &[PI / 2.0], step).unwrap()),
        ("two", example_m(1.0, &[(0.0, 0.0), (0.5, 0.5)], &[PI / 2.0, PI / 4.0], step).unwrap()),
    ]
}

#[test]
fn bset_contact_sets_are_recovered() {
    let cases: Vec<Vec<(f64, f64)>> = vec![
        vec![(0.0, 0.0)],
        vec![(0.0, 0.0), (0.5, 0.5)],
        vec![(0.0, 0.25), (0.6, 0.6)],
        cantor_contact(1.0, 3),
    ];
    for contact in cases {
        let s = make_bset(&contact_bset(1.0, &contact).unwrap(), 0.05, 2).unwrap();
        assert_eq!(s.contact.len(), contact.len());
        for (got, want) in s.contact.iter().zip(&contact) {
            assert!((got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9, "{got:?} vs {want:?}");
        }
        assert!(s.cloud.points().iter().all(|p| s.set.contains(p[0], p[1])));
    }
    let s = make_bset(&parabola_bset(1.0), 0.05, 2).unwrap();
    assert_eq!(s.contact, vec![(0.0, 0.0)]);
}

#[test]
fn contact_bset_rejects_bad_contact() {
    assert!(contact_bset(1.0, &[]).is_err());
    assert!(contact_bset(1.0, &[(0.1, 0.2)]).is_err());
    assert!(contact_bset(1.0, &[(0.0, 0.5), (0.4, 0.6)]).is_err());
    assert!(contact_bset(1.0, &[(0.0, 0.0), (0.5, 1.5)]).is_err());
}

#[test]
fn example_m_distortion_is_bounded() {
    for (name, m) in fixtures(0.05) {
        let e = distortion_constant(m.bset.set.lipschitz());
        let (lo, hi) = bilipschitz_distortion(|x| m.multirotation.apply_point(x), &m.bset.cloud).unwrap();
        assert!(lo >= 1.0 / e - 1e-12 && hi <= e + 1e-12, "{name}: [{lo}, {hi}] outside [1/{e}, {e}]");
    }
}

#[test]
fn example_m_keeps_the_t1_set() {
    let step = 0.02;
    for (name, m) in fixtures(step) {
        let before = t1_axis_values(&m.bset.cloud, 4.0 * step);
        let after = t1_axis_values(&m.cloud, 4.0 * step);
        assert!(!before.is_empty());
        assert_eq!(before, after, "{name}");
        for &(a, b) in &m.bset.contact {
            assert!(before.iter().any(|&t| a - 1e-12 <= t && t <= b + 1e-12), "{name}: contact [{a}, {b}] not in T_1");
        }
    }
}

#[test]
fn midpoint_reach_is_stable_under_refinement() {
    let h_min = 0.2;
    let parabola: Vec<f64> = [0.02, 0.01]
        .iter()
        .map(|&s| midpoint_reach(&make_bset(&parabola_bset(1.0), s, 2).unwrap().cloud, h_min).unwrap().value)
        .collect();
    let two: Vec<f64> = [0.02, 0.01]
        .iter()
        .map(|&s| midpoint_reach(&fixtures(s)[1].1.cloud, h_min).unwrap().value)
        .collect();
    for v in [parabola, two] {
        assert!(v[0] > 0.0 && v[0].is_finite());
        assert!(v[0].max(v[1]) <= 1.1 * v[0].min(v[1]), "{v:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multirotation_preserves_norm_and_axis(seed in any::<u64>(), dim in 3usize..6) {
        let spec = random_spec(seed, dim);
        let mut r = rng(seed ^ 0x5eed);
        let pts: Vec<_> = (0..50).map(|_| gaussian_point(&mut r, dim) * 2.0).collect();
        let cloud = PointCloud::new(dim, pts).unwrap();
        let out = apply_multirotation(&spec, &cloud).unwrap();
        for (p, q) in cloud.points().iter().zip(out.points()) {
            prop_assert!((p.norm() - q.norm()).abs() <= 1e-12 * p.norm().max(1.0));
            prop_assert_eq!(p[0], q[0]);
            if spec.component_of(p[0]).is_none() {
                prop_assert_eq!(p, q);
            }
        }
    }

    #[test]
    fn multirotation_is_an_isometry_on_each_component(seed in any::<u64>()) {
        let spec = random_spec(seed, 4);
        let mut r = rng(seed);
        let x = gaussian_point(&mut r, 4);
        let mut y = gaussian_point(&mut r, 4);
        y[0] = x[0];
        let (fx, fy) = (spec.apply_point(&x).unwrap(), spec.apply_point(&y).unwrap());
        prop_assert!(((&fx - &fy).norm() - (&x - &y).norm()).abs() <= 1e-12 * (&x - &y).norm().max(1.0));
    }
}
