mod common;

use std::f64::consts::PI;

use common::*;
use rand::Rng;
use reachkit_core::generators::bset::{make_bset, parabola_bset};
use reachkit_core::generators::canonical::{canonical, Canonical};
use reachkit_core::simplex::related;
use reachkit_core::whitney::tdmnapl_data_with_field;
use reachkit_core::{
    empirical_lipschitz, estimate_all, federer_reach, gap_distance, operator_norm, paper_constant, stratify, tdmnapl_data,
    whitney_check, Matrix, PaperConstant, Point, Subspace, TangentParams,
};

/// The definition, evaluated pair by pair without shortcuts.
fn brute_force(domain: &[Point], f: &[Point], phi: &[Matrix]) -> f64 {
    let mut c = 0.0f64;
    for i in 0..domain.len() {
        for j in 0..domain.len() {
            if i != j {
                let dist = (&domain[j] - &domain[i]).norm();
                c = c.max(operator_norm(&(&phi[j] - &phi[i])) / dist);
                c = c.max((&f[j] - &f[i] - &phi[i] * (&domain[j] - &domain[i])).norm() / (dist * dist));
            }
        }
    }
    c
}

fn random_data(seed: u64, len: usize, m: usize, n: usize) -> (Vec<Point>, Vec<Point>, Vec<Matrix>) {
    let mut r = rng(seed);
    let domain = (0..len).map(|_| gaussian_point(&mut r, m)).collect();
    let f = (0..len).map(|_| gaussian_point(&mut r, n)).collect();
    let phi = (0..len).map(|_| Matrix::from_fn(n, m, |_, _| r.gen_range(-1.0..1.0))).collect();
    (domain, f, phi)
}

fn circle_line(t: f64) -> Subspace {
    Subspace::span(2, &[pt(&[-t.sin(), t.cos()])]).unwrap()
}

fn sphere_plane(p: &Point) -> Subspace {
    let n = p / p.norm();
    let seed = if n[0].abs() < 0.9 { pt(&[1.0, 0.0, 0.0]) } else { pt(&[0.0, 1.0, 0.0]) };
    let u = &seed - &n * n.dot(&seed);
    let v = n.cross(&u);
    Subspace::span(3, &[u, v]).unwrap()
}

#[test]
fn squares_on_three_points() {
    let domain: Vec<Point> = [0.0, 1.0, 2.0].iter().map(|&x| pt(&[x])).collect();
    let f: Vec<Point> = [0.0, 1.0, 4.0].iter().map(|&x| pt(&[x])).collect();
    let phi: Vec<Matrix> = [0.0, 2.0, 4.0].iter().map(|&x| Matrix::from_element(1, 1, x)).collect();
    let w = whitney_check(&domain, &f, &phi).unwrap();
    assert_eq!(w.c, 2.0);
    assert_eq!(w.c2, 1.0);
}

#[test]
fn checker_matches_the_definition() {
    for seed in 0..40 {
        let (m, n) = (1 + seed as usize % 3, 1 + (seed as usize / 3) % 3);
        let (domain, f, phi) = random_data(seed, 30, m, n);
        let w = whitney_check(&domain, &f, &phi).unwrap();
        assert!((w.c - brute_force(&domain, &f, &phi)).abs() <= 1e-12 * w.c.max(1.0));
    }
}

#[test]
fn checker_is_monotone_in_the_domain() {
    let (domain, f, phi) = random_data(7, 60, 2, 2);
    let mut last = 0.0;
    for len in 1..=domain.len() {
        let c = whitney_check(&domain[..len], &f[..len], &phi[..len]).unwrap().c;
        assert!(c >= last);
        last = c;
    }
}

#[test]
fn circle_tangent_field_with_analytic_lines() {
    let n = 256;
    let ts: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
    let pts: Vec<Point> = ts.iter().map(|t| pt(&[t.cos(), t.sin()])).collect();
    let lines: Vec<Subspace> = ts.iter().map(|&t| circle_line(t)).collect();
    let l = empirical_lipschitz(&pts, &lines, 0.0).unwrap();
    let bound = paper_constant(PaperConstant::Psi1Bound, 1, 0.0, 1.0).unwrap();
    assert!(l.constant <= bound * 1.05);
    // cos(Δt/2) is largest for the nearest pair.
    assert!((l.constant - (PI / n as f64).cos()).abs() < 1e-12);
}

#[test]
fn circle_tangent_field_with_estimated_lines() {
    let cloud = canonical(&Canonical::Circle { radius: 1.0 }, 256).unwrap().cloud;
    let spans: Vec<Subspace> = estimate_all(&cloud, 0.2, 0.25).unwrap().into_iter().map(|e| e.span).collect();
    let l = empirical_lipschitz(cloud.points(), &spans, 0.1).unwrap();
    assert!(l.constant <= 1.05, "{}", l.constant);
}

#[test]
fn bset_plane_field_is_far_below_its_bound() {
    let step = 0.02;
    let cloud = make_bset(&parabola_bset(1.0), step, 2).unwrap().cloud;
    let labeled = stratify(&cloud, &TangentParams::new(4.0 * step)).unwrap();
    let labels = labeled.labels().unwrap();
    let idx: Vec<usize> = (0..cloud.len()).filter(|&i| labels[i].k == 2).collect();
    assert!(idx.len() > cloud.len() / 2);
    let est = estimate_all(&cloud, 4.0 * step, 0.25).unwrap();
    let pts: Vec<Point> = idx.iter().map(|&i| cloud.point(i).clone()).collect();
    let spans: Vec<Subspace> = idx.iter().map(|&i| est[i].span.clone()).collect();
    let l = empirical_lipschitz(&pts, &spans, 3.0 * step).unwrap();
    assert!(l.constant <= paper_constant(PaperConstant::Psi2Special, 2, 0.0, 1.0).unwrap());
}

#[test]
fn related_pairs_on_the_sphere_respect_the_plane_bound() {
    let cloud = canonical(&Canonical::Sphere { radius: 1.0 }, 400).unwrap().cloud;
    let pts = cloud.points();
    let theta = 0.1;
    let bound = paper_constant(PaperConstant::LKThetaR, 2, theta, 1.0).unwrap();
    let mut r = rng(11);
    let mut witnessed = 0;
    for _ in 0..300 {
        let i = r.gen_range(0..pts.len());
        let j = r.gen_range(0..pts.len());
        if i == j {
            continue;
        }
        let candidates: Vec<Point> = pts
            .iter()
            .filter(|p| (*p - &pts[i]).norm() < 0.5 && *p != &pts[i] && *p != &pts[j])
            .cloned()
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let rel = related(&pts[i], &pts[j], &candidates, 2, theta, 10_000).unwrap();
        if rel.related {
            witnessed += 1;
            let gap = gap_distance(&sphere_plane(&pts[i]), &sphere_plane(&pts[j])).unwrap();
            assert!(gap <= bound * (&pts[j] - &pts[i]).norm() * 1.05);
        }
    }
    assert!(witnessed > 50);
}

#[test]
fn whitney_data_on_the_circle() {
    let cloud = canonical(&Canonical::Circle { radius: 1.0 }, 256).unwrap().cloud;
    let params = TangentParams::new(0.2);
    let labeled = stratify(&cloud, &params).unwrap();
    let data = tdmnapl_data(&labeled, 1, 0.2, 0.25, None).unwrap();
    assert_eq!(data.indices.len(), 256);
    let c = whitney_check(&data.domain, &data.f, &data.phi).unwrap().c;
    let r_hat = federer_reach(&cloud, 0.2, 0.25, 0.1).unwrap().value;
    assert!(c <= 1.1 * 1f64.max(1.0 / (2.0 * r_hat)), "c = {c}, reach {r_hat}");
}

#[test]
fn whitney_data_with_analytic_circle_lines() {
    let n = 128;
    let ts: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
    let pts: Vec<Point> = ts.iter().map(|t| pt(&[t.cos(), t.sin()])).collect();
    let lines: Vec<Subspace> = ts.iter().map(|&t| circle_line(t)).collect();
    let data = tdmnapl_data_with_field(&pts, &lines, 0).unwrap();
    let c = whitney_check(&data.domain, &data.f, &data.phi).unwrap().c;
    assert!(c <= 1.1, "{c}");
}

#[test]
fn whitney_data_on_a_segment_is_flat() {
    let cloud = canonical(&Canonical::Segment { dim: 2 }, 101).unwrap().cloud;
    let labeled = stratify(&cloud, &TangentParams::new(0.04)).unwrap();
    let data = tdmnapl_data(&labeled, 1, 0.04, 0.25, None).unwrap();
    assert_eq!(data.indices.len(), 101);
    assert!(whitney_check(&data.domain, &data.f, &data.phi).unwrap().c < 1e-9);
    assert!(tdmnapl_data(&labeled, 2, 0.04, 0.25, None).is_err());
}

#[test]
fn whitney_data_on_a_disk_interior() {
    let cloud = canonical(&Canonical::Disk { radius: 1.0 }, 400).unwrap().cloud;
    let h = 0.25;
    let labeled = stratify(&cloud, &TangentParams::new(h)).unwrap();
    let data = tdmnapl_data(&labeled, 2, h, 0.25, None).unwrap();
    let spans: Vec<Subspace> = estimate_all(&cloud, h, 0.25).unwrap().into_iter().map(|e| e.span).collect();
    let field: Vec<Subspace> = data.indices.iter().map(|&i| spans[i].clone()).collect();
    let l = empirical_lipschitz(&data.domain, &field, 0.0).unwrap().constant;
    let c = whitney_check(&data.domain, &data.f, &data.phi).unwrap().c;
    let r_hat = federer_reach(&cloud, h, 0.25, 0.1).unwrap().value;
    assert!(c <= l.max(1.0 / (2.0 * r_hat)) * 1.05 + 1e-12, "c = {c}, L = {l}, reach {r_hat}");
}

#[test]
fn constant_spot_values() {
    assert_eq!(paper_constant(PaperConstant::LKThetaR, 2, 0.25, 1.0).unwrap(), 8.0);
    assert_eq!(paper_constant(PaperConstant::LTildeKThetaR, 2, 0.25, 1.0).unwrap(), 8192.0);
    assert!((paper_constant(PaperConstant::Psi2Special, 2, 0.0, 2.0).unwrap() - 2048.0 * PI).abs() < 1e-9);
    assert!(paper_constant(PaperConstant::Psi1Bound, 2, 0.0, 1.0).is_err());
}
