use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use reachkit_core::generators::{canonical, make_bset, parabola_bset, Canonical};
use reachkit_core::{
    cone_distance, federer_reach, gap_distance, midpoint_reach, product_integral_atomic, AtomicIntervalFunction,
    ConvexCone, Matrix, Point, Subspace,
};

fn subspaces() -> (Subspace, Subspace) {
    let u = Subspace::span(6, &[Point::from_fn(6, |i, _| i as f64), Point::from_fn(6, |i, _| (i * i) as f64 - 3.0)]).unwrap();
    let v = Subspace::span(6, &[Point::from_fn(6, |i, _| (i as f64).sin()), Point::from_fn(6, |i, _| (i as f64).cos())]).unwrap();
    (u, v)
}

fn bench_gap(c: &mut Criterion) {
    let (u, v) = subspaces();
    c.bench_function("gap_distance G(6,2)", |b| b.iter(|| gap_distance(black_box(&u), black_box(&v)).unwrap()));
}

fn bench_cone(c: &mut Criterion) {
    let gens: Vec<Point> = (0..6)
        .map(|k| {
            let t = k as f64 * 0.4;
            Point::from_vec(vec![t.cos(), t.sin(), 0.3 * k as f64])
        })
        .collect();
    let cone = ConvexCone::new(3, gens).unwrap();
    let v = Point::from_vec(vec![-1.0, -0.5, 0.2]);
    c.bench_function("cone_distance 6 generators", |b| b.iter(|| cone_distance(black_box(&v), &cone).unwrap()));
}

fn bench_reach(c: &mut Criterion) {
    let circle = canonical(&Canonical::Circle { radius: 1.0 }, 256).unwrap().cloud;
    let bset = make_bset(&parabola_bset(1.0), 0.02, 2).unwrap().cloud;
    let mut g = c.benchmark_group("reach");
    g.sample_size(10);
    g.bench_function("federer circle 256", |b| b.iter(|| federer_reach(&circle, 0.2, 0.25, 0.1).unwrap()));
    g.bench_function("midpoint B-set step 0.02", |b| b.iter(|| midpoint_reach(&bset, 0.2).unwrap()));
    g.finish();
}

fn bench_prodint(c: &mut Criterion) {
    let jumps = (0..200)
        .map(|k| (k as f64, Matrix::from_fn(4, 4, |i, j| 0.01 * ((i * 7 + j * 3 + k) % 11) as f64 - 0.05)))
        .collect();
    let f = AtomicIntervalFunction::from_jumps(4, jumps).unwrap();
    c.bench_function("product integral 200 atoms", |b| b.iter(|| product_integral_atomic(&f, -1.0, 200.0).unwrap()));
}

criterion_group!(benches, bench_gap, bench_cone, bench_reach, bench_prodint);
criterion_main!(benches);
