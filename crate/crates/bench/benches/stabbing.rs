use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use konvex_bench::{regular_polygon, zigzag};
use konvex_core::extremal::{build_extremal_curve, ConstructionParams};
use konvex_core::projections::{cauchy_width_integral, Integration};
use konvex_core::stabbing::{line_multiplicity, max_line_multiplicity, random_line_oracle};
use konvex_core::{ConvexPolygon, Line, Point};

fn multiplicity(c: &mut Criterion) {
    let zz = zigzag(200);
    let line = Line::through(Point::new(-1.0, 0.5), Point::new(2.0, 0.5)).unwrap();
    c.bench_function("line_multiplicity zigzag-200", |b| {
        b.iter(|| line_multiplicity(black_box(&line), black_box(&zz)))
    });
    let small = zigzag(40);
    c.bench_function("max_line_multiplicity zigzag-40", |b| {
        b.iter(|| max_line_multiplicity(black_box(&small)).unwrap())
    });
    c.bench_function("random_line_oracle zigzag-200 x 10k", |b| {
        b.iter(|| random_line_oracle(black_box(&zz), 10_000, 1).unwrap())
    });
}

fn metrics(c: &mut Criterion) {
    let k = regular_polygon(1000);
    c.bench_function("diameter 1000-gon", |b| b.iter(|| black_box(&k).diameter()));
    let k50 = regular_polygon(50);
    c.bench_function("cauchy quadrature 50-gon x 1e5", |b| {
        b.iter(|| cauchy_width_integral(black_box(&k50), Integration::Quadrature(100_000)).unwrap())
    });
}

fn construction(c: &mut Criterion) {
    let sq = ConvexPolygon::unit_square();
    let mut g = c.benchmark_group("construction");
    g.sample_size(10);
    g.bench_function("extremal r=3 m=64", |b| {
        b.iter(|| build_extremal_curve(&sq, &ConstructionParams::new(3, 0.3).with_samples(64)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, multiplicity, metrics, construction);
criterion_main!(benches);
