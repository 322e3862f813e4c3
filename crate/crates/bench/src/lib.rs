//! Fixtures shared by the benchmarks.

use konvex_core::{ConvexPolygon, Point, Polyline};

/// Regular `n`-gon of circumradius 1.
pub fn regular_polygon(n: usize) -> ConvexPolygon {
    let coords: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect();
    ConvexPolygon::from_f64(&coords).expect("regular polygon is strictly convex")
}

/// Deterministic zigzag with `n` vertices inside the unit square.
pub fn zigzag(n: usize) -> Polyline {
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let x = i as f64 / (n - 1) as f64;
            let y = if i % 2 == 0 { 0.1 } else { 0.9 } + 0.01 * ((i * 7) % 5) as f64;
            Point::new(x, y)
        })
        .collect();
    Polyline::open(pts).expect("distinct vertices")
}
