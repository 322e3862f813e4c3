//! Seeded random geometry for the falsification harness, tests and benchmarks.
//!
//! Every generator takes the caller's RNG, so a fixed seed reproduces the same
//! shapes on every platform.

use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{orientation, Containment, ConvexPolygon, Orientation, Point, Polyline};

const MAX_ATTEMPTS: usize = 1000;

fn spread_angles<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    // at least a fifth of the mean spacing between neighbours: uniform points on
    // a circle shortened by n gaps, then pushed apart by one gap each
    let min_gap = 0.2 * TAU / n as f64;
    let slack = TAU - n as f64 * min_gap;
    let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..slack)).collect();
    a.sort_by(f64::total_cmp);
    for (i, t) in a.iter_mut().enumerate() {
        *t += i as f64 * min_gap;
    }
    a
}

/// Strictly convex polygon with `n ≥ 3` vertices on a random ellipse centred
/// near the origin, with semi-axes between 0.5 and 2.
pub fn convex_polygon<R: Rng>(rng: &mut R, n: usize) -> ConvexPolygon {
    assert!(n >= 3, "a polygon needs at least 3 vertices");
    loop {
        let (a, b) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let phi: f64 = rng.gen_range(0.0..TAU);
        let (cx, cy) = (rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let (c, s) = (phi.cos(), phi.sin());
        let coords: Vec<(f64, f64)> = spread_angles(rng, n)
            .into_iter()
            .map(|t| {
                let (x, y) = (a * t.cos(), b * t.sin());
                (cx + c * x - s * y, cy + s * x + c * y)
            })
            .collect();
        if let Ok(k) = ConvexPolygon::from_f64(&coords) {
            if k.len() == n {
                return k;
            }
        }
    }
}

/// Uniform point strictly inside `body`, by rejection from its bounding box.
pub fn interior_point<R: Rng>(rng: &mut R, body: &ConvexPolygon) -> Point {
    let (x0, y0, x1, y1) = body.boundary().bounds();
    loop {
        if let Ok(p) = Point::try_from_f64(rng.gen_range(x0..=x1), rng.gen_range(y0..=y1)) {
            if body.contains(&p) == Containment::Interior {
                return p;
            }
        }
    }
}

/// Open random walk of `steps` steps strictly inside `body`. Step lengths are
/// uniform in `(0, step]`; steps that would leave the body are redrawn.
pub fn random_walk<R: Rng>(rng: &mut R, body: &ConvexPolygon, steps: usize, step: f64) -> Result<Polyline> {
    let mut pts = vec![interior_point(rng, body)];
    while pts.len() <= steps {
        let (x, y) = pts[pts.len() - 1].to_f64();
        let mut next = None;
        for _ in 0..MAX_ATTEMPTS {
            let t: f64 = rng.gen_range(0.0..TAU);
            let l = step * (1.0 - rng.gen::<f64>());
            let p = Point::try_from_f64(x + l * t.cos(), y + l * t.sin())?;
            if p != pts[pts.len() - 1] && body.contains(&p) == Containment::Interior {
                next = Some(p);
                break;
            }
        }
        match next {
            Some(p) => pts.push(p),
            None => {
                return Err(Error::InvalidParameter(format!(
                    "random walk with step {step} is stuck"
                )))
            }
        }
    }
    Polyline::open(pts)
}

/// Open polyline with `segments` segments whose vertices are uniform in the
/// square `[-scale, scale]²`.
pub fn open_polyline<R: Rng>(rng: &mut R, segments: usize, scale: f64) -> Polyline {
    loop {
        let coords: Vec<(f64, f64)> = (0..=segments)
            .map(|_| (rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
            .collect();
        if let Ok(p) = Polyline::from_f64(&coords, false) {
            if p.segment_count() == segments {
                return p;
            }
        }
    }
}

/// Whether the closed ring turns the same way at every vertex, allowing
/// straight vertices but not a ring that is straight everywhere.
pub fn turns_consistently(ring: &[Point]) -> bool {
    let n = ring.len();
    let (mut left, mut right) = (false, false);
    for i in 0..n {
        match orientation(&ring[i], &ring[(i + 1) % n], &ring[(i + 2) % n]) {
            Orientation::Left => left = true,
            Orientation::Right => right = true,
            Orientation::Collinear => {}
        }
    }
    left != right
}

/// Closed simple ring with `n ≥ 4` vertices, star-shaped about the origin and
/// guaranteed to have at least one reflex vertex.
pub fn non_convex_ring<R: Rng>(rng: &mut R, n: usize) -> Polyline {
    assert!(n >= 4, "a non-convex ring needs at least 4 vertices");
    loop {
        let angles = spread_angles(rng, n);
        if angles.windows(2).any(|w| w[1] - w[0] >= 0.45 * TAU) || angles[0] + TAU - angles[n - 1] >= 0.45 * TAU {
            // a wide angular gap lets the ring fold over the origin
            continue;
        }
        let dent = rng.gen_range(0..n);
        let coords: Vec<(f64, f64)> = angles
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let rad = if i == dent { rng.gen_range(0.1..0.3) } else { rng.gen_range(0.7..1.0) };
                (rad * t.cos(), rad * t.sin())
            })
            .collect();
        if let Ok(p) = Polyline::from_f64(&coords, true) {
            if p.vertices().len() == n && !turns_consistently(p.vertices()) {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sq = ConvexPolygon::unit_square();
        for n in [3, 5, 17, 50] {
            assert_eq!(convex_polygon(&mut rng, n).len(), n);
        }
        let walk = random_walk(&mut rng, &sq, 30, 0.3).unwrap();
        assert_eq!(walk.segment_count(), 30);
        assert!(sq.ensure_contains(walk.vertices()).is_ok());
        let ring = non_convex_ring(&mut rng, 8);
        assert!(ring.is_closed());
        assert!(!turns_consistently(ring.vertices()));
        assert!(turns_consistently(sq.vertices()));
    }

    #[test]
    fn angles_keep_their_gap_for_many_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [3, 80, 500] {
            let a = spread_angles(&mut rng, n);
            let gap = 0.2 * TAU / n as f64 - 1e-12;
            assert!(a.windows(2).all(|w| w[1] - w[0] >= gap));
            assert!(a[0] + TAU - a[n - 1] >= gap && a[n - 1] < TAU);
        }
        assert_eq!(convex_polygon(&mut rng, 300).len(), 300);
    }

    #[test]
    fn same_seed_same_shapes() {
        let a = convex_polygon(&mut ChaCha8Rng::seed_from_u64(9), 12);
        let b = convex_polygon(&mut ChaCha8Rng::seed_from_u64(9), 12);
        assert_eq!(a, b);
    }
}
