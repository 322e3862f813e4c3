use serde::{Deserialize, Serialize};

use super::predicates::{cross, orientation, Orientation};
use super::{Point, Polyline};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Containment {
    Interior,
    Boundary,
    Exterior,
}

/// A strictly convex polygon: counterclockwise ring, every vertex a strict left turn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct ConvexPolygon {
    ring: Vec<Point>,
}

impl TryFrom<Vec<Point>> for ConvexPolygon {
    type Error = Error;
    fn try_from(ring: Vec<Point>) -> Result<Self> {
        ConvexPolygon::new(ring)
    }
}

impl From<ConvexPolygon> for Vec<Point> {
    fn from(k: ConvexPolygon) -> Self {
        k.ring
    }
}

impl ConvexPolygon {
    /// Validates the ring. Collinear triples are rejected, not repaired.
    pub fn new(ring: Vec<Point>) -> Result<Self> {
        let n = ring.len();
        if n < 3 {
            return Err(Error::TooFewVertices { min: 3, got: n });
        }
        for i in 0..n {
            let (a, b, c) = (&ring[(i + n - 1) % n], &ring[i], &ring[(i + 1) % n]);
            if orientation(a, b, c) != Orientation::Left {
                return Err(Error::NotStrictlyConvex { index: i });
            }
        }
        // Left turns everywhere still admit rings that wind twice (pentagrams);
        // the fan around vertex 0 must be angularly sorted as well.
        for i in 1..n - 1 {
            if orientation(&ring[0], &ring[i], &ring[i + 1]) != Orientation::Left {
                return Err(Error::NotStrictlyConvex { index: i });
            }
        }
        Ok(ConvexPolygon { ring })
    }

    pub fn from_f64(coords: &[(f64, f64)]) -> Result<Self> {
        let ring = coords
            .iter()
            .map(|&(x, y)| Point::try_from_f64(x, y))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring)
    }

    pub fn unit_square() -> Self {
        Self::from_f64(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]).expect("unit square")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.ring[i % self.ring.len()]
    }

    /// The boundary as a closed polyline.
    pub fn boundary(&self) -> Polyline {
        Polyline::closed(self.ring.clone()).expect("convex ring is a valid closed polyline")
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.ring.len();
        (0..n).map(|i| self.ring[i].dist(&self.ring[(i + 1) % n])).sum()
    }

    pub fn area(&self) -> f64 {
        let n = self.ring.len();
        let o = self.ring[0];
        (1..n - 1)
            .map(|i| cross(&o, &self.ring[i], &self.ring[i + 1]) as f64)
            .sum::<f64>()
            * 0.5e-18
    }

    /// Area centroid in real coordinates.
    pub fn centroid(&self) -> (f64, f64) {
        let n = self.ring.len();
        let (ox, oy) = self.ring[0].to_f64();
        let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for i in 1..n - 1 {
            let (bx, by) = self.ring[i].to_f64();
            let (qx, qy) = self.ring[i + 1].to_f64();
            let w = ((bx - ox) * (qy - oy) - (by - oy) * (qx - ox)) * 0.5;
            a += w;
            cx += w * (ox + bx + qx) / 3.0;
            cy += w * (oy + by + qy) / 3.0;
        }
        (cx / a, cy / a)
    }

    /// Diameter by rotating calipers: distance and a realizing vertex pair.
    pub fn diameter(&self) -> (f64, Point, Point) {
        let (d2, a, b) = self.diameter_squared_units();
        ((d2 as f64).sqrt() * 1e-9, a, b)
    }

    /// Exact squared diameter in grid units squared, by rotating calipers.
    pub fn diameter_squared_units(&self) -> (i128, Point, Point) {
        let p = &self.ring;
        let n = p.len();
        let edge_vs = |i: usize, j: usize| -> i128 {
            // cross of edge i with edge j; > 0 while vertex j+1 is farther from edge i
            let (a, b) = (&p[i % n], &p[(i + 1) % n]);
            let (c, d) = (&p[j % n], &p[(j + 1) % n]);
            let ex = b.x_units() as i128 - a.x_units() as i128;
            let ey = b.y_units() as i128 - a.y_units() as i128;
            let fx = d.x_units() as i128 - c.x_units() as i128;
            let fy = d.y_units() as i128 - c.y_units() as i128;
            ex * fy - ey * fx
        };
        let mut best = (0i128, p[0], p[1]);
        let mut consider = |a: &Point, b: &Point| {
            let d = a.dist2_units(b);
            if d > best.0 {
                best = (d, *a, *b);
            }
        };
        let mut j = 1usize;
        for i in 0..n {
            let mut guard = 0;
            while edge_vs(i, j) > 0 && guard < n {
                j += 1;
                guard += 1;
            }
            let (a, b) = (p[i], p[(i + 1) % n]);
            let (c, d) = (p[j % n], p[(j + 1) % n]);
            consider(&a, &c);
            consider(&b, &c);
            consider(&a, &d);
            consider(&b, &d);
        }
        best
    }

    /// Length of the projection onto direction `angle` (radians).
    pub fn width(&self, angle: f64) -> f64 {
        self.width_along(angle.cos(), angle.sin())
    }

    /// Width along a unit direction.
    pub fn width_along(&self, ux: f64, uy: f64) -> f64 {
        let (lo, hi) = self.ring.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            let t = ux * v.x() + uy * v.y();
            (lo.min(t), hi.max(t))
        });
        hi - lo
    }

    pub fn contains(&self, p: &Point) -> Containment {
        let n = self.ring.len();
        let mut on_edge = false;
        for i in 0..n {
            match orientation(&self.ring[i], &self.ring[(i + 1) % n], p) {
                Orientation::Right => return Containment::Exterior,
                Orientation::Collinear => on_edge = true,
                Orientation::Left => {}
            }
        }
        if on_edge {
            Containment::Boundary
        } else {
            Containment::Interior
        }
    }

    /// Errors with the first vertex that is exterior.
    pub fn ensure_contains(&self, points: &[Point]) -> Result<()> {
        match points.iter().position(|p| self.contains(p) == Containment::Exterior) {
            Some(index) => Err(Error::NotContained { index }),
            None => Ok(()),
        }
    }

    /// Minimum distance from an interior point to the edge lines.
    pub fn inradius_about(&self, (cx, cy): (f64, f64)) -> f64 {
        let n = self.ring.len();
        (0..n)
            .map(|i| {
                let (ax, ay) = self.ring[i].to_f64();
                let (bx, by) = self.ring[(i + 1) % n].to_f64();
                let (ex, ey) = (bx - ax, by - ay);
                ((cx - ax) * ey - (cy - ay) * ex).abs() / ex.hypot(ey)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Perimeter of a convex polygon.
pub fn perimeter(k: &ConvexPolygon) -> f64 {
    k.perimeter()
}

/// Brute-force diameter over all vertex pairs.
pub fn diameter_brute_force(points: &[Point]) -> i128 {
    let mut best = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.max(points[i].dist2_units(&points[j]));
        }
    }
    best
}

/// Convex hull by monotone chain; collinear boundary points are dropped.
pub fn convex_hull(points: &[Point]) -> Result<ConvexPolygon> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::Degenerate);
    }
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && orientation(&hull[hull.len() - 2], &hull[hull.len() - 1], p)
                    != Orientation::Left
            {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::Degenerate);
    }
    ConvexPolygon::new(hull)
}
