use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn length(&self) -> f64 {
        self.a.dist(&self.b)
    }

    /// Real-valued direction vector `b - a`.
    pub fn delta(&self) -> (f64, f64) {
        (self.b.x() - self.a.x(), self.b.y() - self.a.y())
    }
}

/// A broken line. When `closed`, the segment from the last vertex back to the
/// first is implied and the first vertex is not repeated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPolyline")]
pub struct Polyline {
    vertices: Vec<Point>,
    closed: bool,
}

#[derive(Deserialize)]
struct RawPolyline {
    vertices: Vec<Point>,
    closed: bool,
}

impl TryFrom<RawPolyline> for Polyline {
    type Error = Error;
    fn try_from(raw: RawPolyline) -> Result<Self> {
        Polyline::new(raw.vertices, raw.closed)
    }
}

impl Polyline {
    pub fn new(vertices: Vec<Point>, closed: bool) -> Result<Self> {
        let min = if closed { 3 } else { 2 };
        if vertices.len() < min {
            return Err(Error::TooFewVertices {
                min,
                got: vertices.len(),
            });
        }
        for i in 0..vertices.len() - 1 {
            if vertices[i] == vertices[i + 1] {
                return Err(Error::RepeatedVertex {
                    index: i,
                    next: i + 1,
                });
            }
        }
        if closed && vertices[0] == vertices[vertices.len() - 1] {
            return Err(Error::RepeatedVertex {
                index: vertices.len() - 1,
                next: 0,
            });
        }
        Ok(Polyline { vertices, closed })
    }

    pub fn open(vertices: Vec<Point>) -> Result<Self> {
        Self::new(vertices, false)
    }

    pub fn closed(vertices: Vec<Point>) -> Result<Self> {
        Self::new(vertices, true)
    }

    /// Builds from real coordinates, dropping consecutive duplicates created by
    /// snapping.
    pub fn from_f64(coords: &[(f64, f64)], closed: bool) -> Result<Self> {
        let mut pts: Vec<Point> = Vec::with_capacity(coords.len());
        for &(x, y) in coords {
            let p = Point::try_from_f64(x, y)?;
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        if closed {
            while pts.len() > 1 && pts.first() == pts.last() {
                pts.pop();
            }
        }
        Self::new(pts, closed)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    pub fn segment(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment::new(self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.segment_count()).map(move |i| self.segment(i))
    }

    pub fn first(&self) -> Point {
        self.vertices[0]
    }

    pub fn last(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    /// Sum of segment lengths, including the closing segment when closed.
    pub fn length(&self) -> f64 {
        self.segments().map(|s| s.length()).sum()
    }

    /// Axis-aligned bounds `(min_x, min_y, max_x, max_y)` in real units.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        bounds_of(&self.vertices)
    }

    /// Applies `f` to every vertex, keeping the closed flag.
    pub fn map_points(&self, f: impl Fn(&Point) -> Result<Point>) -> Result<Self> {
        let v = self.vertices.iter().map(f).collect::<Result<Vec<_>>>()?;
        Polyline::new(v, self.closed)
    }
}

pub(crate) fn bounds_of(points: &[Point]) -> (f64, f64, f64, f64) {
    points.iter().fold(
        (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), p| (a.min(p.x()), b.min(p.y()), c.max(p.x()), d.max(p.y())),
    )
}

/// Length of a polyline.
pub fn polyline_length(poly: &Polyline) -> f64 {
    poly.length()
}
