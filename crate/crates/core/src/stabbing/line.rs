use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{Orientation, Point};

/// An oriented straight line through two grid points.
///
/// Stored exactly as `a x + b y = c` in grid units, where `(a, b)` is the left
/// normal of `p -> q`. Side tests and intersection orderings are exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Line {
    p: Point,
    q: Point,
    a: i64,
    b: i64,
    c: i128,
}

impl Line {
    pub fn through(p: Point, q: Point) -> Result<Self> {
        if p == q {
            return Err(Error::InvalidParameter(
                "a line needs two distinct points".into(),
            ));
        }
        let a = p.y_units() - q.y_units();
        let b = q.x_units() - p.x_units();
        let c = a as i128 * p.x_units() as i128 + b as i128 * p.y_units() as i128;
        Ok(Line { p, q, a, b, c })
    }

    /// The line `nx x + ny y = offset`, pinned by two grid points at distance
    /// `reach` on either side of the foot of the perpendicular from `near`.
    pub fn from_normal_offset(
        nx: f64,
        ny: f64,
        offset: f64,
        near: (f64, f64),
        reach: f64,
    ) -> Result<Self> {
        let len = nx.hypot(ny);
        if !(len > 0.0) || !offset.is_finite() {
            return Err(Error::InvalidParameter("degenerate line normal".into()));
        }
        let (nx, ny, offset) = (nx / len, ny / len, offset / len);
        let shift = offset - (nx * near.0 + ny * near.1);
        let (fx, fy) = (near.0 + shift * nx, near.1 + shift * ny);
        // direction is the normal turned clockwise so that (nx, ny) is its left normal
        let (dx, dy) = (ny, -nx);
        Line::through(
            Point::try_from_f64(fx - reach * dx, fy - reach * dy)?,
            Point::try_from_f64(fx + reach * dx, fy + reach * dy)?,
        )
    }

    /// The line through grid point `p` with direction `(dx, dy)`.
    pub fn through_with_direction(p: Point, dx: f64, dy: f64, reach: f64) -> Result<Self> {
        let len = dx.hypot(dy);
        Line::through(
            p,
            Point::try_from_f64(p.x() + reach * dx / len, p.y() + reach * dy / len)?,
        )
    }

    pub fn points(&self) -> (Point, Point) {
        (self.p, self.q)
    }

    /// Signed side value in grid units squared; positive on the left.
    #[inline]
    pub fn side_value(&self, r: &Point) -> i128 {
        self.a as i128 * r.x_units() as i128 + self.b as i128 * r.y_units() as i128 - self.c
    }

    #[inline]
    pub(crate) fn coefficients_f64(&self) -> (f64, f64, f64) {
        (self.a as f64, self.b as f64, self.c as f64)
    }

    pub fn side(&self, r: &Point) -> Orientation {
        match self.side_value(r).signum() {
            1 => Orientation::Left,
            -1 => Orientation::Right,
            _ => Orientation::Collinear,
        }
    }

    /// Exact coordinate along the line direction `(b, -a)`.
    #[inline]
    pub(crate) fn along(&self, r: &Point) -> i128 {
        self.b as i128 * r.x_units() as i128 - self.a as i128 * r.y_units() as i128
    }

    /// Unit normal.
    pub fn normal(&self) -> (f64, f64) {
        let (a, b) = (self.a as f64, self.b as f64);
        let n = a.hypot(b);
        (a / n, b / n)
    }

    /// Offset `c` of `nx x + ny y = c` with the unit normal, in real units.
    pub fn offset(&self) -> f64 {
        let n = (self.a as f64).hypot(self.b as f64);
        self.c as f64 / n * 1e-9
    }

    /// Real point on the line at exact along-coordinate approximated by `t`.
    pub(crate) fn point_at(&self, t: f64) -> (f64, f64) {
        let (a, b, c) = (self.a as f64, self.b as f64, self.c as f64);
        let n2 = a * a + b * b;
        (
            (a * c + b * t) / n2 * 1e-9,
            (b * c - a * t) / n2 * 1e-9,
        )
    }

    /// Applies an exact point map to both defining points.
    pub fn map_points(&self, f: impl Fn(&Point) -> Result<Point>) -> Result<Self> {
        Line::through(f(&self.p)?, f(&self.q)?)
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (nx, ny) = self.normal();
        write!(
            f,
            "Line({nx} x + {ny} y = {} through {:?} {:?})",
            self.offset(),
            self.p,
            self.q
        )
    }
}

#[derive(Serialize, Deserialize)]
struct LineDoc {
    // informational; the line is rebuilt from `p` and `q`
    #[serde(default)]
    nx: String,
    #[serde(default)]
    ny: String,
    #[serde(default)]
    c: String,
    p: Point,
    q: Point,
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (nx, ny) = self.normal();
        LineDoc {
            nx: nx.to_string(),
            ny: ny.to_string(),
            c: self.offset().to_string(),
            p: self.p,
            q: self.q,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Line {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = LineDoc::deserialize(d)?;
        Line::through(doc.p, doc.q).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_of_horizontal_line() {
        let l = Line::through(Point::new(0., 0.5), Point::new(2., 0.5)).unwrap();
        let (nx, ny) = l.normal();
        assert_eq!((nx, ny), (0.0, 1.0));
        assert!((l.offset() - 0.5).abs() < 1e-15);
        assert_eq!(l.side(&Point::new(1., 1.)), Orientation::Left);
        assert_eq!(l.side(&Point::new(7., 0.5)), Orientation::Collinear);
    }

    #[test]
    fn from_normal_offset_reproduces_form() {
        let l = Line::from_normal_offset(1.0, 0.0, 0.05, (0.5, 0.5), 3.0).unwrap();
        assert_eq!(l.side(&Point::new(0.05, 123.0)), Orientation::Collinear);
        assert_eq!(l.normal(), (1.0, 0.0));
        let l = Line::from_normal_offset(3.0, 4.0, 5.0, (0.0, 0.0), 2.0).unwrap();
        let (nx, ny) = l.normal();
        assert!((nx - 0.6).abs() < 1e-9 && (ny - 0.8).abs() < 1e-9);
        assert!((l.offset() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let l = Line::through(Point::new(0.1, 0.2), Point::new(-3.0, 7.25)).unwrap();
        let s = serde_json::to_string(&l).unwrap();
        assert!(s.contains("\"nx\":\"") && s.contains("\"c\":\""));
        let back: Line = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn rejects_coincident_points() {
        assert!(Line::through(Point::new(1., 1.), Point::new(1., 1.)).is_err());
    }
}
