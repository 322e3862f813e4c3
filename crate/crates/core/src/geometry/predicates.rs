use serde::{Deserialize, Serialize};

use super::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Exact cross product `(q - p) x (r - p)` in grid units squared.
#[inline]
pub fn cross(p: &Point, q: &Point, r: &Point) -> i128 {
    let ux = q.x_units() as i128 - p.x_units() as i128;
    let uy = q.y_units() as i128 - p.y_units() as i128;
    let vx = r.x_units() as i128 - p.x_units() as i128;
    let vy = r.y_units() as i128 - p.y_units() as i128;
    ux * vy - uy * vx
}

/// Which side of the directed line `p -> q` the point `r` lies on.
#[inline]
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    match cross(p, q, r).signum() {
        1 => Orientation::Left,
        -1 => Orientation::Right,
        _ => Orientation::Collinear,
    }
}

/// Closed-segment intersection test, exact.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = cross(a, b, c).signum();
    let o2 = cross(a, b, d).signum();
    let o3 = cross(c, d, a).signum();
    let o4 = cross(c, d, b).signum();
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

/// Assumes `r` is collinear with `p`, `q`.
fn on_segment(p: &Point, q: &Point, r: &Point) -> bool {
    p.x_units().min(q.x_units()) <= r.x_units()
        && r.x_units() <= p.x_units().max(q.x_units())
        && p.y_units().min(q.y_units()) <= r.y_units()
        && r.y_units() <= p.y_units().max(q.y_units())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_examples() {
        let o = Point::new(0.0, 0.0);
        assert_eq!(
            orientation(&o, &Point::new(1.0, 0.0), &Point::new(0.0, 1.0)),
            Orientation::Left
        );
        assert_eq!(
            orientation(&o, &Point::new(1.0, 1.0), &Point::new(2.0, 2.0)),
            Orientation::Collinear
        );
        // (1,0) x (2,-1e-9) = -1e-9 exactly
        let r = Point::parse("2", "-1e-9").unwrap();
        assert_eq!(cross(&o, &Point::new(1.0, 0.0), &r), -1_000_000_000);
        assert_eq!(
            orientation(&o, &Point::new(1.0, 0.0), &r),
            Orientation::Right
        );
    }

    #[test]
    fn extreme_coordinates_do_not_overflow() {
        let m = super::super::point::MAX_UNITS;
        let a = Point::from_units(-m, -m).unwrap();
        let b = Point::from_units(m, -m).unwrap();
        let c = Point::from_units(-m, m).unwrap();
        assert_eq!(orientation(&a, &b, &c), Orientation::Left);
        assert_eq!(orientation(&b, &c, &a), Orientation::Left);
    }

    #[test]
    fn segment_intersection_cases() {
        let p = |x, y| Point::new(x, y);
        assert!(segments_intersect(&p(0., 0.), &p(2., 2.), &p(0., 2.), &p(2., 0.)));
        assert!(segments_intersect(&p(0., 0.), &p(2., 0.), &p(1., 0.), &p(1., 1.)));
        assert!(segments_intersect(&p(0., 0.), &p(2., 0.), &p(1., 0.), &p(3., 0.)));
        assert!(!segments_intersect(&p(0., 0.), &p(1., 0.), &p(2., 0.), &p(3., 0.)));
        assert!(!segments_intersect(&p(0., 0.), &p(1., 1.), &p(0., 1.), &p(0.4, 0.6)));
    }
}
