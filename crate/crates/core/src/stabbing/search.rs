//! Searching the space of lines for the most components.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::count::{count_components, report_with_method, Method, MultiplicityReport, Scratch};
use super::Line;
use crate::error::{Error, Result};
use crate::geometry::{bounds_of, Point, Polyline, MAX_UNITS};

/// Directions per vertex fan.
pub const FAN_DIRECTIONS: usize = 360;

/// Relative size of the perturbations around vertex-pair lines.
pub const PERTURBATION: f64 = 1e-7;

struct Frame {
    center: (f64, f64),
    reach: f64,
    delta: f64,
}

impl Frame {
    fn new(points: &[Point]) -> Result<Self> {
        let (x0, y0, x1, y1) = bounds_of(points);
        let diag = (x1 - x0).hypot(y1 - y0).max(1e-6);
        let reach = 2.0 * diag;
        let extent = x0.abs().max(x1.abs()).max(y0.abs()).max(y1.abs()) + 2.0 * reach;
        if extent * 1e9 >= MAX_UNITS as f64 {
            return Err(Error::CoordinateRange(format!("{extent}")));
        }
        Ok(Frame {
            center: ((x0 + x1) / 2.0, (y0 + y1) / 2.0),
            reach,
            // at least 50 grid steps so snapping cannot undo the perturbation
            delta: (PERTURBATION * diag).max(5e-8),
        })
    }

    fn snap(&self, x: f64, y: f64) -> Point {
        Point::try_from_f64(x, y).expect("frame keeps far points in range")
    }

    /// Line through real point `(px, py)` with unit direction `(dx, dy)`.
    fn line(&self, (px, py): (f64, f64), (dx, dy): (f64, f64)) -> Line {
        let r = self.reach;
        Line::through(self.snap(px - r * dx, py - r * dy), self.snap(px + r * dx, py + r * dy))
            .expect("distinct far points")
    }

    fn ray(&self, p: Point, (dx, dy): (f64, f64)) -> Line {
        Line::through(p, self.snap(p.x() + self.reach * dx, p.y() + self.reach * dy))
            .expect("distinct far points")
    }
}

fn rotate((x, y): (f64, f64), t: f64) -> (f64, f64) {
    let (s, c) = t.sin_cos();
    (c * x - s * y, s * x + c * y)
}

/// The line through `p`, `q` and its eight perturbations: two translations,
/// two rotations about the midpoint and two about each endpoint.
fn pair_candidates(frame: &Frame, p: Point, q: Point) -> [Line; 9] {
    let (px, py) = p.to_f64();
    let (qx, qy) = q.to_f64();
    let len = (qx - px).hypot(qy - py);
    let d = ((qx - px) / len, (qy - py) / len);
    let n = (-d.1, d.0);
    let m = ((px + qx) / 2.0, (py + qy) / 2.0);
    let delta = frame.delta;
    let mid_turn = (2.0 * delta / len).min(1e-3);
    let end_turn = (delta / len).min(1e-3);
    [
        Line::through(p, q).expect("distinct vertices"),
        frame.line((m.0 + delta * n.0, m.1 + delta * n.1), d),
        frame.line((m.0 - delta * n.0, m.1 - delta * n.1), d),
        frame.line(m, rotate(d, mid_turn)),
        frame.line(m, rotate(d, -mid_turn)),
        frame.ray(p, rotate(d, end_turn)),
        frame.ray(p, rotate(d, -end_turn)),
        frame.ray(q, rotate((-d.0, -d.1), end_turn)),
        frame.ray(q, rotate((-d.0, -d.1), -end_turn)),
    ]
}

fn unique_vertices(poly: &Polyline) -> Vec<Point> {
    let mut v = poly.vertices().to_vec();
    v.sort();
    v.dedup();
    v
}

/// Candidate key for deterministic tie-breaking: (vertex, partner or fan slot, variant).
type Key = (usize, usize, usize);

#[derive(Clone, Copy)]
struct Best {
    count: usize,
    key: Key,
    line: Option<Line>,
}

impl Best {
    fn none() -> Self {
        Best {
            count: 0,
            key: (usize::MAX, usize::MAX, usize::MAX),
            line: None,
        }
    }

    fn offer(&mut self, count: usize, key: Key, line: Line) {
        if count > self.count || (count == self.count && key < self.key) || self.line.is_none() {
            *self = Best {
                count,
                key,
                line: Some(line),
            };
        }
    }

    fn better(self, other: Best) -> Best {
        match (self.line, other.line) {
            (None, _) => other,
            (_, None) => self,
            _ if other.count > self.count || (other.count == self.count && other.key < self.key) => other,
            _ => self,
        }
    }
}

/// Every candidate line anchored at unique vertex `i`.
fn for_each_candidate(
    frame: &Frame,
    verts: &[Point],
    i: usize,
    mut f: impl FnMut(Key, Line) -> bool,
) {
    for j in i + 1..verts.len() {
        for (v, line) in pair_candidates(frame, verts[i], verts[j]).into_iter().enumerate() {
            if !f((i, j, v), line) {
                return;
            }
        }
    }
    for k in 0..FAN_DIRECTIONS {
        let t = std::f64::consts::PI * k as f64 / FAN_DIRECTIONS as f64;
        if !f((i, verts.len() + k, 0), frame.ray(verts[i], (t.cos(), t.sin()))) {
            return;
        }
    }
}

/// Maximum multiplicity over the candidate family: all vertex-pair lines, their
/// small perturbations, and a fan of directions through every vertex.
pub fn max_line_multiplicity(poly: &Polyline) -> Result<MultiplicityReport> {
    let verts = unique_vertices(poly);
    if verts.len() < 2 {
        return Err(Error::TooFewVertices {
            min: 2,
            got: verts.len(),
        });
    }
    let frame = Frame::new(&verts)?;
    let pts = poly.vertices();
    let closed = poly.is_closed();
    let best = (0..verts.len())
        .into_par_iter()
        .map_init(Scratch::default, |scratch, i| {
            let mut best = Best::none();
            for_each_candidate(&frame, &verts, i, |key, line| {
                let c = count_components(&line, pts, closed, scratch);
                best.offer(c, key, line);
                true
            });
            best
        })
        .reduce(Best::none, Best::better);
    let line = best.line.expect("at least one candidate");
    Ok(report_with_method(&line, poly, Method::Enumeration))
}

/// Whether some candidate line meets `poly` in at least `cap` components.
/// Stops at the first such line.
pub(crate) fn multiplicity_reaches(poly: &Polyline, cap: usize) -> Result<Option<Line>> {
    let verts = unique_vertices(poly);
    if verts.len() < 2 {
        return Err(Error::TooFewVertices {
            min: 2,
            got: verts.len(),
        });
    }
    let frame = Frame::new(&verts)?;
    let mut scratch = Scratch::default();
    let mut found = None;
    for i in 0..verts.len() {
        for_each_candidate(&frame, &verts, i, |_, line| {
            if count_components(&line, poly.vertices(), poly.is_closed(), &mut scratch) >= cap {
                found = Some(line);
                false
            } else {
                true
            }
        });
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

/// Maximum multiplicity over `trials` random lines: direction uniform on the
/// half circle, offset uniform over the projected bounding box. Deterministic
/// for a given seed.
pub fn random_line_oracle(poly: &Polyline, trials: usize, seed: u64) -> Result<MultiplicityReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("oracle needs at least one trial".into()));
    }
    let frame = Frame::new(poly.vertices())?;
    let (x0, y0, x1, y1) = poly.bounds();
    let corners = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lines: Vec<Line> = (0..trials)
        .map(|_| {
            let theta = rng.gen_range(0.0..std::f64::consts::PI);
            let (nx, ny) = (theta.cos(), theta.sin());
            let (lo, hi) = corners.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, y)| {
                let t = nx * x + ny * y;
                (lo.min(t), hi.max(t))
            });
            let c = lo + rng.gen::<f64>() * (hi - lo);
            Line::from_normal_offset(nx, ny, c, frame.center, frame.reach)
                .expect("frame keeps far points in range")
        })
        .collect();
    let pts = poly.vertices();
    let closed = poly.is_closed();
    let best = lines
        .par_iter()
        .enumerate()
        .map_init(Scratch::default, |scratch, (i, line)| {
            let mut b = Best::none();
            b.offer(count_components(line, pts, closed, scratch), (i, 0, 0), *line);
            b
        })
        .reduce(Best::none, Best::better);
    Ok(report_with_method(
        &best.line.expect("at least one trial"),
        poly,
        Method::Oracle,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexPolygon;
    use crate::stabbing::line_multiplicity;

    fn open(c: &[(f64, f64)]) -> Polyline {
        Polyline::from_f64(c, false).unwrap()
    }

    #[test]
    fn square_ring_max_is_two() {
        let sq = ConvexPolygon::unit_square().boundary();
        let r = max_line_multiplicity(&sq).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.method, Method::Enumeration);
        assert_eq!(random_line_oracle(&sq, 100_000, 7).unwrap().count, 2);
    }

    #[test]
    fn zigzag_max_is_four() {
        let zz = open(&[(0., 0.), (1., 1.), (2., 0.), (3., 1.), (4., 0.)]);
        assert_eq!(max_line_multiplicity(&zz).unwrap().count, 4);
    }

    #[test]
    fn single_segment() {
        let s = open(&[(0., 0.), (1., 2.)]);
        assert_eq!(max_line_multiplicity(&s).unwrap().count, 1);
        assert!(random_line_oracle(&s, 1000, 1).unwrap().count <= 1);
    }

    #[test]
    fn witness_replays() {
        let zz = open(&[(0., 0.), (1., 1.), (2., 0.), (3., 1.), (4., 0.), (2., 3.)]);
        for r in [max_line_multiplicity(&zz).unwrap(), random_line_oracle(&zz, 5000, 3).unwrap()] {
            assert_eq!(line_multiplicity(&r.witness, &zz).count, r.count);
        }
    }

    #[test]
    fn oracle_is_deterministic() {
        let zz = open(&[(0., 0.), (1., 1.), (2., 0.), (3., 1.), (4., 0.)]);
        let a = random_line_oracle(&zz, 2000, 11).unwrap();
        let b = random_line_oracle(&zz, 2000, 11).unwrap();
        assert_eq!(a, b);
        assert!(random_line_oracle(&zz, 0, 11).is_err());
    }

    #[test]
    fn capped_search_stops_early() {
        let zz = open(&[(0., 0.), (1., 1.), (2., 0.), (3., 1.), (4., 0.)]);
        assert!(multiplicity_reaches(&zz, 4).unwrap().is_some());
        assert!(multiplicity_reaches(&zz, 5).unwrap().is_none());
    }
}
