//! Connected components of `line ∩ polyline`, decided exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::Line;
use crate::geometry::{Point, Polyline};

/// Position along a line: at a grid vertex, or where a segment crosses it.
#[derive(Clone, Copy, Debug)]
enum Pos {
    At(i128),
    /// `t = (tq*sp - tp*sq) / (sp - sq)` with `sp`, `sq` of opposite sign.
    Cross { tp: i128, tq: i128, sp: i128, sq: i128 },
}

impl Pos {
    fn approx(&self) -> f64 {
        match *self {
            Pos::At(t) => t as f64,
            Pos::Cross { tp, tq, sp, sq } => {
                (tq as f64 * sp as f64 - tp as f64 * sq as f64) / (sp as f64 - sq as f64)
            }
        }
    }

    fn magnitude(&self) -> f64 {
        match *self {
            Pos::At(t) => (t as f64).abs(),
            Pos::Cross { tp, tq, .. } => (tp as f64).abs().max((tq as f64).abs()),
        }
    }

    fn exact(&self) -> (BigInt, BigInt) {
        match *self {
            Pos::At(t) => (BigInt::from(t), BigInt::from(1)),
            Pos::Cross { tp, tq, sp, sq } => {
                let num = BigInt::from(tq) * sp - BigInt::from(tp) * sq;
                let den = BigInt::from(sp) - sq;
                if den < BigInt::from(0) {
                    (-num, -den)
                } else {
                    (num, den)
                }
            }
        }
    }
}

fn cmp_pos(x: &Pos, y: &Pos) -> Ordering {
    if let (Pos::At(a), Pos::At(b)) = (x, y) {
        return a.cmp(b);
    }
    let diff = x.approx() - y.approx();
    // the float evaluation is accurate to a few ulps of the magnitude
    let tol = 1e-12 * (x.magnitude() + y.magnitude());
    if diff > tol {
        return Ordering::Greater;
    }
    if diff < -tol {
        return Ordering::Less;
    }
    let (xn, xd) = x.exact();
    let (yn, yd) = y.exact();
    (xn * yd).cmp(&(yn * xd))
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    lo: Pos,
    hi: Pos,
    first: usize,
    last: usize,
}

/// Reusable buffers for repeated counting against one polyline.
#[derive(Default)]
pub(crate) struct Scratch {
    source: (usize, usize),
    xs: Vec<f64>,
    ys: Vec<f64>,
    signs: Vec<i8>,
    pieces: Vec<Piece>,
}

impl Scratch {
    fn load(&mut self, pts: &[Point]) {
        let source = (pts.as_ptr() as usize, pts.len());
        if self.source != source || self.xs.len() != pts.len() {
            self.source = source;
            self.xs = pts.iter().map(|p| p.x_units() as f64).collect();
            self.ys = pts.iter().map(|p| p.y_units() as f64).collect();
        }
    }
}

fn collect(line: &Line, pts: &[Point], closed: bool, scratch: &mut Scratch) {
    scratch.load(pts);
    let Scratch {
        xs,
        ys,
        signs,
        pieces,
        ..
    } = scratch;
    let (a, b, c) = line.coefficients_f64();
    signs.clear();
    signs.extend(xs.iter().zip(ys.iter()).map(|(&x, &y)| {
        let (ax, by) = (a * x, b * y);
        let s = ax + by - c;
        // rounding error stays far below this bound; otherwise decide exactly
        if s.abs() > 1e-14 * (ax.abs() + by.abs() + c.abs()) {
            if s > 0.0 {
                1
            } else {
                -1
            }
        } else {
            0
        }
    }));
    for (k, g) in signs.iter_mut().enumerate() {
        if *g == 0 {
            *g = line.side_value(&pts[k]).signum() as i8;
        }
    }
    pieces.clear();
    let n = pts.len();
    let segs = if closed { n } else { n - 1 };
    for k in 0..segs {
        let j = if k + 1 == n { 0 } else { k + 1 };
        let (gp, gq) = (signs[k], signs[j]);
        if gp == 0 && gq == 0 {
            let (ta, tb) = (line.along(&pts[k]), line.along(&pts[j]));
            pieces.push(Piece {
                lo: Pos::At(ta.min(tb)),
                hi: Pos::At(ta.max(tb)),
                first: k,
                last: k,
            });
        } else if gp == 0 || gq == 0 {
            let v = if gp == 0 { k } else { j };
            let t = Pos::At(line.along(&pts[v]));
            pieces.push(Piece {
                lo: t,
                hi: t,
                first: k,
                last: k,
            });
        } else if gp != gq {
            let t = Pos::Cross {
                tp: line.along(&pts[k]),
                tq: line.along(&pts[j]),
                sp: line.side_value(&pts[k]),
                sq: line.side_value(&pts[j]),
            };
            pieces.push(Piece {
                lo: t,
                hi: t,
                first: k,
                last: k,
            });
        }
    }
    pieces.sort_unstable_by(|x, y| cmp_pos(&x.lo, &y.lo).then(x.first.cmp(&y.first)));
}

fn merge(pieces: &[Piece], mut emit: impl FnMut(Piece)) {
    let mut current: Option<Piece> = None;
    for p in pieces {
        match current.as_mut() {
            Some(c) if cmp_pos(&p.lo, &c.hi) != Ordering::Greater => {
                if cmp_pos(&p.hi, &c.hi) == Ordering::Greater {
                    c.hi = p.hi;
                }
                c.first = c.first.min(p.first);
                c.last = c.last.max(p.last);
            }
            _ => {
                if let Some(c) = current.take() {
                    emit(c);
                }
                current = Some(*p);
            }
        }
    }
    if let Some(c) = current {
        emit(c);
    }
}

pub(crate) fn count_components(
    line: &Line,
    pts: &[Point],
    closed: bool,
    scratch: &mut Scratch,
) -> usize {
    collect(line, pts, closed, scratch);
    let mut count = 0;
    merge(&scratch.pieces, |_| count += 1);
    count
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentShape {
    Point { at: (f64, f64) },
    Span { from: (f64, f64), to: (f64, f64) },
}

/// One connected piece of `line ∩ polyline`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    /// Inclusive range of segment indices contributing to the piece.
    pub segments: (usize, usize),
    pub shape: ComponentShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// A single given line.
    Direct,
    Enumeration,
    Oracle,
    WitnessSweep,
}

/// How often a line meets a polyline, with the line that realizes it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub count: usize,
    pub witness: Line,
    pub method: Method,
    pub components: Vec<Component>,
}

/// Number of connected components of `line ∩ poly`.
///
/// Overlapping collinear runs count once, transversal crossings count once,
/// touches count once, and pieces from different parts of the polyline that
/// meet at the same point merge.
pub fn line_multiplicity(line: &Line, poly: &Polyline) -> MultiplicityReport {
    report_with_method(line, poly, Method::Direct)
}

pub(crate) fn report_with_method(line: &Line, poly: &Polyline, method: Method) -> MultiplicityReport {
    let mut scratch = Scratch::default();
    collect(line, poly.vertices(), poly.is_closed(), &mut scratch);
    let mut components = Vec::new();
    merge(&scratch.pieces, |c| {
        let shape = if cmp_pos(&c.lo, &c.hi) == Ordering::Equal {
            ComponentShape::Point {
                at: line.point_at(c.lo.approx()),
            }
        } else {
            ComponentShape::Span {
                from: line.point_at(c.lo.approx()),
                to: line.point_at(c.hi.approx()),
            }
        };
        components.push(Component {
            segments: (c.first, c.last),
            shape,
        });
    });
    MultiplicityReport {
        count: components.len(),
        witness: *line,
        method,
        components,
    }
}

/// Segments crossed with a strict sign change; touches and collinear pieces excluded.
pub fn proper_crossings(line: &Line, poly: &Polyline) -> usize {
    let sides: Vec<i128> = poly.vertices().iter().map(|p| line.side_value(p)).collect();
    let n = sides.len();
    (0..poly.segment_count())
        .filter(|&k| {
            let (a, b) = (sides[k], sides[(k + 1) % n]);
            (a > 0 && b < 0) || (a < 0 && b > 0)
        })
        .count()
}
