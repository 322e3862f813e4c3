//! Curves that come within ε of the length threshold while no line meets them
//! more than `r` times.
//!
//! The curve winds `⌊r/2⌋` times around the body as a slowly widening spiral
//! of strictly convex turns sitting just inside the boundary. Each turn is one
//! nested loop, so together with the short chord back to its start it bounds a
//! convex region and no line meets it more than twice. Consecutive loops meet
//! inside one narrow sector at a diameter endpoint. For odd `r` the outermost
//! loop stops a little short and the curve finishes along a slightly bowed
//! near-diameter arc. Every
//! result is re-verified with exact predicates before it is returned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{orientation, ConvexPolygon, Orientation, Point, Polyline};
use crate::stabbing::{max_line_multiplicity, MultiplicityReport};
use crate::theorem::{check_r, s_bound};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub r: u32,
    /// Allowed length shortfall below the threshold.
    pub eps: f64,
    /// Vertices per loop.
    pub samples_per_loop: usize,
    /// Depth added per loop; derived from `eps` when absent.
    pub inset: Option<f64>,
    /// Fraction of a loop left open where the curve stops short.
    pub gap: f64,
    pub seed: u64,
    pub max_retries: u32,
}

impl ConstructionParams {
    pub fn new(r: u32, eps: f64) -> Self {
        ConstructionParams {
            r,
            eps,
            samples_per_loop: 256,
            inset: None,
            gap: 0.01,
            seed: 0,
            max_retries: 16,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, m: usize) -> Self {
        self.samples_per_loop = m;
        self
    }

    pub fn with_inset(mut self, inset: f64) -> Self {
        self.inset = Some(inset);
        self
    }

    pub fn with_retries(mut self, max_retries: u32) -> Self {
        self.max_retries = max_retries;
        self
    }

    pub fn with_gap(mut self, gap: f64) -> Self {
        self.gap = gap;
        self
    }

    /// Number of loops, `⌊r/2⌋`.
    pub fn loops(&self) -> u32 {
        self.r / 2
    }

    fn validate(&self) -> Result<()> {
        check_r(self.r)?;
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if !(self.eps > 0.0) {
            return bad("eps must be positive");
        }
        if self.samples_per_loop < 8 {
            return bad("need at least 8 samples per loop");
        }
        if !(self.gap > 0.0 && self.gap < 0.5) {
            return bad("gap must lie in (0, 0.5)");
        }
        if matches!(self.inset, Some(d) if !(d > 0.0)) {
            return bad("inset must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub curve: Polyline,
    pub achieved_length: f64,
    pub multiplicity: MultiplicityReport,
    pub target: f64,
    pub retries_used: u32,
    pub params: ConstructionParams,
    /// Index of the first vertex of each loop.
    pub loop_starts: Vec<usize>,
    /// Index where the bowed diameter arc begins (odd `r` only).
    pub arc_start: Option<usize>,
}

/// Arc-length walk around a convex polygon starting at a diameter endpoint.
pub(crate) struct BodyFrame {
    verts: Vec<(f64, f64)>,
    cum: Vec<f64>,
    perimeter: f64,
    centroid: (f64, f64),
    inradius: f64,
    max_edge: f64,
}

impl BodyFrame {
    pub(crate) fn new(body: &ConvexPolygon) -> Self {
        let (_, a, _) = body.diameter();
        let n = body.len();
        let start = body.vertices().iter().position(|v| *v == a).unwrap_or(0);
        let verts: Vec<(f64, f64)> = (0..n).map(|i| body.vertex(start + i).to_f64()).collect();
        let mut cum = vec![0.0];
        let mut max_edge: f64 = 0.0;
        for i in 0..n {
            let (p, q) = (verts[i], verts[(i + 1) % n]);
            let l = (q.0 - p.0).hypot(q.1 - p.1);
            max_edge = max_edge.max(l);
            cum.push(cum[i] + l);
        }
        let centroid = body.centroid();
        BodyFrame {
            perimeter: cum[n],
            inradius: body.inradius_about(centroid),
            verts,
            cum,
            centroid,
            max_edge,
        }
    }

    pub(crate) fn inradius(&self) -> f64 {
        self.inradius
    }

    pub(crate) fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Point at fraction `frac` of the perimeter, moved inward to distance at
    /// least `depth` from every edge line, then bulged outward by a parabola of
    /// height `bump` along its edge so consecutive samples turn strictly left.
    pub(crate) fn loop_point(&self, frac: f64, depth: f64, bump: f64) -> (f64, f64) {
        let n = self.verts.len();
        let arc = frac.rem_euclid(1.0) * self.perimeter;
        let i = match self.cum.binary_search_by(|c| c.total_cmp(&arc)) {
            Ok(i) => i.min(n - 1),
            Err(i) => i - 1,
        };
        let (p, q) = (self.verts[i], self.verts[(i + 1) % n]);
        let len = self.cum[i + 1] - self.cum[i];
        let s = ((arc - self.cum[i]) / len).clamp(0.0, 1.0);
        let b = (p.0 + s * (q.0 - p.0), p.1 + s * (q.1 - p.1));
        let lambda = 1.0 - depth / self.inradius;
        let (cx, cy) = self.centroid;
        let h = bump * 4.0 * s * (1.0 - s);
        // outward normal of a counterclockwise edge
        let (ox, oy) = ((q.1 - p.1) / len, -(q.0 - p.0) / len);
        (
            cx + lambda * (b.0 - cx) + h * ox,
            cy + lambda * (b.1 - cy) + h * oy,
        )
    }

    /// Radial jitter amplitude that cannot undo the strict left turns of the
    /// parabolic bulge at spacing `1/m`.
    pub(crate) fn safe_jitter(&self, depth: f64, bump: f64, m: usize) -> f64 {
        let h = self.perimeter / m as f64;
        (depth / 8.0).min(bump * (h / self.max_edge).powi(2))
    }

    pub(crate) fn jitter(&self, (x, y): (f64, f64), amount: f64) -> (f64, f64) {
        let (cx, cy) = self.centroid;
        let d = (x - cx).hypot(y - cy);
        (x - amount * (x - cx) / d, y - amount * (y - cy) / d)
    }
}

/// A strictly convex closed loop at distance about `depth` inside `body`.
pub fn inset_loop(body: &ConvexPolygon, depth: f64, m: usize, seed: u64) -> Result<Polyline> {
    let frame = BodyFrame::new(body);
    if !(depth > 0.0) || depth > frame.inradius / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "inset depth {depth} is too large for this body"
        )));
    }
    if m < 3 {
        return Err(Error::TooFewVertices { min: 3, got: m });
    }
    let bump = depth / 2.0;
    let base = frame.safe_jitter(depth, bump, m);
    for attempt in 0..8u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let amp = base / 2f64.powi(attempt as i32);
        let pts: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let p = frame.loop_point(k as f64 / m as f64, depth, bump);
                frame.jitter(p, amp * rng.gen::<f64>())
            })
            .collect();
        let poly = Polyline::from_f64(&pts, true)?;
        if ConvexPolygon::new(poly.vertices().to_vec()).is_ok() {
            return Ok(poly);
        }
    }
    Err(Error::InvalidParameter(format!(
        "inset loop at depth {depth} is not strictly convex"
    )))
}

/// Vertices of the widening spiral: `turns` loops of `m` samples, depth
/// shrinking linearly by `inset` per loop and ending at about `inset`.
pub(crate) fn spiral_points(
    frame: &BodyFrame,
    turns: f64,
    m: usize,
    inset: f64,
    jitter: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<(f64, f64)> {
    let total = (turns * m as f64).round() as usize;
    let bump = inset / 2.0;
    (0..=total)
        .map(|j| {
            let t = j as f64 / m as f64;
            let p = frame.loop_point(t, inset * (1.0 + turns - t), bump);
            frame.jitter(p, jitter * rng.gen::<f64>())
        })
        .collect()
}

/// Bowed arc from `from` to `to`, displaced toward `toward` by a parabola of
/// height `bow`. The last vertex is exactly `to`.
fn bowed_arc(
    from: Point,
    to: Point,
    toward: (f64, f64),
    bow: f64,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Point>> {
    let (ax, ay) = from.to_f64();
    let (bx, by) = to.to_f64();
    let len = (bx - ax).hypot(by - ay);
    let mut nrm = (-(by - ay) / len, (bx - ax) / len);
    if (toward.0 - ax) * nrm.0 + (toward.1 - ay) * nrm.1 < 0.0 {
        nrm = (-nrm.0, -nrm.1);
    }
    let mut out = vec![from];
    for k in 1..m {
        let s = (k as f64 + rng.gen_range(-0.25..0.25)) / m as f64;
        let h = 4.0 * bow * s * (1.0 - s);
        let p = Point::try_from_f64(ax + s * (bx - ax) + h * nrm.0, ay + s * (by - ay) + h * nrm.1)?;
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    out.push(to);
    Ok(out)
}

/// True when every interior vertex lies strictly on one side of the chord and
/// every turn has that same orientation, so no three vertices are collinear.
fn is_convex_arc(arc: &[Point]) -> bool {
    if arc.len() < 3 {
        return false;
    }
    let (a, b) = (arc[0], arc[arc.len() - 1]);
    let side = orientation(&a, &b, &arc[1]);
    if side == Orientation::Collinear {
        return false;
    }
    let turn = side.reversed();
    arc[1..arc.len() - 1]
        .iter()
        .all(|p| orientation(&a, &b, p) == side)
        && arc.windows(3).all(|w| orientation(&w[0], &w[1], &w[2]) == turn)
}

/// Bowed arc between the diameter endpoints of `inner`, displaced into the body.
pub fn diameter_chord_arc(inner: &ConvexPolygon, bow: f64, m: usize, seed: u64) -> Result<Polyline> {
    if !(bow > 0.0) {
        return Err(Error::InvalidParameter("bow must be positive".into()));
    }
    if m < 2 {
        return Err(Error::TooFewVertices { min: 2, got: m });
    }
    let (_, a, b) = inner.diameter();
    let (ax, ay) = a.to_f64();
    let (bx, by) = b.to_f64();
    // bow to the left of a -> b
    let toward = ((ax + bx) / 2.0 - (by - ay), (ay + by) / 2.0 + (bx - ax));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arc = bowed_arc(a, b, toward, bow, m, &mut rng)?;
    if inner.ensure_contains(&arc).is_err() {
        return Err(Error::InvalidParameter(format!(
            "bow {bow} pushes the arc outside the body"
        )));
    }
    if !is_convex_arc(&arc) {
        return Err(Error::InvalidParameter(format!(
            "bow {bow} is too small to keep the arc strictly convex"
        )));
    }
    Polyline::open(arc)
}

pub(crate) struct Candidate {
    pub(crate) curve: Polyline,
    pub(crate) loop_starts: Vec<usize>,
    pub(crate) arc_start: Option<usize>,
}

fn default_inset(frame: &BodyFrame, params: &ConstructionParams) -> f64 {
    let n = params.loops() as f64;
    // loop i sits at average depth (i + 1.5) * inset and loses perimeter * depth / inradius
    let budget = params.eps / 2.0;
    let derived = budget * frame.inradius() / (frame.perimeter() * n * (n + 2.0) / 2.0);
    derived.min(frame.inradius() / (4.0 * (n + 1.0)))
}

pub(crate) fn candidate(
    frame: &BodyFrame,
    params: &ConstructionParams,
    m: usize,
    inset: f64,
    gap: f64,
    jitter_scale: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Candidate>> {
    let n = params.loops() as usize;
    let jitter = jitter_scale * frame.safe_jitter(inset, inset / 2.0, m);
    let raw = spiral_points(frame, n as f64 - gap, m, inset, jitter, rng);
    let mut pts: Vec<Point> = Vec::with_capacity(raw.len() + m);
    let mut index_of = Vec::with_capacity(raw.len());
    for (x, y) in raw {
        let p = Point::try_from_f64(x, y)?;
        if pts.last() != Some(&p) {
            pts.push(p);
        }
        index_of.push(pts.len() - 1);
    }
    let loop_starts: Vec<usize> = (0..n).map(|i| index_of[i * m]).collect();
    let mut arc_start = None;
    if params.r % 2 == 1 {
        let s = loop_starts[n - 1];
        let start = pts[s];
        let end = *pts.last().expect("nonempty spiral");
        let far = pts[s..]
            .iter()
            .copied()
            .max_by_key(|p| p.dist2_units(&start))
            .expect("last loop has vertices");
        let (sx, sy) = start.to_f64();
        let (ex, ey) = end.to_f64();
        let (fx, fy) = far.to_f64();
        let chord = (fx - ex).hypot(fy - ey);
        let height = ((fx - ex) * (sy - ey) - (fy - ey) * (sx - ex)).abs() / chord;
        let arc = bowed_arc(end, far, (sx, sy), height / 8.0, (m / 4).max(8), rng)?;
        if !is_convex_arc(&arc) || !arc_in_triangle(&arc, start, far, end) {
            return Ok(None);
        }
        arc_start = Some(pts.len() - 1);
        pts.extend_from_slice(&arc[1..]);
    }
    Ok(Some(Candidate {
        curve: Polyline::open(pts)?,
        loop_starts,
        arc_start,
    }))
}

fn arc_in_triangle(arc: &[Point], a: Point, b: Point, c: Point) -> bool {
    let tri = match ConvexPolygon::new(vec![a, b, c]).or_else(|_| ConvexPolygon::new(vec![a, c, b])) {
        Ok(t) => t,
        Err(_) => return false,
    };
    arc[1..arc.len() - 1]
        .iter()
        .all(|p| tri.contains(p) == crate::geometry::Containment::Interior)
}

fn build(body: &ConvexPolygon, params: &ConstructionParams) -> Result<ConstructionResult> {
    params.validate()?;
    let target = s_bound(body, params.r)?;
    let frame = BodyFrame::new(body);
    let mut inset = params.inset.unwrap_or_else(|| default_inset(&frame, params));
    let mut m = params.samples_per_loop;
    let mut gap = params.gap;
    let mut jitter_scale = 1.0;
    let mut last_failure = String::from("no attempt made");
    let mut last_report = None;
    for attempt in 0..=params.max_retries {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(attempt as u64);
        let cand = match candidate(&frame, params, m, inset, gap, jitter_scale, &mut rng)? {
            Some(c) => c,
            None => {
                last_failure = "diameter arc is not strictly convex".into();
                gap *= 1.5;
                jitter_scale /= 2.0;
                continue;
            }
        };
        body.ensure_contains(cand.curve.vertices())?;
        let achieved = cand.curve.length();
        if achieved < target - params.eps {
            last_failure = format!("length {achieved} below {}", target - params.eps);
            inset /= 2.0;
            gap = (gap / 2.0).max(1.0 / m as f64);
            m += m / 2;
            continue;
        }
        let report = max_line_multiplicity(&cand.curve)?;
        if report.count > params.r as usize {
            last_failure = format!("a line meets the curve {} times", report.count);
            last_report = Some(Box::new(report));
            jitter_scale /= 2.0;
            gap *= 1.5;
            continue;
        }
        return Ok(ConstructionResult {
            curve: cand.curve,
            achieved_length: achieved,
            multiplicity: report,
            target,
            retries_used: attempt,
            params: params.clone(),
            loop_starts: cand.loop_starts,
            arc_start: cand.arc_start,
        });
    }
    Err(Error::ConstructionFailed {
        retries: params.max_retries,
        reason: last_failure,
        report: last_report,
    })
}

/// Even `r`: `r/2` nested loops.
pub fn build_even_curve(body: &ConvexPolygon, params: &ConstructionParams) -> Result<ConstructionResult> {
    check_r(params.r)?;
    if params.r % 2 != 0 {
        return Err(Error::InvalidParameter(format!("r = {} is odd", params.r)));
    }
    build(body, params)
}

/// Odd `r`: `⌊r/2⌋` loops, the last one stopped short, then a bowed diameter.
pub fn build_odd_curve(body: &ConvexPolygon, params: &ConstructionParams) -> Result<ConstructionResult> {
    check_r(params.r)?;
    if params.r % 2 != 1 {
        return Err(Error::InvalidParameter(format!("r = {} is even", params.r)));
    }
    build(body, params)
}

/// Dispatches on the parity of `r`.
pub fn build_extremal_curve(body: &ConvexPolygon, params: &ConstructionParams) -> Result<ConstructionResult> {
    if params.r % 2 == 0 {
        build_even_curve(body, params)
    } else {
        build_odd_curve(body, params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{convex_hull, Containment};

    fn sq() -> ConvexPolygon {
        ConvexPolygon::unit_square()
    }

    fn no_three_collinear(pts: &[Point]) -> bool {
        let n = pts.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| (j + 1..n).all(|k| orientation(&pts[i], &pts[j], &pts[k]) != Orientation::Collinear))
        })
    }

    fn check(res: &ConstructionResult, body: &ConvexPolygon) {
        let p = &res.params;
        assert!(res.achieved_length >= s_bound(body, p.r).unwrap() - p.eps);
        assert!(res.multiplicity.count <= p.r as usize);
        assert_eq!(res.achieved_length, res.curve.length());
        assert!(body.ensure_contains(res.curve.vertices()).is_ok());
    }

    #[test]
    fn inset_loop_on_square() {
        let ring = inset_loop(&sq(), 0.01, 64, 1).unwrap();
        assert!(ring.is_closed());
        assert_eq!(ring.vertices().len(), 64);
        assert!(ConvexPolygon::new(ring.vertices().to_vec()).is_ok());
        assert!(ring.length() >= 4.0 - 0.2);
        assert!(no_three_collinear(ring.vertices()));
    }

    #[test]
    fn deeper_loop_nests_inside() {
        let outer = ConvexPolygon::new(inset_loop(&sq(), 0.01, 64, 1).unwrap().vertices().to_vec()).unwrap();
        let inner = inset_loop(&sq(), 0.02, 64, 2).unwrap();
        assert!(inner
            .vertices()
            .iter()
            .all(|v| outer.contains(v) == Containment::Interior));
    }

    #[test]
    fn inset_loop_rejects_deep_insets() {
        assert!(inset_loop(&sq(), 0.3, 64, 1).is_err());
        assert!(inset_loop(&sq(), 0.0, 64, 1).is_err());
    }

    #[test]
    fn chord_arc_on_inner_square() {
        let inner = ConvexPolygon::from_f64(&[(0.1, 0.1), (0.9, 0.1), (0.9, 0.9), (0.1, 0.9)]).unwrap();
        let d = inner.diameter().0;
        let arc = diameter_chord_arc(&inner, 0.01, 32, 4).unwrap();
        assert_eq!(arc.vertices().len(), 33);
        assert!(arc.length() >= d && arc.length() <= d + 4.0 * 0.01);
        assert!(no_three_collinear(arc.vertices()));
        assert!(diameter_chord_arc(&inner, 0.5, 32, 4).is_err());
        assert!(diameter_chord_arc(&inner, 0.0, 32, 4).is_err());
    }

    #[test]
    fn even_examples() {
        let two = build_even_curve(&sq(), &ConstructionParams::new(2, 0.2)).unwrap();
        check(&two, &sq());
        assert!(two.achieved_length >= 3.8);
        assert_eq!(two.loop_starts.len(), 1);
        let four = build_even_curve(&sq(), &ConstructionParams::new(4, 0.4)).unwrap();
        check(&four, &sq());
        assert!(four.achieved_length >= 7.6);
        assert_eq!(four.loop_starts.len(), 2);
    }

    #[test]
    fn odd_examples() {
        let three = build_odd_curve(&sq(), &ConstructionParams::new(3, 0.3)).unwrap();
        check(&three, &sq());
        assert!(three.achieved_length >= 4.0 + 2f64.sqrt() - 0.3);
        let five = build_odd_curve(&sq(), &ConstructionParams::new(5, 0.5)).unwrap();
        check(&five, &sq());
        assert_eq!(five.loop_starts.len(), 2);
        let arc = &five.curve.vertices()[five.arc_start.unwrap()..];
        assert!(is_convex_arc(arc));
    }

    #[test]
    fn parity_and_range_of_r() {
        assert!(matches!(
            build_extremal_curve(&sq(), &ConstructionParams::new(1, 0.1)),
            Err(Error::InvalidR(1))
        ));
        assert!(build_even_curve(&sq(), &ConstructionParams::new(3, 0.3)).is_err());
        assert!(build_odd_curve(&sq(), &ConstructionParams::new(2, 0.3)).is_err());
        assert!(build_even_curve(&sq(), &ConstructionParams::new(2, -1.0)).is_err());
    }

    #[test]
    fn huge_slack_still_gives_a_valid_curve() {
        let res = build_even_curve(&sq(), &ConstructionParams::new(2, 5.0)).unwrap();
        check(&res, &sq());
    }

    #[test]
    fn same_seed_same_curve() {
        let p = ConstructionParams::new(3, 0.3).with_seed(17);
        let a = build_odd_curve(&sq(), &p).unwrap();
        let b = build_odd_curve(&sq(), &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn loops_nest_outward() {
        let res = build_even_curve(&sq(), &ConstructionParams::new(6, 0.6)).unwrap();
        let v = res.curve.vertices();
        let mut bounds = res.loop_starts.clone();
        bounds.push(v.len() - 1);
        for w in bounds.windows(3) {
            let hull = convex_hull(&v[w[1]..=w[2]]).unwrap();
            // the last vertex of a loop is the first of the next one
            assert!(v[w[0]..w[1]].iter().all(|p| hull.contains(p) == Containment::Interior));
        }
    }

    #[test]
    fn shrinking_slack_lengthens_the_curve() {
        let target = s_bound(&sq(), 2).unwrap();
        let mut last = 0.0;
        for eps in [0.4, 0.2, 0.1] {
            let m = (25.6 / eps as f64).ceil() as usize;
            let res = build_even_curve(&sq(), &ConstructionParams::new(2, eps).with_samples(m)).unwrap();
            check(&res, &sq());
            assert!(res.achieved_length > last);
            assert!(res.achieved_length <= target);
            last = res.achieved_length;
        }
    }
}
