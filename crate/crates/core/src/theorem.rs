//! The threshold `s(K, r)` and empirical checks of both bound directions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{build_extremal_curve, candidate, BodyFrame, ConstructionParams, ConstructionResult};
use crate::geometry::{orientation, segments_intersect, ConvexPolygon, Orientation, Point, Polyline};
use crate::sample;
use crate::stabbing::{find_stabbing_line, max_line_multiplicity, multiplicity_reaches, Line, MultiplicityReport};

pub(crate) fn check_r(r: u32) -> Result<()> {
    if r < 2 {
        Err(Error::InvalidR(r))
    } else {
        Ok(())
    }
}

fn formula(perimeter: f64, diameter: f64, r: u32) -> f64 {
    if r % 2 == 0 {
        r as f64 * perimeter / 2.0
    } else {
        (r - 1) as f64 * perimeter / 2.0 + diameter
    }
}

/// Longest curve in `body` that no line meets more than `r` times:
/// `r p / 2` for even `r`, `(r − 1) p / 2 + d` for odd `r`.
pub fn s_bound(body: &ConvexPolygon, r: u32) -> Result<f64> {
    check_r(r)?;
    Ok(formula(body.perimeter(), body.diameter().0, r))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodySummary {
    pub perimeter: f64,
    pub diameter: f64,
    pub vertices: usize,
}

impl BodySummary {
    pub fn of(body: &ConvexPolygon) -> Self {
        BodySummary {
            perimeter: body.perimeter(),
            diameter: body.diameter().0,
            vertices: body.len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSide {
    UpperChecked,
    LowerRealized,
    Falsification,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The curve is not longer than the threshold, so nothing is claimed.
    WithinBound { length: f64 },
    /// A replayed line meeting the curve at least `r + 1` times.
    StabbingLine { length: f64, report: MultiplicityReport },
    Construction { result: Box<ConstructionResult> },
    Trials { stats: FalsifyStats },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub body: BodySummary,
    pub r: u32,
    pub s: f64,
    pub side: BoundSide,
    pub evidence: Evidence,
}

impl BoundReport {
    fn new(body: &ConvexPolygon, r: u32, side: BoundSide, evidence: Evidence) -> Result<Self> {
        Ok(BoundReport {
            body: BodySummary::of(body),
            r,
            s: s_bound(body, r)?,
            side,
            evidence,
        })
    }

    /// Recomputes the threshold from the stored perimeter and diameter.
    pub fn s_matches_formula(&self) -> bool {
        let s = formula(self.body.perimeter, self.body.diameter, self.r);
        (s - self.s).abs() <= 1e-12 * s.max(1.0)
    }

    /// False only when the evidence contradicts the theorem.
    pub fn holds(&self) -> bool {
        match &self.evidence {
            Evidence::WithinBound { length } => *length <= self.s,
            Evidence::StabbingLine { report, .. } => report.count > self.r as usize,
            Evidence::Construction { result } => {
                result.multiplicity.count <= self.r as usize
                    && result.achieved_length >= result.target - result.params.eps
            }
            Evidence::Trials { stats } => stats.violations.is_empty(),
        }
    }
}

/// If `poly` is longer than the threshold, finds and replays a line meeting it
/// at least `r + 1` times; otherwise reports that it is within the bound.
pub fn check_upper_bound(poly: &Polyline, body: &ConvexPolygon, r: u32) -> Result<BoundReport> {
    check_r(r)?;
    body.ensure_contains(poly.vertices())?;
    let length = poly.length();
    let evidence = if length > s_bound(body, r)? {
        Evidence::StabbingLine {
            length,
            report: find_stabbing_line(poly, r, body)?,
        }
    } else {
        Evidence::WithinBound { length }
    };
    BoundReport::new(body, r, BoundSide::UpperChecked, evidence)
}

/// Runs the extremal builder and wraps its verified result.
pub fn realize_lower_bound(body: &ConvexPolygon, params: &ConstructionParams) -> Result<BoundReport> {
    let result = build_extremal_curve(body, params)?;
    BoundReport::new(
        body,
        params.r,
        BoundSide::LowerRealized,
        Evidence::Construction {
            result: Box::new(result),
        },
    )
}

/// Shape families sampled by [`falsify`], cycled in this order by trial index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// Open random walk with a random step scale.
    RandomWalk,
    /// Spiral of one to `⌊r/2⌋ + 1` convex turns at a random depth.
    SmoothedLoop,
    /// Unverified builder output with small sample counts and oversized jitter.
    AggressiveBuilder,
}

pub const GENERATORS: [Generator; 3] = [
    Generator::RandomWalk,
    Generator::SmoothedLoop,
    Generator::AggressiveBuilder,
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorStats {
    pub generator: Generator,
    pub trials: usize,
    /// Curves no line meets more than `r` times.
    pub qualifying: usize,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: usize,
    pub generator: Generator,
    pub length: f64,
    pub ratio: f64,
    pub curve: Polyline,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsifyStats {
    pub trials: usize,
    pub seed: u64,
    pub qualifying: usize,
    /// Trials whose generator produced no usable curve.
    pub skipped: usize,
    /// Largest `length / s` over qualifying curves.
    pub max_ratio: f64,
    pub max_ratio_trial: Option<usize>,
    pub generators: Vec<GeneratorStats>,
    pub violations: Vec<Violation>,
}

/// Regenerates the curve of one falsification trial. `None` when the
/// generator gave up on this draw.
pub fn falsify_trial(body: &ConvexPolygon, r: u32, seed: u64, trial: usize) -> Result<Option<Polyline>> {
    check_r(r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let curve = match GENERATORS[trial % GENERATORS.len()] {
        Generator::RandomWalk => {
            let steps = rng.gen_range(2..=30);
            let step = rng.gen_range(0.05..0.6) * body.diameter().0;
            sample::random_walk(&mut rng, body, steps, step).ok()
        }
        Generator::SmoothedLoop => smoothed_loop(&mut rng, body, r)?,
        Generator::AggressiveBuilder => aggressive_builder(&mut rng, body, r)?,
    };
    Ok(curve.filter(|c| body.ensure_contains(c.vertices()).is_ok()))
}

fn smoothed_loop(rng: &mut ChaCha8Rng, body: &ConvexPolygon, r: u32) -> Result<Option<Polyline>> {
    let frame = BodyFrame::new(body);
    let turns = rng.gen_range(0.3..(r / 2) as f64 + 1.0);
    let per_turn = rng.gen_range(8..=24);
    let depth = rng.gen_range(0.002..0.5) * frame.inradius() / (turns + 1.0);
    let bump = depth * rng.gen_range(0.0..0.5);
    let widening = rng.gen_bool(0.5);
    let start = rng.gen::<f64>();
    let total = (turns * per_turn as f64).ceil() as usize;
    let coords: Vec<(f64, f64)> = (0..=total)
        .map(|j| {
            let t = j as f64 / per_turn as f64;
            let level = if widening { turns - t } else { t };
            frame.loop_point(start + t, depth * (1.0 + level), bump)
        })
        .collect();
    Ok(Polyline::from_f64(&coords, false).ok())
}

fn aggressive_builder(rng: &mut ChaCha8Rng, body: &ConvexPolygon, r: u32) -> Result<Option<Polyline>> {
    let frame = BodyFrame::new(body);
    let params = ConstructionParams::new(r, body.perimeter());
    let n = params.loops() as f64;
    let m = rng.gen_range(8..=24);
    let inset = rng.gen_range(0.01..1.0) * frame.inradius() / (4.0 * (n + 1.0));
    let gap = rng.gen_range(0.001..0.2);
    let jitter = rng.gen_range(0.0..8.0);
    Ok(candidate(&frame, &params, m, inset, gap, jitter, rng)
        .ok()
        .flatten()
        .map(|c| c.curve))
}

struct Outcome {
    generator: Generator,
    curve: Option<Polyline>,
    length: f64,
    qualifying: bool,
    violation: bool,
}

fn run_trial(body: &ConvexPolygon, r: u32, s: f64, seed: u64, trial: usize) -> Result<Outcome> {
    let generator = GENERATORS[trial % GENERATORS.len()];
    let curve = falsify_trial(body, r, seed, trial)?;
    let mut out = Outcome {
        generator,
        curve: None,
        length: 0.0,
        qualifying: false,
        violation: false,
    };
    let Some(curve) = curve else {
        return Ok(out);
    };
    out.length = curve.length();
    if out.length > s {
        match find_stabbing_line(&curve, r, body) {
            Ok(_) => {}
            Err(Error::StabbingNotFound { .. }) => {
                out.qualifying = true;
                out.violation = true;
            }
            Err(e) => return Err(e),
        }
    } else {
        out.qualifying = multiplicity_reaches(&curve, r as usize + 1)?.is_none();
    }
    out.curve = Some(curve);
    Ok(out)
}

/// Samples `trials` random curves in `body` and checks that every one which no
/// line meets more than `r` times is no longer than `s(K, r)`.
///
/// Trial `k` draws from stream `k` of a ChaCha generator seeded with `seed`
/// and uses generator `GENERATORS[k % 3]`, so any trial can be replayed with
/// [`falsify_trial`]. A violation is reported, not raised.
pub fn falsify(body: &ConvexPolygon, r: u32, trials: usize, seed: u64) -> Result<BoundReport> {
    check_r(r)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("falsify needs at least one trial".into()));
    }
    let s = s_bound(body, r)?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|k| run_trial(body, r, s, seed, k))
        .collect::<Result<Vec<_>>>()?;
    let mut stats = FalsifyStats {
        trials,
        seed,
        qualifying: 0,
        skipped: 0,
        max_ratio: 0.0,
        max_ratio_trial: None,
        generators: GENERATORS
            .iter()
            .map(|&generator| GeneratorStats {
                generator,
                trials: 0,
                qualifying: 0,
                max_ratio: 0.0,
            })
            .collect(),
        violations: Vec::new(),
    };
    for (k, o) in outcomes.into_iter().enumerate() {
        let g = &mut stats.generators[k % GENERATORS.len()];
        g.trials += 1;
        let Some(curve) = o.curve else {
            stats.skipped += 1;
            continue;
        };
        if !o.qualifying {
            continue;
        }
        let ratio = o.length / s;
        g.qualifying += 1;
        g.max_ratio = g.max_ratio.max(ratio);
        stats.qualifying += 1;
        if ratio > stats.max_ratio {
            stats.max_ratio = ratio;
            stats.max_ratio_trial = Some(k);
        }
        if o.violation {
            stats.violations.push(Violation {
                trial: k,
                generator: o.generator,
                length: o.length,
                ratio,
                curve,
            });
        }
    }
    BoundReport::new(body, r, BoundSide::Falsification, Evidence::Trials { stats })
}

/// Errors with the first pair of segments of the closed ring `poly` that meet
/// anywhere other than a shared endpoint.
pub fn check_simple(poly: &Polyline) -> Result<()> {
    let v = poly.vertices();
    let n = poly.segment_count();
    let seg = |i: usize| (v[i], v[(i + 1) % v.len()]);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            let adjacent = j == i + 1 || (poly.is_closed() && i == 0 && j == n - 1);
            let bad = if adjacent {
                // consecutive segments a-b, b-c overlap only by folding back
                let (p, q, r) = if j == i + 1 { (a, b, d) } else { (c, a, b) };
                orientation(&p, &q, &r) == Orientation::Collinear && folds_back(&p, &q, &r)
            } else {
                segments_intersect(&a, &b, &c, &d)
            };
            if bad {
                return Err(Error::NotSimple(i, j));
            }
        }
    }
    Ok(())
}

fn folds_back(p: &Point, q: &Point, r: &Point) -> bool {
    let d1 = (
        q.x_units() as i128 - p.x_units() as i128,
        q.y_units() as i128 - p.y_units() as i128,
    );
    let d2 = (
        r.x_units() as i128 - q.x_units() as i128,
        r.y_units() as i128 - q.y_units() as i128,
    );
    d1.0 * d2.0 + d1.1 * d2.1 < 0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop1Report {
    /// Every turn of the ring has the same orientation.
    pub convex: bool,
    /// Every turn is strict, so no three vertices are collinear.
    pub strictly_convex: bool,
    pub max_mult: usize,
    pub witness: Line,
    /// `convex` iff `max_mult ≤ 3`, and a strictly convex ring has `max_mult == 2`.
    pub consistent: bool,
}

/// Discrete check of the equivalence between convexity of a simple closed
/// curve and every line meeting it in at most three components.
pub fn prop1_check(poly: &Polyline) -> Result<Prop1Report> {
    if !poly.is_closed() {
        return Err(Error::InvalidParameter("expected a closed ring".into()));
    }
    check_simple(poly)?;
    let v = poly.vertices();
    let convex = sample::turns_consistently(v);
    let strictly_convex = convex
        && (0..v.len()).all(|i| orientation(&v[i], &v[(i + 1) % v.len()], &v[(i + 2) % v.len()]) != Orientation::Collinear);
    let report = max_line_multiplicity(poly)?;
    let max_mult = report.count;
    let consistent = convex == (max_mult <= 3) && (!strictly_convex || max_mult == 2);
    Ok(Prop1Report {
        convex,
        strictly_convex,
        max_mult,
        witness: report.witness,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq() -> ConvexPolygon {
        ConvexPolygon::unit_square()
    }

    #[test]
    fn square_thresholds() {
        let r2 = 2f64.sqrt();
        assert_eq!(s_bound(&sq(), 2).unwrap(), 4.0);
        assert!((s_bound(&sq(), 3).unwrap() - (4.0 + r2)).abs() < 1e-12);
        assert!((s_bound(&sq(), 5).unwrap() - (8.0 + r2)).abs() < 1e-12);
        assert!((s_bound(&sq(), 3).unwrap() - 5.41421).abs() < 1e-5);
        assert!((s_bound(&sq(), 5).unwrap() - 9.41421).abs() < 1e-5);
        assert!(matches!(s_bound(&sq(), 1), Err(Error::InvalidR(1))));
    }

    #[test]
    fn steps_of_two_add_a_perimeter() {
        let k = ConvexPolygon::from_f64(&[(0., 0.), (3., 0.), (2., 2.), (-1., 1.)]).unwrap();
        let p = k.perimeter();
        for r in 2..12 {
            let gap = s_bound(&k, r + 2).unwrap() - s_bound(&k, r).unwrap();
            assert!((gap - p).abs() < 1e-12 * p * r as f64);
        }
    }

    #[test]
    fn ring_is_within_bound() {
        let rep = check_upper_bound(&sq().boundary(), &sq(), 2).unwrap();
        assert_eq!(rep.side, BoundSide::UpperChecked);
        assert_eq!(rep.evidence, Evidence::WithinBound { length: 4.0 });
        assert!(rep.holds() && rep.s_matches_formula());
    }

    #[test]
    fn long_curve_gets_a_stabbing_line() {
        let poly = Polyline::from_f64(
            &[(0., 0.), (1., 0.), (1., 1.), (0., 1.), (0., 0.), (0.1, 0.05)],
            false,
        )
        .unwrap();
        let rep = check_upper_bound(&poly, &sq(), 2).unwrap();
        match &rep.evidence {
            Evidence::StabbingLine { length, report } => {
                assert!(*length > 4.1);
                assert!(report.count >= 3);
            }
            other => panic!("unexpected evidence {other:?}"),
        }
        assert!(rep.holds());
    }

    #[test]
    fn containment_is_checked() {
        let poly = Polyline::from_f64(&[(0., 0.), (2., 0.)], false).unwrap();
        assert!(matches!(
            check_upper_bound(&poly, &sq(), 2),
            Err(Error::NotContained { index: 1 })
        ));
    }

    #[test]
    fn falsify_small_run() {
        assert!(matches!(falsify(&sq(), 2, 0, 1), Err(Error::InvalidParameter(_))));
        let rep = falsify(&sq(), 2, 60, 3).unwrap();
        let Evidence::Trials { stats } = &rep.evidence else {
            panic!("expected trial statistics");
        };
        assert_eq!(stats.trials, 60);
        assert!(stats.qualifying > 0);
        assert!(stats.max_ratio <= 1.0);
        assert!(stats.violations.is_empty());
        assert_eq!(stats.generators.iter().map(|g| g.trials).sum::<usize>(), 60);
        // the same seed replays the same numbers
        assert_eq!(rep, falsify(&sq(), 2, 60, 3).unwrap());
    }

    #[test]
    fn trials_replay() {
        let a = falsify_trial(&sq(), 3, 11, 7).unwrap();
        let b = falsify_trial(&sq(), 3, 11, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prop1_examples() {
        let ring = prop1_check(&sq().boundary()).unwrap();
        assert!(ring.convex && ring.strictly_convex && ring.consistent);
        assert_eq!(ring.max_mult, 2);

        let tri = Polyline::from_f64(&[(0., 0.), (1., 0.), (0., 1.)], true).unwrap();
        let tri = prop1_check(&tri).unwrap();
        assert!(tri.convex);
        assert_eq!(tri.max_mult, 2);

        let l_shape = Polyline::from_f64(
            &[(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)],
            true,
        )
        .unwrap();
        let l = prop1_check(&l_shape).unwrap();
        assert!(!l.convex && l.consistent);
        assert!(l.max_mult >= 4);
    }

    #[test]
    fn prop1_rejects_bad_input() {
        let open = Polyline::from_f64(&[(0., 0.), (1., 0.), (0., 1.)], false).unwrap();
        assert!(prop1_check(&open).is_err());
        let bowtie = Polyline::from_f64(&[(0., 0.), (1., 1.), (1., 0.), (0., 1.)], true).unwrap();
        assert!(matches!(prop1_check(&bowtie), Err(Error::NotSimple(0, 2))));
        let fold = Polyline::from_f64(&[(0., 0.), (2., 0.), (1., 0.), (1., 1.)], true).unwrap();
        assert!(matches!(prop1_check(&fold), Err(Error::NotSimple(0, 1))));
    }
}
