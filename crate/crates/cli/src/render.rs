//! Plain-text renderings of reports.

use std::fmt::Write as _;

use konvex_core::io::ConstructionSidecar;
use konvex_core::stabbing::{ComponentShape, Method, MultiplicityReport};
use konvex_core::theorem::{BoundReport, BoundSide, Evidence, Prop1Report};
use konvex_core::Line;

/// Nine decimals with trailing zeros removed.
pub fn num(v: f64) -> String {
    let s = format!("{v:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn pair((x, y): (f64, f64)) -> String {
    format!("({}, {})", num(x), num(y))
}

pub fn line(l: &Line) -> String {
    let (p, q) = l.points();
    format!(
        "through {} and {}, normal {}, offset {}",
        pair(p.to_f64()),
        pair(q.to_f64()),
        pair(l.normal()),
        num(l.offset())
    )
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn method(m: Method) -> &'static str {
    match m {
        Method::Direct => "direct",
        Method::Enumeration => "enumeration",
        Method::Oracle => "oracle",
        Method::WitnessSweep => "witness sweep",
    }
}

pub fn multiplicity(r: &MultiplicityReport) -> String {
    let mut s = format!("count={}\nmethod: {}\nwitness: {}\n", r.count, method(r.method), line(&r.witness));
    for (i, c) in r.components.iter().enumerate() {
        let shape = match &c.shape {
            ComponentShape::Point { at } => format!("point {}", pair(*at)),
            ComponentShape::Span { from, to } => format!("span {} to {}", pair(*from), pair(*to)),
        };
        let _ = writeln!(s, "  {}: segments {}..={}, {}", i + 1, c.segments.0, c.segments.1, shape);
    }
    s
}

pub fn construction(c: &ConstructionSidecar) -> String {
    format!(
        "r = {}\ntarget s = {}\neps = {}\nachieved length = {}\nmultiplicity = {}\nloops = {}, retries = {}, seed = {}\n",
        c.params.r,
        num(c.target),
        num(c.eps),
        num(c.achieved_length),
        c.multiplicity.count,
        c.loop_starts.len(),
        c.retries_used,
        c.seed
    )
}

pub fn bound_report(r: &BoundReport) -> String {
    let side = match r.side {
        BoundSide::UpperChecked => "upper bound checked",
        BoundSide::LowerRealized => "lower bound realized",
        BoundSide::Falsification => "falsification",
    };
    let mut s = format!(
        "p = {}, d = {}\nr = {}\ns = {}\nside: {side}\n",
        num(r.body.perimeter),
        num(r.body.diameter),
        r.r,
        num(r.s)
    );
    match &r.evidence {
        Evidence::WithinBound { length } => {
            let _ = writeln!(s, "length = {} <= s: within bound", num(*length));
        }
        Evidence::StabbingLine { length, report } => {
            let _ = writeln!(s, "length = {} > s: stabbing line found", num(*length));
            s += &multiplicity(report);
        }
        Evidence::Construction { result } => {
            s += &construction(&ConstructionSidecar::of(result));
        }
        Evidence::Trials { stats } => {
            let _ = writeln!(
                s,
                "trials = {}, seed = {}, qualifying = {}, skipped = {}",
                stats.trials, stats.seed, stats.qualifying, stats.skipped
            );
            let at = stats.max_ratio_trial.map(|t| format!(" (trial {t})")).unwrap_or_default();
            let _ = writeln!(s, "max length / s = {}{at}", num(stats.max_ratio));
            let _ = writeln!(s, "{:<20} {:>8} {:>11} {:>12}", "generator", "trials", "qualifying", "max ratio");
            for g in &stats.generators {
                let _ = writeln!(
                    s,
                    "{:<20} {:>8} {:>11} {:>12}",
                    format!("{:?}", g.generator),
                    g.trials,
                    g.qualifying,
                    format!("{:.6}", g.max_ratio)
                );
            }
            let _ = writeln!(s, "violations = {}", stats.violations.len());
            for v in &stats.violations {
                let _ = writeln!(s, "  trial {} ({:?}): length {}", v.trial, v.generator, num(v.length));
            }
        }
    }
    s
}

pub fn prop1(r: &Prop1Report) -> String {
    format!(
        "convex: {}\nstrictly convex: {}\nmax multiplicity: {}\nwitness: {}\nconsistent: {}\n",
        yes(r.convex),
        yes(r.strictly_convex),
        r.max_mult,
        line(&r.witness),
        yes(r.consistent)
    )
}
