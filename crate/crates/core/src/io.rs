//! Text and JSON formats, construction sidecars, and SVG scenes.
//!
//! Geometry files are line based: a header line `open` or `closed`, then one
//! `x y` pair of decimals per line. Blank lines and anything after `#` are
//! ignored. Coordinates are read exactly onto the 1e-9 grid and written back
//! in shortest decimal form, so parsing what was written gives the same value.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{ConstructionParams, ConstructionResult};
use crate::geometry::{ConvexPolygon, Point, Polyline};
use crate::stabbing::{Line, MultiplicityReport};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the header and vertex lines; returns `closed` and the vertices.
fn parse_points(text: &str) -> Result<(bool, Vec<Point>, usize)> {
    let mut closed = None;
    let mut header_line = 0;
    let mut pts = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if closed.is_none() {
            closed = Some(match body {
                "open" => false,
                "closed" => true,
                other => {
                    return Err(parse_err(
                        line,
                        format!("expected `open` or `closed`, found `{other}`"),
                    ))
                }
            });
            header_line = line;
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let [x, y] = fields[..] else {
            return Err(parse_err(
                line,
                format!("expected two coordinates, found {}", fields.len()),
            ));
        };
        pts.push(Point::parse(x, y).map_err(|e| parse_err(line, e.to_string()))?);
    }
    match closed {
        Some(c) => Ok((c, pts, header_line)),
        None => Err(parse_err(1, "missing `open`/`closed` header")),
    }
}

pub fn parse_polyline(text: &str) -> Result<Polyline> {
    let (closed, pts, _) = parse_points(text)?;
    Polyline::new(pts, closed)
}

/// Reads a counterclockwise, strictly convex ring; the header must be `closed`.
pub fn parse_polygon(text: &str) -> Result<ConvexPolygon> {
    let (closed, pts, header) = parse_points(text)?;
    if !closed {
        return Err(parse_err(header, "a convex body must be `closed`"));
    }
    ConvexPolygon::new(pts)
}

fn write_points(closed: bool, pts: &[Point]) -> String {
    let mut out = String::from(if closed { "closed\n" } else { "open\n" });
    for p in pts {
        let _ = writeln!(out, "{} {}", p.decimal_x(), p.decimal_y());
    }
    out
}

pub fn write_polyline(poly: &Polyline) -> String {
    write_points(poly.is_closed(), poly.vertices())
}

pub fn write_polygon(k: &ConvexPolygon) -> String {
    write_points(true, k.vertices())
}

pub fn read_polyline(path: impl AsRef<Path>) -> Result<Polyline> {
    parse_polyline(&fs::read_to_string(path)?)
}

pub fn read_polygon(path: impl AsRef<Path>) -> Result<ConvexPolygon> {
    parse_polygon(&fs::read_to_string(path)?)
}

pub fn save_polyline(poly: &Polyline, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, write_polyline(poly))?)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// Everything needed to replay and re-verify a construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSidecar {
    pub achieved_length: f64,
    pub target: f64,
    pub eps: f64,
    pub seed: u64,
    pub retries_used: u32,
    pub params: ConstructionParams,
    pub multiplicity: MultiplicityReport,
    pub loop_starts: Vec<usize>,
    pub arc_start: Option<usize>,
}

impl ConstructionSidecar {
    pub fn of(result: &ConstructionResult) -> Self {
        ConstructionSidecar {
            achieved_length: result.achieved_length,
            target: result.target,
            eps: result.params.eps,
            seed: result.params.seed,
            retries_used: result.retries_used,
            params: result.params.clone(),
            multiplicity: result.multiplicity.clone(),
            loop_starts: result.loop_starts.clone(),
            arc_start: result.arc_start,
        }
    }
}

/// `curve.txt` -> `curve.txt.json`.
pub fn sidecar_path(curve: impl AsRef<Path>) -> PathBuf {
    let mut name = curve.as_ref().as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Writes the curve in the text format and its sidecar next to it. Returns the
/// sidecar path.
pub fn save_construction(result: &ConstructionResult, path: impl AsRef<Path>) -> Result<PathBuf> {
    let path = path.as_ref();
    save_polyline(&result.curve, path)?;
    let side = sidecar_path(path);
    fs::write(&side, to_json(&ConstructionSidecar::of(result))? + "\n")?;
    Ok(side)
}

pub fn load_construction(path: impl AsRef<Path>) -> Result<(Polyline, ConstructionSidecar)> {
    let path = path.as_ref();
    let curve = read_polyline(path)?;
    let sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    Ok((curve, sidecar))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledCurve {
    pub label: String,
    pub curve: Polyline,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledLine {
    pub label: String,
    pub line: Line,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub at: (f64, f64),
    pub text: String,
}

/// Geometry to draw in one figure.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SceneDocument {
    #[serde(default)]
    pub body: Option<ConvexPolygon>,
    #[serde(default)]
    pub curves: Vec<LabeledCurve>,
    #[serde(default)]
    pub lines: Vec<LabeledLine>,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
}

impl SceneDocument {
    pub fn validate(&self) -> Result<()> {
        if self.body.is_none() && self.curves.is_empty() && self.lines.is_empty() {
            return Err(Error::EmptyScene);
        }
        let mut seen = HashSet::new();
        for label in self
            .curves
            .iter()
            .map(|c| &c.label)
            .chain(self.lines.iter().map(|l| &l.label))
        {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        if let Some(a) = self.annotations.iter().find(|a| !(a.at.0.is_finite() && a.at.1.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "annotation `{}` has a non-finite position",
                a.text
            )));
        }
        Ok(())
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        if let Some(k) = &self.body {
            pts.extend(k.vertices().iter().map(Point::to_f64));
        }
        for c in &self.curves {
            pts.extend(c.curve.vertices().iter().map(Point::to_f64));
        }
        if pts.is_empty() {
            for l in &self.lines {
                let (p, q) = l.line.points();
                pts.extend([p.to_f64(), q.to_f64()]);
            }
        }
        pts.iter().fold(
            (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
            |(x0, y0, x1, y1), &(x, y)| (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
        )
    }
}

/// `v` to 9 significant digits, without exponent or trailing zeros.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Clips the infinite `line` to the box, if it crosses it.
fn clip(line: &Line, (x0, y0, x1, y1): (f64, f64, f64, f64)) -> Option<((f64, f64), (f64, f64))> {
    let (p, q) = line.points();
    let (px, py) = p.to_f64();
    let (qx, qy) = q.to_f64();
    let (dx, dy) = (qx - px, qy - py);
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (start, d, min, max) in [(px, dx, x0, x1), (py, dy, y0, y1)] {
        if d == 0.0 {
            if start < min || start > max {
                return None;
            }
            continue;
        }
        let (a, b) = ((min - start) / d, (max - start) / d);
        lo = lo.max(a.min(b));
        hi = hi.min(a.max(b));
    }
    (lo < hi).then(|| ((px + lo * dx, py + lo * dy), (px + hi * dx, py + hi * dy)))
}

const PALETTE: [&str; 6] = ["#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#117a65"];

/// Standalone SVG for the scene. Identical scenes give identical bytes.
///
/// The view box is the bounding box of the body and curves (or of the lines'
/// defining points when there is nothing else), padded by 10% on every side.
/// Lines are clipped to it.
pub fn emit_svg(scene: &SceneDocument) -> Result<String> {
    scene.validate()?;
    let (x0, y0, x1, y1) = scene.bounds();
    let size = (x1 - x0).max(y1 - y0);
    let pad = if size > 0.0 { 0.1 * size } else { 1.0 };
    let view = (x0 - pad, y0 - pad, x1 + pad, y1 + pad);
    let (w, h) = (view.2 - view.0, view.3 - view.1);
    let unit = w.max(h);
    let stroke = format_sig9(unit * 0.004);
    let f = format_sig9;
    // y grows upward in the scene and downward in SVG
    let pt = |x: f64, y: f64| format!("{},{}", f(x), f(-y));
    let path = |pts: &[Point]| {
        pts.iter()
            .map(|p| pt(p.x(), p.y()))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        f(view.0),
        f(-view.3),
        f(w),
        f(h),
        f((800.0 * h / w).round())
    );
    if let Some(k) = &scene.body {
        let _ = writeln!(
            out,
            r##"  <polygon class="body" points="{}" fill="#eef2f7" stroke="#5d6d7e" stroke-width="{stroke}"/>"##,
            path(k.vertices())
        );
    }
    for (i, c) in scene.curves.iter().enumerate() {
        let tag = if c.curve.is_closed() { "polygon" } else { "polyline" };
        let _ = writeln!(
            out,
            r#"  <{tag} class="curve" points="{}" fill="none" stroke="{}" stroke-width="{stroke}" stroke-linejoin="round"><title>{}</title></{tag}>"#,
            path(c.curve.vertices()),
            PALETTE[i % PALETTE.len()],
            escape(&c.label)
        );
    }
    for l in &scene.lines {
        if let Some((a, b)) = clip(&l.line, view) {
            let _ = writeln!(
                out,
                r##"  <line class="line" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#c0392b" stroke-width="{stroke}" stroke-dasharray="{} {}"><title>{}</title></line>"##,
                f(a.0),
                f(-a.1),
                f(b.0),
                f(-b.1),
                f(unit * 0.02),
                f(unit * 0.01),
                escape(&l.label)
            );
        }
    }
    for a in &scene.annotations {
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="{}">{}</text>"#,
            f(a.at.0),
            f(-a.at.1),
            f(unit * 0.04),
            escape(&a.text)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn write_svg(scene: &SceneDocument, path: impl AsRef<Path>) -> Result<()> {
    Ok(fs::write(path, emit_svg(scene)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_square_and_segment() {
        let k = parse_polygon("closed\n0 0\n1 0\n1 1\n0 1").unwrap();
        assert_eq!(k, ConvexPolygon::unit_square());
        let seg = parse_polyline("open\n0 0\n1 0").unwrap();
        assert!(!seg.is_closed());
        assert_eq!(seg.length(), 1.0);
    }

    #[test]
    fn collinear_triple_is_not_a_body() {
        assert!(matches!(
            parse_polygon("closed\n0 0\n1 0\n2 0\n1 1"),
            Err(Error::NotStrictlyConvex { .. })
        ));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "# square\nclosed\n0 0\n1 0 7\n";
        match parse_polyline(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_polyline("loop\n0 0") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        match parse_polyline("open\n0 0\n0.1234567891 1") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_polyline("\n# nothing\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_polygon("open\n0 0\n1 0\n0 1"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn comments_and_spacing_are_ignored() {
        let a = parse_polyline("open # a path\n\n  0.5   -2 \n1e-3 3 # end\n").unwrap();
        assert_eq!(write_polyline(&a), "open\n0.5 -2\n0.001 3\n");
        assert_eq!(parse_polyline(&write_polyline(&a)).unwrap(), a);
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(-0.5), "-0.5");
        assert_eq!(format_sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(format_sig9(1234.56789123), "1234.56789");
        assert_eq!(format_sig9(-1e-12), "-0.000000000001");
        assert_eq!(format_sig9(2.5e-7), "0.00000025");
    }

    #[test]
    fn empty_and_duplicate_scenes_are_rejected() {
        assert!(matches!(emit_svg(&SceneDocument::default()), Err(Error::EmptyScene)));
        let ring = ConvexPolygon::unit_square().boundary();
        let scene = SceneDocument {
            curves: vec![
                LabeledCurve { label: "a".into(), curve: ring.clone() },
                LabeledCurve { label: "a".into(), curve: ring },
            ],
            ..Default::default()
        };
        assert!(matches!(emit_svg(&scene), Err(Error::DuplicateLabel(l)) if l == "a"));
    }

    #[test]
    fn single_line_scene() {
        let line = Line::through(Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let scene = SceneDocument {
            lines: vec![LabeledLine { label: "diag".into(), line }],
            ..Default::default()
        };
        let svg = emit_svg(&scene).unwrap();
        assert_eq!(svg.matches("<line ").count(), 1);
        // clipped to the padded box [-0.1, 1.1]²
        assert!(svg.contains(r#"x1="-0.1" y1="0.1" x2="1.1" y2="-1.1""#), "{svg}");
        assert_eq!(svg, emit_svg(&scene).unwrap());
    }

    #[test]
    fn scene_json_round_trip() {
        let scene = SceneDocument {
            body: Some(ConvexPolygon::unit_square()),
            annotations: vec![Annotation { at: (0.5, 0.5), text: "K & r".into() }],
            ..Default::default()
        };
        let back: SceneDocument = serde_json::from_str(&to_json(&scene).unwrap()).unwrap();
        assert_eq!(back, scene);
        assert!(emit_svg(&scene).unwrap().contains("K &amp; r"));
    }
}
