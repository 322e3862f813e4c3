//! Scene descriptions for the `svg` command.
//!
//! A scene file is JSON. Geometry can be given inline or as paths to text
//! files, resolved relative to the scene file:
//!
//! ```json
//! {
//!   "body": "square.txt",
//!   "curves": [{ "label": "curve", "file": "curve.txt" }],
//!   "lines": [{ "label": "l", "line": { "p": ["0", "0"], "q": ["1", "1"] } }],
//!   "annotations": [{ "at": [0.5, 0.5], "text": "K" }]
//! }
//! ```

use std::path::{Path, PathBuf};

use konvex_core::io::{self, Annotation, LabeledCurve, LabeledLine, SceneDocument};
use konvex_core::{ConstructionResult, ConvexPolygon, Polyline, Result};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum BodySpec {
    File(PathBuf),
    Inline(ConvexPolygon),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CurveSource {
    File { file: PathBuf },
    Inline { curve: Polyline },
}

#[derive(Deserialize)]
struct CurveSpec {
    label: String,
    #[serde(flatten)]
    source: CurveSource,
}

#[derive(Deserialize)]
struct SceneSpec {
    #[serde(default)]
    body: Option<BodySpec>,
    #[serde(default)]
    curves: Vec<CurveSpec>,
    #[serde(default)]
    lines: Vec<LabeledLine>,
    #[serde(default)]
    annotations: Vec<Annotation>,
}

pub fn load(path: &Path) -> Result<SceneDocument> {
    let spec: SceneSpec = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let body = match spec.body {
        Some(BodySpec::File(f)) => Some(io::read_polygon(dir.join(f))?),
        Some(BodySpec::Inline(k)) => Some(k),
        None => None,
    };
    let curves = spec
        .curves
        .into_iter()
        .map(|c| {
            let curve = match c.source {
                CurveSource::File { file } => io::read_polyline(dir.join(file))?,
                CurveSource::Inline { curve } => curve,
            };
            Ok(LabeledCurve { label: c.label, curve })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SceneDocument {
        body,
        curves,
        lines: spec.lines,
        annotations: spec.annotations,
    })
}

/// The body with a constructed curve drawn inside it.
pub fn construction(body: &ConvexPolygon, result: &ConstructionResult) -> SceneDocument {
    SceneDocument {
        body: Some(body.clone()),
        curves: vec![LabeledCurve {
            label: format!("r = {}", result.params.r),
            curve: result.curve.clone(),
        }],
        lines: Vec::new(),
        annotations: Vec::new(),
    }
}
