use thiserror::Error;

use crate::stabbing::MultiplicityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid decimal `{0}`")]
    Decimal(String),
    #[error("decimal `{0}` has more precision than the 1e-9 coordinate grid")]
    Precision(String),
    #[error("coordinate {0} is outside the supported range")]
    CoordinateRange(String),
    #[error("need at least {min} vertices, got {got}")]
    TooFewVertices { min: usize, got: usize },
    #[error("vertices {index} and {next} coincide")]
    RepeatedVertex { index: usize, next: usize },
    #[error("ring does not turn strictly left at vertex {index}")]
    NotStrictlyConvex { index: usize },
    #[error("points are collinear; the hull is degenerate")]
    Degenerate,
    #[error("quadrature needs at least 4 panels, got {0}")]
    PanelCount(usize),
    #[error("r must be an integer greater than 1, got {0}")]
    InvalidR(u32),
    #[error("vertex {index} lies outside the body")]
    NotContained { index: usize },
    #[error("curve length {length} does not exceed the bound {bound}")]
    BoundNotExceeded { length: f64, bound: f64 },
    #[error("no line with at least {needed} components was found")]
    StabbingNotFound { needed: usize },
    #[error("construction failed after {retries} retries: {reason}")]
    ConstructionFailed {
        retries: u32,
        reason: String,
        report: Option<Box<MultiplicityReport>>,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("polyline is not simple: segments {0} and {1} intersect")]
    NotSimple(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("scene is empty")]
    EmptyScene,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True when the failure means a computed result did not check out, as
    /// opposed to bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::ConstructionFailed { .. } | Error::StabbingNotFound { .. }
        )
    }
}
