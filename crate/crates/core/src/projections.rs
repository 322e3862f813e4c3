//! Projection profiles of polylines and convex polygons and the two integral
//! identities behind the length bound: the width integral of a convex body is
//! twice its perimeter, and the projection-length integral of a polyline is
//! four times its length.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Polyline};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integration {
    ClosedForm,
    /// Composite midpoint rule with the given panel count over `[0, 2π)`.
    Quadrature(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSource {
    Polyline(Polyline),
    Polygon(ConvexPolygon),
}

/// Sampled `alpha -> value` profile together with the exact integral over a full turn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionProfile {
    pub source: ProfileSource,
    pub evaluations: Vec<(f64, f64)>,
    pub closed_form_integral: f64,
}

impl ProjectionProfile {
    /// `l(alpha)` sampled at `samples` uniform angles in `[0, 2π)`.
    pub fn of_polyline(poly: &Polyline, samples: usize) -> Self {
        ProjectionProfile {
            evaluations: sample(samples, |a| projection_length(poly, a)),
            closed_form_integral: 4.0 * poly.length(),
            source: ProfileSource::Polyline(poly.clone()),
        }
    }

    /// `k(alpha)` sampled at `samples` uniform angles in `[0, 2π)`.
    pub fn of_polygon(k: &ConvexPolygon, samples: usize) -> Self {
        ProjectionProfile {
            evaluations: sample(samples, |a| k.width(a)),
            closed_form_integral: 2.0 * k.perimeter(),
            source: ProfileSource::Polygon(k.clone()),
        }
    }

    /// `alpha,value` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,value\n");
        for (a, v) in &self.evaluations {
            let _ = writeln!(out, "{a},{v}");
        }
        out
    }
}

fn sample(samples: usize, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    (0..samples)
        .map(|i| {
            let a = TAU * i as f64 / samples as f64;
            (a, f(a))
        })
        .collect()
}

/// Total length of the projections of the segments onto the line of direction `alpha`:
/// `sum l_i |cos(alpha - alpha_i)|`.
pub fn projection_length(poly: &Polyline, alpha: f64) -> f64 {
    projection_length_along(poly, alpha.cos(), alpha.sin())
}

pub fn projection_length_along(poly: &Polyline, ux: f64, uy: f64) -> f64 {
    // l_i |cos(alpha - alpha_i)| is |u . d_i|; zero-length segments contribute 0.
    poly.segments()
        .map(|s| {
            let (dx, dy) = s.delta();
            (ux * dx + uy * dy).abs()
        })
        .sum()
}

/// Width from the edge formula `k(alpha) = ½ sum l_i |cos(alpha - alpha_i)|`.
/// Runtime code uses [`ConvexPolygon::width`]; this is the closed-form side.
pub fn width_from_edges(k: &ConvexPolygon, alpha: f64) -> f64 {
    0.5 * projection_length(&k.boundary(), alpha)
}

fn midpoint_rule(panels: usize, f: impl Fn(f64) -> f64 + Sync) -> Result<f64> {
    use rayon::prelude::*;
    if panels < 4 {
        return Err(Error::PanelCount(panels));
    }
    let h = TAU / panels as f64;
    let values: Vec<f64> = (0..panels)
        .into_par_iter()
        .map(|i| f((i as f64 + 0.5) * h))
        .collect();
    // fixed summation order
    Ok(values.iter().sum::<f64>() * h)
}

/// `∫₀^{2π} k(α) dα`, which equals twice the perimeter.
pub fn cauchy_width_integral(k: &ConvexPolygon, mode: Integration) -> Result<f64> {
    match mode {
        // each edge contributes l_i/2 * ∫|cos| = 2 l_i
        Integration::ClosedForm => Ok(k.boundary().segments().map(|s| 2.0 * s.length()).sum()),
        Integration::Quadrature(n) => {
            let ring: Vec<(f64, f64)> = k.vertices().iter().map(|p| p.to_f64()).collect();
            midpoint_rule(n, |a| {
                let (c, s) = (a.cos(), a.sin());
                let (lo, hi) = ring.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, y)| {
                    let t = c * x + s * y;
                    (lo.min(t), hi.max(t))
                });
                hi - lo
            })
        }
    }
}

/// `¼ ∫₀^{2π} l(α) dα`, which equals the polyline length.
pub fn crofton_length(poly: &Polyline, mode: Integration) -> Result<f64> {
    match mode {
        Integration::ClosedForm => Ok(poly.length()),
        Integration::Quadrature(n) => {
            let deltas: Vec<(f64, f64)> = poly.segments().map(|s| s.delta()).collect();
            let integral = midpoint_rule(n, |a| {
                let (c, s) = (a.cos(), a.sin());
                deltas.iter().map(|&(dx, dy)| (c * dx + s * dy).abs()).sum()
            })?;
            Ok(integral / 4.0)
        }
    }
}

/// The chord joining the endpoints of an open polyline: length `l0` and axis angle `alpha0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordTerm {
    pub length: f64,
    /// In `[0, π)`; only `|cos(α − α0)|` is ever used.
    pub angle: f64,
}

impl ChordTerm {
    /// `l0 |cos(alpha - alpha0)|`.
    pub fn projected(&self, alpha: f64) -> f64 {
        self.length * (alpha - self.angle).cos().abs()
    }
}

/// Endpoint chord; coincident endpoints give `l0 = 0`, `alpha0 = 0`.
pub fn chord_term(poly: &Polyline) -> ChordTerm {
    let (a, b) = (poly.first(), poly.last());
    if a == b {
        return ChordTerm {
            length: 0.0,
            angle: 0.0,
        };
    }
    let (dx, dy) = (b.x() - a.x(), b.y() - a.y());
    let mut angle = dy.atan2(dx).rem_euclid(PI);
    if angle >= PI {
        angle = 0.0;
    }
    ChordTerm {
        length: a.dist(&b),
        angle,
    }
}
