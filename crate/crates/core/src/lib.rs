//! Curves inside planar convex bodies and the straight lines that meet them.
//!
//! For a convex polygon `K` with perimeter `p` and diameter `d`, any curve in
//! `K` longer than `r p / 2` (even `r`) or `(r − 1) p / 2 + d` (odd `r`) is met
//! by some line in at least `r + 1` places, and curves of nearly that length
//! exist that no line meets more than `r` times. This crate computes the
//! threshold, finds the stabbing line for a long curve, builds the near-extremal
//! curves, and checks all of it with exact predicates.

pub mod error;
pub mod extremal;
pub mod geometry;
pub mod io;
pub mod projections;
pub mod sample;
pub mod stabbing;
pub mod theorem;

pub use error::{Error, Result};
pub use extremal::{ConstructionParams, ConstructionResult};
pub use geometry::{Containment, ConvexPolygon, Orientation, Point, Polyline, Segment};
pub use stabbing::{Line, Method, MultiplicityReport};
pub use theorem::{s_bound, BoundReport};
