//! Planar primitives on a fixed 1e-9 grid with exact predicates, and the
//! metrics of convex polygons (perimeter, diameter, width).

mod point;
mod polygon;
mod polyline;
mod predicates;

pub use point::{format_decimal, parse_decimal, Point, MAX_UNITS, UNITS_PER_LENGTH};
pub use polygon::{
    convex_hull, diameter_brute_force, perimeter, Containment, ConvexPolygon,
};
pub use polyline::{polyline_length, Polyline, Segment};
pub(crate) use polyline::bounds_of;
pub use predicates::{cross, orientation, segments_intersect, Orientation};
