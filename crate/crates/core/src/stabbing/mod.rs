//! How many times straight lines meet a polyline.
//!
//! Multiplicity is the number of connected components of `line ∩ curve`; it
//! agrees with counting distinct points whenever the intersection is finite.

mod count;
mod line;
mod search;
mod witness;

pub use count::{
    line_multiplicity, proper_crossings, Component, ComponentShape, Method, MultiplicityReport,
};
pub use line::Line;
pub(crate) use search::multiplicity_reaches;
pub use search::{max_line_multiplicity, random_line_oracle, FAN_DIRECTIONS, PERTURBATION};
pub use witness::{
    find_stabbing_line, projection_margin, projection_witness, sweep_cells, sweep_line_at,
    SweepCell, WITNESS_GRID,
};
