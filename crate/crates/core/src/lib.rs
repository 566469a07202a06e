//! Grid diagrams of knots and links, Cromwell moves, and the tools built on
//! them: simplification search, exhaustive censuses, move-count bounds and
//! realization of moves as Reidemeister sequences.

pub mod bounds;
pub mod census;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod moves;
pub mod planar;
mod qmap;
pub mod realizer;
pub mod render;
pub mod simplify;
mod sweep;

pub use error::{Error, Result};
pub use grid::{
    extremal_diagram, max_crossings_bound, max_length_bound, Crossing, GridDiagram, LengthStats,
    Symmetry,
};
pub use moves::{
    apply, available_moves, inverse, is_stuck, Axis, CromwellMove, Direction, End, MoveKind,
    MoveSet,
};
pub use planar::{
    Anchor, GaussCode, Label, Occ, PlanarDiagram, ReidemeisterKind, ReidemeisterMove,
};
