#![forbid(unsafe_code)]

//! Bounded-curvature path planning and homotopy classification in the plane.
//!
//! The crate plans minimal-length paths with curvature bounded by 1 between
//! directed points, computes winding numbers against a pinned closure path,
//! normalizes arbitrary bounded-curvature paths to circle/segment form
//! through fragmentation and replacement, and classifies the homotopy
//! classes of each winding space — including the trapped-region and
//! isolated-point structure that appears when the endpoints are close.
//!
//! Every major capability has a runnable example under `examples/`:
//!
//! - `shortest_path` — the six candidate words and the minimum;
//! - `winding_numbers` — closure paths, turning maps, per-class minima;
//! - `classify_endpoints` — proximity conditions and the trapped region;
//! - `classify_space` — homotopy-class counts, kinds and freeness;
//! - `normalize_smooth_path` — fragmentation and deformation to cs form;
//! - `cs_moves` — figure-8 twists, segment pushes, skew, reduction;
//! - `lattice_check` — the brute-force oracle vs the analytic planners;
//! - `svg_gallery` — rendered scenes.
//!
//! The `bcp` binary wraps the same operations as subcommands.

pub mod classifier;
pub mod cs;
pub mod dubins;
pub mod error;
pub mod geometry;
pub mod homotopy;
pub mod lattice;
pub mod proximity;
pub mod svg;
pub mod synth;
pub mod winding;

mod crossings;

pub use crossings::{self_crossings, transversal_crossings, CrossingCount};
pub use error::{Error, Result};
pub use geometry::{
    adjacent_circles, scale_to_unit_curvature, Circle, DirectedPoint, Orientation, Vec2,
};

/// Library version string.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
