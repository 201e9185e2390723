//! Bounded-curvature deformation machinery: fragmentation, replacement
//! paths, the radial/orthogonal projection flows with their curvature
//! control, whole-path normalization to cs form, and the discrete moves on
//! cs paths (figure-8 twists, segment pushes, the RSL-to-LSR skew, and
//! complexity reduction).

mod curvature;
mod deform;
mod fragmentation;
mod moves;

pub use curvature::{
    orthogonal_homotopy_step, radial_curvature, radial_curvature_mirrored, radial_drift_rate,
    radial_homotopy_step, AxisFrame, LocalFrame, RadialCurvature,
};
pub use deform::{
    deform_fragment_to_replacement, normalize_to_cs, DeformationTrace, EngineConfig, FrameStats,
    DEFAULT_FRAME_TOL,
};
pub use fragmentation::{
    fragment, replacement_path, Fragmentation, RegionRz, DEFAULT_HEADING_VARIATION,
};
pub use moves::{
    collapse_figure_eight, reduce_complexity, skew_homotopy, type_i_operation, type_ii_operation,
};
