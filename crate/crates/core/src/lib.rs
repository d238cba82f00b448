//! Formation path planning with angle-encoded particle swarm optimization.
//!
//! The planner optimizes the path of a formation's centroid through a box
//! populated with vertical cylinder obstacles, then offsets that path for
//! each vehicle of the rigid formation. A constant-speed tracking simulator
//! replays the per-vehicle paths and measures planned-vs-flown error.

pub mod cost;
pub mod environment;
pub mod error;
pub mod formation;
pub mod geometry;
pub mod optimizer;
pub mod simtrack;

pub use cost::{evaluate, CandidatePath, CostBreakdown, CostModel, CostWeights};
pub use environment::{
    benchmark_scenario, load_scenario, parse_scenario, AltitudeBand, CylinderObstacle,
    OperationSpace, Scenario,
};
pub use error::{Error, Result};
pub use formation::{
    derive_paths, tracking_error, Attitude, FormationSpec, OffsetFrame, TrackingError,
};
pub use geometry::{
    centroid, formation_radius, rotation_from_euler, EulerAngles, Point3, RotationMatrix,
};
pub use optimizer::{
    compare, decode, run, run_with, Comparison, ComparisonRow, Initialization, PsoConfig,
    RunReport, Variant,
};
pub use simtrack::{path_error, simulate, PathError, SimConfig, Trace};
