//! Per-vehicle paths from a centroid path, and tracking errors.

use serde::{Deserialize, Serialize};

use crate::cost::CandidatePath;
use crate::error::{Error, Result};
use crate::geometry::{formation_radius, EulerAngles, Point3, RotationMatrix};

/// Frame in which formation offsets are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OffsetFrame {
    /// Offsets are added to the centroid as-is.
    #[default]
    Inertial,
    /// Offsets are rotated by the formation attitude before being added.
    Formation,
}

/// Rigid formation geometry: vehicle offsets from the centroid plus the
/// quadcopter body radius.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationSpec {
    offsets: Vec<Point3>,
    quad_radius: f64,
    offset_frame: OffsetFrame,
}

impl FormationSpec {
    pub fn new(offsets: Vec<Point3>, quad_radius: f64) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::EmptyFormation);
        }
        if offsets.iter().any(|o| !o.is_finite()) {
            return Err(Error::NonFinite("formation offsets"));
        }
        if !(quad_radius.is_finite() && quad_radius > 0.0) {
            return Err(Error::Validation(format!(
                "formation.quad_radius must be positive, got {quad_radius}"
            )));
        }
        Ok(Self {
            offsets,
            quad_radius,
            offset_frame: OffsetFrame::Inertial,
        })
    }

    pub fn with_offset_frame(mut self, frame: OffsetFrame) -> Self {
        self.offset_frame = frame;
        self
    }

    pub fn offsets(&self) -> &[Point3] {
        &self.offsets
    }

    pub fn vehicle_count(&self) -> usize {
        self.offsets.len()
    }

    pub fn quad_radius(&self) -> f64 {
        self.quad_radius
    }

    pub fn offset_frame(&self) -> OffsetFrame {
        self.offset_frame
    }

    /// Largest offset norm, recomputed on every call.
    pub fn formation_radius(&self) -> f64 {
        formation_radius(&self.offsets).expect("offsets are non-empty")
    }
}

/// Attitude profile used when offsets are in the formation frame.
#[derive(Debug, Clone, Copy)]
pub enum Attitude<'a> {
    Identity,
    Constant(EulerAngles),
    /// One attitude per centroid waypoint.
    PerWaypoint(&'a [EulerAngles]),
}

/// One path per vehicle: each centroid waypoint plus that vehicle's offset.
pub fn derive_paths(
    centroid_path: &CandidatePath,
    spec: &FormationSpec,
    attitude: Attitude<'_>,
) -> Result<Vec<CandidatePath>> {
    let waypoints = centroid_path.waypoints();
    let rotations: Vec<RotationMatrix> = match (spec.offset_frame, attitude) {
        (OffsetFrame::Inertial, _) | (OffsetFrame::Formation, Attitude::Identity) => {
            vec![RotationMatrix::IDENTITY; waypoints.len()]
        }
        (OffsetFrame::Formation, Attitude::Constant(a)) => {
            vec![RotationMatrix::from_euler(a); waypoints.len()]
        }
        (OffsetFrame::Formation, Attitude::PerWaypoint(list)) => {
            if list.len() != waypoints.len() {
                return Err(Error::DimensionMismatch {
                    expected: waypoints.len(),
                    actual: list.len(),
                });
            }
            list.iter()
                .map(|a| RotationMatrix::from_euler(*a))
                .collect()
        }
    };
    spec.offsets
        .iter()
        .map(|&offset| {
            let pts = waypoints
                .iter()
                .zip(&rotations)
                .map(|(&c, r)| match spec.offset_frame {
                    OffsetFrame::Inertial => c + offset,
                    OffsetFrame::Formation => c + r.apply(offset),
                })
                .collect();
            CandidatePath::new(pts)
        })
        .collect()
}

/// Position error of one vehicle in the inertial and formation frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingError {
    pub inertial: Point3,
    pub formation: Point3,
}

/// `desired - actual`, also expressed in the formation frame via `R_OFᵀ`.
pub fn tracking_error(desired: Point3, actual: Point3, attitude: EulerAngles) -> TrackingError {
    let inertial = desired - actual;
    let formation = RotationMatrix::from_euler(attitude)
        .transpose()
        .apply(inertial);
    TrackingError {
        inertial,
        formation,
    }
}
