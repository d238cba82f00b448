//! Multi-objective path cost: a weighted sum of path length, obstacle
//! violation and altitude-band deviation.
//!
//! * `j1` is the polyline length over all `m` segments.
//! * `j2` averages, over segments and obstacles, how deeply each segment
//!   midpoint penetrates the obstacle's inflated safe sphere. It lies in
//!   `[0, 1]`.
//! * `j3` sums altitude deviation outside `[z_min, z_max]` over the free
//!   waypoints. A free waypoint at or below the ground makes it infinite.
//!
//! An infinite `j3` is the underground sentinel: it compares greater than
//! every finite cost and forces `total` to infinity regardless of weights.

use serde::{Deserialize, Serialize};

use crate::environment::{AltitudeBand, CylinderObstacle, Scenario};
use crate::error::{Error, Result};
use crate::formation::FormationSpec;
use crate::geometry::Point3;

/// An ordered waypoint list: fixed start, `v >= 1` free waypoints, fixed target.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePath {
    waypoints: Vec<Point3>,
}

impl CandidatePath {
    pub fn new(waypoints: Vec<Point3>) -> Result<Self> {
        if waypoints.len() < 3 {
            return Err(Error::TooFewWaypoints);
        }
        if waypoints.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("path waypoint"));
        }
        Ok(Self { waypoints })
    }

    /// Builds `start, interior.., target`.
    pub fn from_parts(start: Point3, interior: &[Point3], target: Point3) -> Result<Self> {
        let mut waypoints = Vec::with_capacity(interior.len() + 2);
        waypoints.push(start);
        waypoints.extend_from_slice(interior);
        waypoints.push(target);
        Self::new(waypoints)
    }

    pub fn waypoints(&self) -> &[Point3] {
        &self.waypoints
    }

    pub fn start(&self) -> Point3 {
        self.waypoints[0]
    }

    pub fn target(&self) -> Point3 {
        self.waypoints[self.waypoints.len() - 1]
    }

    /// The free waypoints between start and target.
    pub fn interior(&self) -> &[Point3] {
        &self.waypoints[1..self.waypoints.len() - 1]
    }

    pub fn free_waypoints(&self) -> usize {
        self.waypoints.len() - 2
    }

    pub fn segment_count(&self) -> usize {
        self.waypoints.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point3, Point3)> + '_ {
        self.waypoints.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn into_waypoints(self) -> Vec<Point3> {
        self.waypoints
    }
}

/// Weights for length, violation and altitude terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    pub length: f64,
    pub violation: f64,
    pub altitude: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            length: 1.0,
            violation: 100.0,
            altitude: 10.0,
        }
    }
}

impl CostWeights {
    pub fn new(length: f64, violation: f64, altitude: f64) -> Result<Self> {
        let w = Self {
            length,
            violation,
            altitude,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.length, self.violation, self.altitude];
        if all.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(Error::Validation(
                "cost weights must be finite and non-negative".into(),
            ));
        }
        if all.iter().all(|b| *b == 0.0) {
            return Err(Error::Validation(
                "at least one cost weight must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Per-term costs and their weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn combine(j1: f64, j2: f64, j3: f64, weights: &CostWeights) -> Self {
        let total = if j3.is_infinite() {
            f64::INFINITY
        } else {
            weights.length * j1 + weights.violation * j2 + weights.altitude * j3
        };
        Self { j1, j2, j3, total }
    }

    pub fn is_feasible(&self) -> bool {
        self.j2 == 0.0 && self.j3 == 0.0
    }
}

/// Total polyline length.
pub fn path_length(path: &CandidatePath) -> f64 {
    path.segments().map(|(a, b)| a.distance(b)).sum()
}

/// Violation cost with the obstacle safe spheres inflated by the
/// formation's quadcopter radius and formation radius.
pub fn violation_cost(
    path: &CandidatePath,
    obstacles: &[CylinderObstacle],
    formation: &FormationSpec,
) -> f64 {
    violation_cost_inflated(
        path,
        obstacles,
        formation.quad_radius() + formation.formation_radius(),
    )
}

/// Violation cost where each safe sphere radius is `safe_distance + inflation`.
pub fn violation_cost_inflated(
    path: &CandidatePath,
    obstacles: &[CylinderObstacle],
    inflation: f64,
) -> f64 {
    if obstacles.is_empty() {
        return 0.0;
    }
    let k = obstacles.len() as f64;
    let per_segment: f64 = path
        .segments()
        .map(|(a, b)| {
            let mid = a.midpoint(b);
            let sum: f64 = obstacles
                .iter()
                .map(|o| {
                    let sphere = inflation + o.safe_distance(mid.z);
                    (1.0 - mid.distance(o.center) / sphere).max(0.0)
                })
                .sum();
            sum / k
        })
        .sum();
    per_segment / path.segment_count() as f64
}

/// Altitude-band deviation over the free waypoints; infinite if any is at or
/// below the ground.
pub fn altitude_cost(path: &CandidatePath, band: AltitudeBand) -> f64 {
    path.interior()
        .iter()
        .map(|p| altitude_deviation(p.z, band))
        .sum()
}

fn altitude_deviation(z: f64, band: AltitudeBand) -> f64 {
    if z <= 0.0 {
        f64::INFINITY
    } else if z > band.max {
        z - band.max
    } else if z < band.min {
        band.min - z
    } else {
        0.0
    }
}

/// Precomputed cost evaluator for one scenario.
#[derive(Debug, Clone)]
pub struct CostModel<'a> {
    obstacles: &'a [CylinderObstacle],
    band: AltitudeBand,
    weights: CostWeights,
    inflation: f64,
}

impl<'a> CostModel<'a> {
    pub fn new(scenario: &'a Scenario) -> Self {
        Self {
            obstacles: &scenario.obstacles,
            band: scenario.altitude,
            weights: scenario.weights,
            inflation: scenario.formation.quad_radius() + scenario.formation.formation_radius(),
        }
    }

    /// Evaluates without checking endpoints against the scenario.
    pub fn evaluate(&self, path: &CandidatePath) -> CostBreakdown {
        let j1 = path_length(path);
        let j2 = violation_cost_inflated(path, self.obstacles, self.inflation);
        let j3 = altitude_cost(path, self.band);
        CostBreakdown::combine(j1, j2, j3, &self.weights)
    }
}

/// Full weighted cost of a path in a scenario. The path must start and end
/// exactly at the scenario's start and target.
pub fn evaluate(path: &CandidatePath, scenario: &Scenario) -> Result<CostBreakdown> {
    if path.start() != scenario.start {
        return Err(Error::EndpointMismatch(format!(
            "path starts at {}, scenario start is {}",
            path.start(),
            scenario.start
        )));
    }
    if path.target() != scenario.target {
        return Err(Error::EndpointMismatch(format!(
            "path ends at {}, scenario target is {}",
            path.target(),
            scenario.target
        )));
    }
    Ok(CostModel::new(scenario).evaluate(path))
}
