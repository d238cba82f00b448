//! Operation space, cylinder obstacles and scenario files.
//!
//! Scenarios are TOML documents. Every length is in meters:
//!
//! ```toml
//! start = [40.0, 8.0, 30.0]
//! target = [64.0, 108.0, 34.0]
//!
//! [operation_space]
//! min = [0.0, 7.5, 0.0]
//! max = [141.0, 108.5, 40.0]
//!
//! [altitude]
//! min = 28.0
//! max = 32.0
//!
//! [weights]            # optional, defaults to length 1, violation 100, altitude 10
//! length = 1.0
//! violation = 100.0
//! altitude = 10.0
//!
//! [formation]
//! offsets = [[0.0, 0.0, 2.0], [3.0, 0.0, -1.0], [-3.0, 0.0, -1.0]]
//! quad_radius = 0.5
//! offset_frame = "inertial"   # optional, or "formation"
//!
//! [pso]                # optional, every key has a default
//! swarm_size = 100
//! waypoints = 10
//! iterations = 300
//! variant = "theta"
//! initialization = "corridor"  # or "uniform"
//! corridor_spread = 0.1
//!
//! [[obstacles]]
//! center = [70.0, 40.0, 0.0]  # base center, z is the base altitude
//! radius = 6.0
//! height = 38.0
//! ```

use std::io::Read;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cost::CostWeights;
use crate::error::{Error, Result};
use crate::formation::{FormationSpec, OffsetFrame};
use crate::geometry::Point3;
use crate::optimizer::{Initialization, PsoConfig, Variant};

/// The benchmark scenario shipped with the crate.
pub const BENCHMARK_SCENARIO: &str = include_str!("../scenarios/benchmark.toml");

/// Axis-aligned search box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperationSpace {
    min: Point3,
    max: Point3,
}

impl OperationSpace {
    pub fn new(min: Point3, max: Point3) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::NonFinite("operation space"));
        }
        if !(min.x < max.x && min.y < max.y && min.z < max.z) {
            return Err(Error::Validation(format!(
                "operation_space.min {min} must be strictly below operation_space.max {max} on every axis"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> Point3 {
        self.min
    }

    pub fn max(&self) -> Point3 {
        self.max
    }

    pub fn extent(&self) -> Point3 {
        self.max - self.min
    }

    pub fn center(&self) -> Point3 {
        self.min.midpoint(self.max)
    }

    pub fn contains(&self, p: Point3) -> bool {
        (self.min.x..=self.max.x).contains(&p.x)
            && (self.min.y..=self.max.y).contains(&p.y)
            && (self.min.z..=self.max.z).contains(&p.z)
    }
}

/// Vertical cylinder standing on `center` (its base center).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ObstacleRecord", into = "ObstacleRecord")]
pub struct CylinderObstacle {
    pub center: Point3,
    radius: f64,
    height: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleRecord {
    center: Point3,
    radius: f64,
    height: f64,
}

impl TryFrom<ObstacleRecord> for CylinderObstacle {
    type Error = Error;
    fn try_from(r: ObstacleRecord) -> Result<Self> {
        CylinderObstacle::new(r.center, r.radius, r.height)
    }
}

impl From<CylinderObstacle> for ObstacleRecord {
    fn from(o: CylinderObstacle) -> Self {
        ObstacleRecord {
            center: o.center,
            radius: o.radius,
            height: o.height,
        }
    }
}

impl CylinderObstacle {
    pub fn new(center: Point3, radius: f64, height: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Validation(format!(
                "obstacle radius must be positive, got {radius}"
            )));
        }
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::Validation(format!(
                "obstacle height must be positive, got {height}"
            )));
        }
        Ok(Self {
            center,
            radius,
            height,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Altitude of the top face.
    pub fn top(&self) -> f64 {
        self.center.z + self.height
    }

    /// Distance from the base center to the cylinder surface at the probe
    /// altitude, capped at the top face.
    pub fn safe_distance(&self, probe_altitude: f64) -> f64 {
        let z = probe_altitude.min(self.top());
        let dz = z - self.center.z;
        (self.radius * self.radius + dz * dz).sqrt()
    }
}

/// Free-function form of [`CylinderObstacle::safe_distance`].
pub fn safe_distance(obstacle: &CylinderObstacle, probe_altitude: f64) -> f64 {
    obstacle.safe_distance(probe_altitude)
}

/// Allowed flight altitude interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AltitudeBand {
    pub min: f64,
    pub max: f64,
}

impl AltitudeBand {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::NonFinite("altitude band"));
        }
        if min >= max {
            return Err(Error::Validation(format!(
                "altitude.min ({min}) must be below altitude.max ({max})"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, z: f64) -> bool {
        (self.min..=self.max).contains(&z)
    }
}

/// A complete planning problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub operation_space: OperationSpace,
    pub start: Point3,
    pub target: Point3,
    pub obstacles: Vec<CylinderObstacle>,
    pub formation: FormationSpec,
    pub altitude: AltitudeBand,
    pub weights: CostWeights,
    pub pso: PsoConfig,
}

impl Scenario {
    /// Re-checks every cross-field invariant.
    pub fn validate(&self) -> Result<()> {
        let space = &self.operation_space;
        if !space.contains(self.start) {
            return Err(Error::Validation(format!(
                "start {} lies outside the operation space",
                self.start
            )));
        }
        if !space.contains(self.target) {
            return Err(Error::Validation(format!(
                "target {} lies outside the operation space",
                self.target
            )));
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            let c = o.center;
            let (lo, hi) = (space.min(), space.max());
            if c.x - o.radius < lo.x
                || c.x + o.radius > hi.x
                || c.y - o.radius < lo.y
                || c.y + o.radius > hi.y
            {
                return Err(Error::Validation(format!(
                    "obstacles[{i}] footprint (center {c}, radius {}) leaves the operation space",
                    o.radius
                )));
            }
        }
        self.weights.validate()?;
        self.pso.validate()?;
        Ok(())
    }

    /// Human-readable feasibility warnings that do not block planning.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let inflation = self.formation.quad_radius() + self.formation.formation_radius();
        for (name, p) in [("start", self.start), ("target", self.target)] {
            if !self.altitude.contains(p.z) {
                out.push(format!(
                    "{name} altitude {} is outside the band [{}, {}]",
                    p.z, self.altitude.min, self.altitude.max
                ));
            }
            for (i, o) in self.obstacles.iter().enumerate() {
                if p.distance(o.center) < inflation + o.safe_distance(p.z) {
                    out.push(format!(
                        "{name} lies inside the inflated safe sphere of obstacles[{i}]"
                    ));
                }
            }
        }
        out
    }

    /// Canonical TOML form. Parsing it back yields an identical scenario.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(&ScenarioFile::from(self)).map_err(|e| Error::Parse(e.to_string()))
    }

    /// SHA-256 over the bit patterns of every field, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        let mut put = |v: f64| h.update(v.to_bits().to_le_bytes());
        for p in [
            self.operation_space.min,
            self.operation_space.max,
            self.start,
            self.target,
        ] {
            put(p.x);
            put(p.y);
            put(p.z);
        }
        put(self.obstacles.len() as f64);
        for o in &self.obstacles {
            put(o.center.x);
            put(o.center.y);
            put(o.center.z);
            put(o.radius);
            put(o.height);
        }
        put(self.formation.offsets().len() as f64);
        for o in self.formation.offsets() {
            put(o.x);
            put(o.y);
            put(o.z);
        }
        put(self.formation.quad_radius());
        put(match self.formation.offset_frame() {
            OffsetFrame::Inertial => 0.0,
            OffsetFrame::Formation => 1.0,
        });
        put(self.altitude.min);
        put(self.altitude.max);
        put(self.weights.length);
        put(self.weights.violation);
        put(self.weights.altitude);
        let c = &self.pso;
        put(c.swarm_size as f64);
        put(c.waypoints as f64);
        put(c.inertia);
        put(c.cognitive);
        put(c.social);
        put(c.iterations as f64);
        put(match c.variant {
            Variant::Classic => 0.0,
            Variant::Theta => 1.0,
        });
        put(c.convergence_window as f64);
        put(c.convergence_epsilon);
        put(match c.initialization {
            Initialization::Corridor => 0.0,
            Initialization::Uniform => 1.0,
        });
        put(c.corridor_spread);
        h.update(c.seed.to_le_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceRecord {
    min: Point3,
    max: Point3,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BandRecord {
    min: f64,
    max: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormationRecord {
    offsets: Vec<Point3>,
    quad_radius: f64,
    #[serde(default)]
    offset_frame: OffsetFrame,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    start: Point3,
    target: Point3,
    operation_space: SpaceRecord,
    altitude: BandRecord,
    #[serde(default)]
    weights: CostWeights,
    formation: FormationRecord,
    #[serde(default)]
    pso: PsoConfig,
    #[serde(default)]
    obstacles: Vec<CylinderObstacle>,
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        ScenarioFile {
            start: s.start,
            target: s.target,
            operation_space: SpaceRecord {
                min: s.operation_space.min,
                max: s.operation_space.max,
            },
            altitude: BandRecord {
                min: s.altitude.min,
                max: s.altitude.max,
            },
            weights: s.weights,
            formation: FormationRecord {
                offsets: s.formation.offsets().to_vec(),
                quad_radius: s.formation.quad_radius(),
                offset_frame: s.formation.offset_frame(),
            },
            pso: s.pso.clone(),
            obstacles: s.obstacles.clone(),
        }
    }
}

impl TryFrom<ScenarioFile> for Scenario {
    type Error = Error;

    fn try_from(f: ScenarioFile) -> Result<Self> {
        let formation = FormationSpec::new(f.formation.offsets, f.formation.quad_radius)?
            .with_offset_frame(f.formation.offset_frame);
        let scenario = Scenario {
            operation_space: OperationSpace::new(f.operation_space.min, f.operation_space.max)?,
            start: f.start,
            target: f.target,
            obstacles: f.obstacles,
            formation,
            altitude: AltitudeBand::new(f.altitude.min, f.altitude.max)?,
            weights: f.weights,
            pso: f.pso,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Parses and validates scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile =
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string().trim_end().to_owned()))?;
    Scenario::try_from(file)
}

/// Reads, parses and validates a scenario from a byte stream.
pub fn load_scenario(mut source: impl Read) -> Result<Scenario> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| Error::Parse(format!("cannot read scenario: {e}")))?;
    parse_scenario(&text)
}

/// The bundled benchmark scenario.
pub fn benchmark_scenario() -> Scenario {
    parse_scenario(BENCHMARK_SCENARIO).expect("bundled benchmark scenario is valid")
}
