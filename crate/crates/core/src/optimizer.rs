//! Particle swarm optimizers for centroid path planning.
//!
//! Two variants share the same driver:
//!
//! * [`Variant::Classic`] moves particles directly in waypoint coordinates
//!   with a velocity clamped to half the axis range and positions clamped to
//!   the operation space.
//! * [`Variant::Theta`] moves phase angles `θ ∈ [-π/2, π/2]` with angle
//!   increments `Δθ ∈ [-π/2, π/2]`. A coordinate is recovered through
//!   `x = ((x_max - x_min)·sin θ + x_max + x_min) / 2`, so every decoded
//!   point lies inside the box by construction.
//!
//! Each particle draws one cognitive and one social random scalar per
//! iteration, shared across its dimensions. Increments are clamped before
//! being added, then the angle itself is clamped. Personal and global bests
//! change only on strict improvement, scanning particles in index order.
//!
//! A particle vector of `3v` entries holds the `v` free waypoints as all `x`
//! coordinates, then all `y`, then all `z`.

use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{CandidatePath, CostBreakdown, CostModel};
use crate::environment::{OperationSpace, Scenario};
use crate::error::{Error, Result};
use crate::geometry::Point3;

/// Which update rule drives the swarm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Classic,
    Theta,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Classic => "classic",
            Variant::Theta => "theta",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" | "pso" => Ok(Variant::Classic),
            "theta" | "theta-pso" => Ok(Variant::Theta),
            other => Err(Error::Config(format!(
                "unknown variant `{other}` (expected classic or theta)"
            ))),
        }
    }
}

/// Where the initial particles are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Initialization {
    /// Waypoints scattered around the straight start-to-target line.
    #[default]
    Corridor,
    /// Uniform over the whole operation space.
    Uniform,
}

/// Swarm parameters. Missing keys in a scenario file take these defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoConfig {
    pub swarm_size: usize,
    /// Free waypoints `v`; the search space has `3v` dimensions.
    pub waypoints: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub iterations: usize,
    pub seed: u64,
    pub variant: Variant,
    pub convergence_window: usize,
    /// Relative improvement below which the window counts as converged.
    pub convergence_epsilon: f64,
    pub initialization: Initialization,
    /// Corridor half-width as a fraction of each axis extent.
    pub corridor_spread: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm_size: 100,
            waypoints: 10,
            inertia: 0.7298,
            cognitive: 1.49618,
            social: 1.49618,
            iterations: 300,
            seed: 0,
            variant: Variant::Theta,
            convergence_window: 30,
            convergence_epsilon: 1e-4,
            initialization: Initialization::Corridor,
            corridor_spread: 0.1,
        }
    }
}

impl PsoConfig {
    pub fn dimensions(&self) -> usize {
        3 * self.waypoints
    }

    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::Config("pso.swarm_size must be at least 2".into()));
        }
        if self.waypoints < 1 {
            return Err(Error::Config("pso.waypoints must be at least 1".into()));
        }
        if self.iterations < 1 {
            return Err(Error::Config("pso.iterations must be at least 1".into()));
        }
        for (name, v) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!(
                    "pso.{name} must be finite and non-negative"
                )));
            }
        }
        if self.convergence_window < 1 {
            return Err(Error::Config(
                "pso.convergence_window must be at least 1".into(),
            ));
        }
        if !(self.convergence_epsilon.is_finite() && self.convergence_epsilon >= 0.0) {
            return Err(Error::Config(
                "pso.convergence_epsilon must be finite and non-negative".into(),
            ));
        }
        if !(self.corridor_spread.is_finite() && self.corridor_spread > 0.0) {
            return Err(Error::Config("pso.corridor_spread must be positive".into()));
        }
        Ok(())
    }
}

/// Anything the swarm can rank. Lower is better.
pub trait Fitness: Clone + Send + Sync {
    fn fitness(&self) -> f64;

    /// Whether every hard constraint holds. Unconstrained objectives are
    /// always feasible.
    fn feasible(&self) -> bool {
        true
    }
}

impl Fitness for f64 {
    fn fitness(&self) -> f64 {
        *self
    }
}

impl Fitness for CostBreakdown {
    fn fitness(&self) -> f64 {
        self.total
    }

    fn feasible(&self) -> bool {
        self.is_feasible()
    }
}

fn improves<C: Fitness>(candidate: &C, incumbent: &C) -> bool {
    candidate.fitness().total_cmp(&incumbent.fitness()) == Ordering::Less
}

/// Per-dimension box constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        if lower.is_empty()
            || lower
                .iter()
                .zip(&upper)
                .any(|(l, u)| !(l.is_finite() && u.is_finite() && l < u))
        {
            return Err(Error::Config(
                "bounds must be finite with lower < upper in every dimension".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    /// Bounds for `v` free waypoints in x-block, y-block, z-block order.
    pub fn for_path(space: &OperationSpace, waypoints: usize) -> Self {
        let (lo, hi) = (space.min(), space.max());
        let mut lower = Vec::with_capacity(3 * waypoints);
        let mut upper = Vec::with_capacity(3 * waypoints);
        for (l, u) in [(lo.x, hi.x), (lo.y, hi.y), (lo.z, hi.z)] {
            lower.extend(std::iter::repeat_n(l, waypoints));
            upper.extend(std::iter::repeat_n(u, waypoints));
        }
        Self { lower, upper }
    }

    pub fn dimensions(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }
}

/// Sine mapping from a phase angle onto `[lo, hi]`.
pub fn angle_to_coordinate(theta: f64, lo: f64, hi: f64) -> f64 {
    0.5 * ((hi - lo) * theta.sin() + hi + lo)
}

/// Maps a full angle vector onto the bounds.
pub fn angles_to_position(angles: &[f64], bounds: &Bounds) -> Vec<f64> {
    angles
        .iter()
        .zip(bounds.lower.iter().zip(&bounds.upper))
        .map(|(&t, (&l, &u))| angle_to_coordinate(t, l, u))
        .collect()
}

/// Assembles a path from a `3v` coordinate vector.
pub fn position_to_path(position: &[f64], start: Point3, target: Point3) -> Result<CandidatePath> {
    if position.is_empty() || !position.len().is_multiple_of(3) {
        let expected = (position.len() / 3).max(1) * 3;
        return Err(Error::DimensionMismatch {
            expected,
            actual: position.len(),
        });
    }
    let v = position.len() / 3;
    let interior: Vec<Point3> = (0..v)
        .map(|i| Point3::new(position[i], position[v + i], position[2 * v + i]))
        .collect();
    CandidatePath::from_parts(start, &interior, target)
}

/// Decodes a phase-angle vector into a path through the operation space.
pub fn decode(
    angles: &[f64],
    space: &OperationSpace,
    start: Point3,
    target: Point3,
) -> Result<CandidatePath> {
    if angles.is_empty() || !angles.len().is_multiple_of(3) {
        let expected = (angles.len() / 3).max(1) * 3;
        return Err(Error::DimensionMismatch {
            expected,
            actual: angles.len(),
        });
    }
    let bounds = Bounds::for_path(space, angles.len() / 3);
    position_to_path(&angles_to_position(angles, &bounds), start, target)
}

/// Random scalars for one particle in one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub cognitive: f64,
    pub social: f64,
}

fn draw_coefficients(n: usize, rng: &mut impl Rng) -> Vec<Coefficients> {
    (0..n)
        .map(|_| Coefficients {
            cognitive: rng.random::<f64>(),
            social: rng.random::<f64>(),
        })
        .collect()
}

fn evaluate_all<C, F>(positions: &[Vec<f64>], objective: &F) -> Vec<C>
where
    C: Fitness,
    F: Fn(&[f64]) -> C + Sync,
{
    positions
        .par_iter()
        .with_min_len(8)
        .map(|p| objective(p))
        .collect()
}

fn argmin<C: Fitness>(costs: impl Iterator<Item = C>) -> (usize, C) {
    let mut best: Option<(usize, C)> = None;
    for (i, c) in costs.enumerate() {
        match &best {
            Some((_, b)) if !improves(&c, b) => {}
            _ => best = Some((i, c)),
        }
    }
    best.expect("swarm is non-empty")
}

/// Lowest-cost feasible vector evaluated so far. Filled in particle index
/// order, so ties keep the earlier entry.
#[derive(Debug, Clone)]
pub struct Archive<C> {
    pub best: Option<(Vec<f64>, C)>,
}

impl<C> Default for Archive<C> {
    fn default() -> Self {
        Self { best: None }
    }
}

impl<C: Fitness> Archive<C> {
    pub fn offer(&mut self, x: &[f64], cost: &C) {
        if !cost.feasible() {
            return;
        }
        match &self.best {
            Some((_, b)) if !improves(cost, b) => {}
            _ => self.best = Some((x.to_vec(), cost.clone())),
        }
    }
}

/// A particle of the angle-encoded swarm.
#[derive(Debug, Clone)]
pub struct ThetaParticle<C> {
    pub angles: Vec<f64>,
    pub increments: Vec<f64>,
    pub best_angles: Vec<f64>,
    pub best_cost: C,
}

/// Angle-encoded swarm with its global best.
#[derive(Debug, Clone)]
pub struct ThetaSwarm<C> {
    pub particles: Vec<ThetaParticle<C>>,
    pub best_angles: Vec<f64>,
    pub best_cost: C,
    /// Best feasible angles seen.
    pub feasible: Archive<C>,
}

impl<C: Fitness> ThetaSwarm<C> {
    /// Angles uniform on `[-π/2, π/2]`, zero increments.
    pub fn initialize<F>(size: usize, bounds: &Bounds, rng: &mut impl Rng, objective: &F) -> Self
    where
        F: Fn(&[f64]) -> C + Sync,
    {
        let dims = bounds.dimensions();
        let angles: Vec<Vec<f64>> = (0..size)
            .map(|_| {
                (0..dims)
                    .map(|_| rng.random_range(-FRAC_PI_2..=FRAC_PI_2))
                    .collect()
            })
            .collect();
        let increments = vec![0.0; dims];
        Self::from_angles(angles, increments, bounds, objective)
    }

    /// Builds a swarm from explicit angles; every particle gets the same
    /// starting increments.
    pub fn from_angles<F>(
        angles: Vec<Vec<f64>>,
        increments: Vec<f64>,
        bounds: &Bounds,
        objective: &F,
    ) -> Self
    where
        F: Fn(&[f64]) -> C + Sync,
    {
        let positions: Vec<Vec<f64>> = angles
            .iter()
            .map(|a| angles_to_position(a, bounds))
            .collect();
        let costs = evaluate_all(&positions, objective);
        let (gi, gcost) = argmin(costs.iter().cloned());
        let best_angles = angles[gi].clone();
        let mut feasible = Archive::default();
        for (a, c) in angles.iter().zip(&costs) {
            feasible.offer(a, c);
        }
        let particles = angles
            .into_iter()
            .zip(costs)
            .map(|(a, c)| ThetaParticle {
                best_angles: a.clone(),
                angles: a,
                increments: increments.clone(),
                best_cost: c,
            })
            .collect();
        Self {
            particles,
            best_angles,
            best_cost: gcost,
            feasible,
        }
    }

    pub fn best_position(&self, bounds: &Bounds) -> Vec<f64> {
        angles_to_position(&self.best_angles, bounds)
    }
}

/// One angle-encoded update with freshly drawn random scalars.
pub fn step_theta<C, F>(
    swarm: &mut ThetaSwarm<C>,
    bounds: &Bounds,
    config: &PsoConfig,
    rng: &mut impl Rng,
    objective: &F,
) where
    C: Fitness,
    F: Fn(&[f64]) -> C + Sync,
{
    let coefficients = draw_coefficients(swarm.particles.len(), rng);
    step_theta_with(swarm, bounds, config, &coefficients, objective);
}

/// One angle-encoded update with caller-supplied random scalars.
pub fn step_theta_with<C, F>(
    swarm: &mut ThetaSwarm<C>,
    bounds: &Bounds,
    config: &PsoConfig,
    coefficients: &[Coefficients],
    objective: &F,
) where
    C: Fitness,
    F: Fn(&[f64]) -> C + Sync,
{
    assert_eq!(coefficients.len(), swarm.particles.len());
    let global = &swarm.best_angles;
    for (p, r) in swarm.particles.iter_mut().zip(coefficients) {
        for j in 0..p.angles.len() {
            let theta = p.angles[j];
            let delta = config.inertia * p.increments[j]
                + config.cognitive * r.cognitive * (p.best_angles[j] - theta)
                + config.social * r.social * (global[j] - theta);
            let delta = delta.clamp(-FRAC_PI_2, FRAC_PI_2);
            p.increments[j] = delta;
            p.angles[j] = (theta + delta).clamp(-FRAC_PI_2, FRAC_PI_2);
        }
    }
    let positions: Vec<Vec<f64>> = swarm
        .particles
        .iter()
        .map(|p| angles_to_position(&p.angles, bounds))
        .collect();
    let costs = evaluate_all(&positions, objective);
    for (p, c) in swarm.particles.iter_mut().zip(costs) {
        swarm.feasible.offer(&p.angles, &c);
        if improves(&c, &p.best_cost) {
            p.best_cost = c;
            p.best_angles.clone_from(&p.angles);
        }
    }
    for p in &swarm.particles {
        if improves(&p.best_cost, &swarm.best_cost) {
            swarm.best_cost = p.best_cost.clone();
            swarm.best_angles.clone_from(&p.best_angles);
        }
    }
}

/// A particle moving directly in coordinate space.
#[derive(Debug, Clone)]
pub struct ClassicParticle<C> {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_cost: C,
}

/// Coordinate-space swarm with its global best.
#[derive(Debug, Clone)]
pub struct ClassicSwarm<C> {
    pub particles: Vec<ClassicParticle<C>>,
    pub best_position: Vec<f64>,
    pub best_cost: C,
    /// Best feasible position seen.
    pub feasible: Archive<C>,
}

impl<C: Fitness> ClassicSwarm<C> {
    /// Positions uniform in the box, zero velocity.
    pub fn initialize<F>(size: usize, bounds: &Bounds, rng: &mut impl Rng, objective: &F) -> Self
    where
        F: Fn(&[f64]) -> C + Sync,
    {
        let positions: Vec<Vec<f64>> = (0..size)
            .map(|_| {
                bounds
                    .lower
                    .iter()
                    .zip(&bounds.upper)
                    .map(|(&l, &u)| rng.random_range(l..=u))
                    .collect()
            })
            .collect();
        let velocity = vec![0.0; bounds.dimensions()];
        Self::from_positions(positions, velocity, objective)
    }

    pub fn from_positions<F>(positions: Vec<Vec<f64>>, velocity: Vec<f64>, objective: &F) -> Self
    where
        F: Fn(&[f64]) -> C + Sync,
    {
        let costs = evaluate_all(&positions, objective);
        let (gi, gcost) = argmin(costs.iter().cloned());
        let best_position = positions[gi].clone();
        let mut feasible = Archive::default();
        for (x, c) in positions.iter().zip(&costs) {
            feasible.offer(x, c);
        }
        let particles = positions
            .into_iter()
            .zip(costs)
            .map(|(x, c)| ClassicParticle {
                best_position: x.clone(),
                position: x,
                velocity: velocity.clone(),
                best_cost: c,
            })
            .collect();
        Self {
            particles,
            best_position,
            best_cost: gcost,
            feasible,
        }
    }
}

/// One coordinate-space update with freshly drawn random scalars.
pub fn step_classic<C, F>(
    swarm: &mut ClassicSwarm<C>,
    bounds: &Bounds,
    config: &PsoConfig,
    rng: &mut impl Rng,
    objective: &F,
) where
    C: Fitness,
    F: Fn(&[f64]) -> C + Sync,
{
    let coefficients = draw_coefficients(swarm.particles.len(), rng);
    step_classic_with(swarm, bounds, config, &coefficients, objective);
}

/// One coordinate-space update with caller-supplied random scalars.
pub fn step_classic_with<C, F>(
    swarm: &mut ClassicSwarm<C>,
    bounds: &Bounds,
    config: &PsoConfig,
    coefficients: &[Coefficients],
    objective: &F,
) where
    C: Fitness,
    F: Fn(&[f64]) -> C + Sync,
{
    assert_eq!(coefficients.len(), swarm.particles.len());
    let global = &swarm.best_position;
    for (p, r) in swarm.particles.iter_mut().zip(coefficients) {
        for j in 0..p.position.len() {
            let (lo, hi) = (bounds.lower[j], bounds.upper[j]);
            let vmax = 0.5 * (hi - lo);
            let x = p.position[j];
            let v = config.inertia * p.velocity[j]
                + config.cognitive * r.cognitive * (p.best_position[j] - x)
                + config.social * r.social * (global[j] - x);
            let v = v.clamp(-vmax, vmax);
            p.velocity[j] = v;
            p.position[j] = (x + v).clamp(lo, hi);
        }
    }
    let positions: Vec<Vec<f64>> = swarm.particles.iter().map(|p| p.position.clone()).collect();
    let costs = evaluate_all(&positions, objective);
    for (p, c) in swarm.particles.iter_mut().zip(costs) {
        swarm.feasible.offer(&p.position, &c);
        if improves(&c, &p.best_cost) {
            p.best_cost = c;
            p.best_position.clone_from(&p.position);
        }
    }
    for p in &swarm.particles {
        if improves(&p.best_cost, &swarm.best_cost) {
            swarm.best_cost = p.best_cost.clone();
            swarm.best_position.clone_from(&p.best_position);
        }
    }
}

/// First iteration `k` whose best cost improves by less than `epsilon`
/// (relative to `trace[k]`) over the next `window` iterations. Returns the
/// last iteration when no such window exists.
pub fn convergence_iteration(trace: &[f64], window: usize, epsilon: f64) -> usize {
    let last = trace.len().saturating_sub(1);
    for k in 0..trace.len() {
        if k + window > last {
            break;
        }
        let (a, b) = (trace[k], trace[k + window]);
        if a.is_finite() && a - b <= epsilon * a.abs() {
            return k;
        }
    }
    last
}

/// Result of a generic minimization.
#[derive(Debug, Clone)]
pub struct Minimum<C> {
    pub position: Vec<f64>,
    pub cost: C,
    /// Best-so-far cost after initialization (index 0) and after each iteration.
    pub trace: Vec<C>,
    pub iterations_to_convergence: usize,
    /// Lowest-cost feasible position evaluated during the run, if any.
    pub best_feasible: Option<(Vec<f64>, C)>,
}

/// How the initial swarm is drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum Initializer {
    /// Uniform phase angles (theta) or uniform coordinates (classic).
    Uniform,
    /// Coordinates uniform in `center ± half_width`, clipped to the bounds.
    /// Both variants start from the same positions for a given seed.
    Around {
        center: Vec<f64>,
        half_width: Vec<f64>,
    },
}

impl Initializer {
    fn positions(&self, size: usize, bounds: &Bounds, rng: &mut impl Rng) -> Option<Vec<Vec<f64>>> {
        match self {
            Initializer::Uniform => None,
            Initializer::Around { center, half_width } => Some(
                (0..size)
                    .map(|_| {
                        (0..bounds.dimensions())
                            .map(|j| {
                                let x = center[j] + half_width[j] * rng.random_range(-1.0..=1.0);
                                x.clamp(bounds.lower[j], bounds.upper[j])
                            })
                            .collect()
                    })
                    .collect(),
            ),
        }
    }
}

/// Inverse of the sine mapping, for coordinates inside `[lo, hi]`.
pub fn coordinate_to_angle(x: f64, lo: f64, hi: f64) -> f64 {
    ((2.0 * x - hi - lo) / (hi - lo)).clamp(-1.0, 1.0).asin()
}

/// Runs the configured variant over arbitrary bounds and objective.
pub fn minimize<C, F>(bounds: &Bounds, config: &PsoConfig, objective: F) -> Result<Minimum<C>>
where
    C: Fitness,
    F: Fn(&[f64]) -> C + Sync,
{
    minimize_from(bounds, config, &Initializer::Uniform, objective)
}

/// As [`minimize`], with an explicit initial distribution.
pub fn minimize_from<C, F>(
    bounds: &Bounds,
    config: &PsoConfig,
    init: &Initializer,
    objective: F,
) -> Result<Minimum<C>>
where
    C: Fitness,
    F: Fn(&[f64]) -> C + Sync,
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trace = Vec::with_capacity(config.iterations + 1);
    let start = init.positions(config.swarm_size, bounds, &mut rng);
    let zeros = vec![0.0; bounds.dimensions()];
    let (position, cost, best_feasible) = match config.variant {
        Variant::Theta => {
            let mut swarm = match start {
                None => ThetaSwarm::initialize(config.swarm_size, bounds, &mut rng, &objective),
                Some(xs) => {
                    let angles = xs
                        .iter()
                        .map(|x| {
                            (0..x.len())
                                .map(|j| {
                                    coordinate_to_angle(x[j], bounds.lower[j], bounds.upper[j])
                                })
                                .collect()
                        })
                        .collect();
                    ThetaSwarm::from_angles(angles, zeros, bounds, &objective)
                }
            };
            trace.push(swarm.best_cost.clone());
            for _ in 0..config.iterations {
                step_theta(&mut swarm, bounds, config, &mut rng, &objective);
                trace.push(swarm.best_cost.clone());
            }
            let position = swarm.best_position(bounds);
            let feasible = swarm
                .feasible
                .best
                .map(|(a, c)| (angles_to_position(&a, bounds), c));
            (position, swarm.best_cost, feasible)
        }
        Variant::Classic => {
            let mut swarm = match start {
                None => ClassicSwarm::initialize(config.swarm_size, bounds, &mut rng, &objective),
                Some(xs) => ClassicSwarm::from_positions(xs, zeros, &objective),
            };
            trace.push(swarm.best_cost.clone());
            for _ in 0..config.iterations {
                step_classic(&mut swarm, bounds, config, &mut rng, &objective);
                trace.push(swarm.best_cost.clone());
            }
            (swarm.best_position, swarm.best_cost, swarm.feasible.best)
        }
    };
    let scores: Vec<f64> = trace.iter().map(Fitness::fitness).collect();
    let iterations_to_convergence = convergence_iteration(
        &scores,
        config.convergence_window,
        config.convergence_epsilon,
    );
    Ok(Minimum {
        position,
        cost,
        trace,
        iterations_to_convergence,
        best_feasible,
    })
}

/// Outcome of planning one centroid path.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// Lowest-cost feasible path evaluated, or the swarm's global best when
    /// no feasible path was ever seen.
    pub best_path: CandidatePath,
    pub best_cost: CostBreakdown,
    /// Best-so-far cost after initialization and after each iteration.
    pub trace: Vec<CostBreakdown>,
    pub iterations_to_convergence: usize,
    pub seed: u64,
    pub variant: Variant,
    pub config: PsoConfig,
    pub wall_time: Duration,
    pub warnings: Vec<String>,
}

/// Free waypoints spread evenly along the start-to-target segment, each
/// jittered by `corridor_spread` times the axis extent.
fn corridor(scenario: &Scenario, config: &PsoConfig) -> Initializer {
    let v = config.waypoints;
    let extent = scenario.operation_space.extent();
    let mut center = vec![0.0; 3 * v];
    let mut half_width = vec![0.0; 3 * v];
    for l in 0..v {
        let p = scenario
            .start
            .lerp(scenario.target, (l + 1) as f64 / (v + 1) as f64);
        for (axis, (c, e)) in [(p.x, extent.x), (p.y, extent.y), (p.z, extent.z)]
            .into_iter()
            .enumerate()
        {
            center[axis * v + l] = c;
            half_width[axis * v + l] = config.corridor_spread * e;
        }
    }
    Initializer::Around { center, half_width }
}

/// Plans a centroid path with the scenario's own swarm settings.
pub fn run(scenario: &Scenario) -> Result<RunReport> {
    run_with(scenario, &scenario.pso)
}

/// Plans a centroid path with explicit swarm settings.
pub fn run_with(scenario: &Scenario, config: &PsoConfig) -> Result<RunReport> {
    scenario.validate()?;
    config.validate()?;
    let started = Instant::now();
    let model = CostModel::new(scenario);
    let bounds = Bounds::for_path(&scenario.operation_space, config.waypoints);
    let (start, target) = (scenario.start, scenario.target);
    let objective = |x: &[f64]| {
        let path = position_to_path(x, start, target).expect("swarm vectors have 3v entries");
        model.evaluate(&path)
    };
    let init = match config.initialization {
        Initialization::Uniform => Initializer::Uniform,
        Initialization::Corridor => corridor(scenario, config),
    };
    let found = minimize_from(&bounds, config, &init, objective)?;
    let (position, cost) = found.best_feasible.unwrap_or((found.position, found.cost));
    Ok(RunReport {
        best_path: position_to_path(&position, start, target)?,
        best_cost: cost,
        trace: found.trace,
        iterations_to_convergence: found.iterations_to_convergence,
        seed: config.seed,
        variant: config.variant,
        config: config.clone(),
        wall_time: started.elapsed(),
        warnings: scenario.warnings(),
    })
}

/// Summary of one variant over several seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub variant: Variant,
    pub runs: usize,
    /// Smallest final best cost over the runs.
    pub min_cost: f64,
    /// Largest final best cost over the runs.
    pub max_cost: f64,
    pub median_cost: f64,
    pub median_iterations: f64,
}

/// Side-by-side results of both variants on matched seeds.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub reports: Vec<RunReport>,
}

impl Comparison {
    pub fn row(&self, variant: Variant) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.variant == variant)
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs both variants on seeds `base_seed..base_seed + runs`.
pub fn compare(scenario: &Scenario, runs: usize, base_seed: u64) -> Result<Comparison> {
    if runs == 0 {
        return Err(Error::Config("runs per variant must be at least 1".into()));
    }
    let jobs: Vec<PsoConfig> = [Variant::Classic, Variant::Theta]
        .into_iter()
        .flat_map(|variant| {
            (0..runs as u64).map(move |i| PsoConfig {
                variant,
                seed: base_seed.wrapping_add(i),
                ..scenario.pso.clone()
            })
        })
        .collect();
    let reports: Vec<RunReport> = jobs
        .par_iter()
        .map(|cfg| run_with(scenario, cfg))
        .collect::<Result<_>>()?;
    let rows = [Variant::Classic, Variant::Theta]
        .into_iter()
        .map(|variant| {
            let mine: Vec<&RunReport> = reports.iter().filter(|r| r.variant == variant).collect();
            let costs: Vec<f64> = mine.iter().map(|r| r.best_cost.total).collect();
            let iters: Vec<f64> = mine
                .iter()
                .map(|r| r.iterations_to_convergence as f64)
                .collect();
            ComparisonRow {
                variant,
                runs: mine.len(),
                min_cost: costs.iter().copied().fold(f64::INFINITY, f64::min),
                max_cost: costs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                median_cost: median(&costs),
                median_iterations: median(&iters),
            }
        })
        .collect();
    Ok(Comparison { rows, reports })
}
