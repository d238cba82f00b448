use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thetaform_core::{Initialization, PsoConfig, Variant};

/// Formation path planning with angle-encoded particle swarm optimization.
#[derive(Debug, Parser)]
#[command(name = "thetaform", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan a centroid path and write path, convergence and GeoJSON files.
    Plan(PlanArgs),
    /// Run both variants over consecutive seeds and tabulate the results.
    Compare(CompareArgs),
    /// Offset a centroid path into one path per vehicle.
    Derive(DeriveArgs),
    /// Fly per-vehicle paths with a constant-speed follower and report errors.
    Simulate(SimulateArgs),
    /// Check a scenario file and print its hash and warnings.
    Validate(ValidateArgs),
}

/// Swarm settings that override the scenario file.
#[derive(Debug, Clone, Default, Args)]
pub struct SwarmOverrides {
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub swarm_size: Option<usize>,
    /// Free waypoints between start and target.
    #[arg(long)]
    pub waypoints: Option<usize>,
    #[arg(long)]
    pub inertia: Option<f64>,
    #[arg(long)]
    pub cognitive: Option<f64>,
    #[arg(long)]
    pub social: Option<f64>,
    /// `corridor` or `uniform`.
    #[arg(long, value_parser = parse_initialization)]
    pub initialization: Option<Initialization>,
    #[arg(long)]
    pub corridor_spread: Option<f64>,
}

impl SwarmOverrides {
    pub fn apply(&self, c: &mut PsoConfig) {
        if let Some(v) = self.iterations {
            c.iterations = v;
        }
        if let Some(v) = self.swarm_size {
            c.swarm_size = v;
        }
        if let Some(v) = self.waypoints {
            c.waypoints = v;
        }
        if let Some(v) = self.inertia {
            c.inertia = v;
        }
        if let Some(v) = self.cognitive {
            c.cognitive = v;
        }
        if let Some(v) = self.social {
            c.social = v;
        }
        if let Some(v) = self.initialization {
            c.initialization = v;
        }
        if let Some(v) = self.corridor_spread {
            c.corridor_spread = v;
        }
    }
}

fn parse_initialization(s: &str) -> Result<Initialization, String> {
    match s {
        "corridor" => Ok(Initialization::Corridor),
        "uniform" => Ok(Initialization::Uniform),
        other => Err(format!(
            "unknown initialization `{other}` (expected corridor or uniform)"
        )),
    }
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: thetaform_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Scenario TOML; the bundled benchmark when omitted.
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `classic` or `theta`.
    #[arg(long, value_parser = parse_variant)]
    pub variant: Option<Variant>,
    #[command(flatten)]
    pub swarm: SwarmOverrides,
    /// Output directory, created if missing.
    #[arg(short, long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub scenario: Option<PathBuf>,
    /// Runs per variant.
    #[arg(long, default_value_t = 20)]
    pub runs: usize,
    /// Run `i` of each variant uses seed `base_seed + i`.
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    #[command(flatten)]
    pub swarm: SwarmOverrides,
    #[arg(short, long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    /// Centroid path CSV written by `plan`.
    pub path: PathBuf,
    /// Scenario the path was planned on; the bundled benchmark when omitted.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Constant formation attitude `roll,pitch,yaw` in radians, used when
    /// offsets are in the formation frame.
    #[arg(long, value_delimiter = ',', num_args = 3, allow_hyphen_values = true)]
    pub attitude: Option<Vec<f64>>,
    /// Print each vehicle's violation cost without formation inflation.
    #[arg(long)]
    pub audit: bool,
    #[arg(short, long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Per-vehicle path CSVs written by `derive`.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    /// Ground speed, m/s.
    #[arg(long, default_value_t = 1.0)]
    pub speed: f64,
    /// Sampling interval, s.
    #[arg(long, default_value_t = 0.1)]
    pub timestep: f64,
    /// Per-axis Gaussian position noise, m.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub scenario: Option<PathBuf>,
}
