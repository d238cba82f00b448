//! Constant-speed polyline follower with Gaussian position noise, and the
//! closest-sample planned-vs-flown error metric.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::cost::CandidatePath;
use crate::error::{Error, Result};
use crate::geometry::Point3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Ground speed along the path, m/s.
    pub speed: f64,
    /// Sampling interval, s.
    pub timestep: f64,
    /// Standard deviation of the per-axis position noise, m.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(speed: f64, timestep: f64, noise_sigma: f64, seed: u64) -> Result<Self> {
        let c = Self {
            speed,
            timestep,
            noise_sigma,
            seed,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.speed.is_finite() && self.speed > 0.0) {
            return Err(Error::Simulation("speed must be positive".into()));
        }
        if !(self.timestep.is_finite() && self.timestep > 0.0) {
            return Err(Error::Simulation("timestep must be positive".into()));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::Simulation("noise sigma must be non-negative".into()));
        }
        Ok(())
    }

    /// Distance travelled per sample.
    pub fn spacing(&self) -> f64 {
        self.speed * self.timestep
    }

    /// Fails when the sample spacing is not below the shortest non-degenerate
    /// segment of any path.
    pub fn check_sampling(&self, paths: &[CandidatePath]) -> Result<()> {
        let shortest = paths
            .iter()
            .flat_map(|p| p.segments().map(|(a, b)| a.distance(b)))
            .filter(|d| *d > 0.0)
            .fold(f64::INFINITY, f64::min);
        if self.spacing() >= shortest {
            return Err(Error::Simulation(format!(
                "sample spacing {} m is not below the shortest segment ({shortest} m)",
                self.spacing()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub position: Point3,
}

/// Time-stamped flown positions of one vehicle.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub vehicle: usize,
    pub samples: Vec<Sample>,
}

impl Trace {
    pub fn positions(&self) -> impl Iterator<Item = Point3> + '_ {
        self.samples.iter().map(|s| s.position)
    }
}

/// Points every `spacing` meters of arc length, plus the final waypoint.
fn resample(path: &CandidatePath, spacing: f64) -> Vec<(f64, Point3)> {
    let wps = path.waypoints();
    let lengths: Vec<f64> = path.segments().map(|(a, b)| a.distance(b)).collect();
    let total: f64 = lengths.iter().sum();
    let mut out = vec![(0.0, wps[0])];
    if total == 0.0 {
        return out;
    }
    let tol = 1e-9 * total.max(1.0);
    let mut seg = 0;
    let mut seg_start = 0.0;
    let mut k = 1u64;
    loop {
        let s = k as f64 * spacing;
        if s >= total - tol {
            break;
        }
        while seg + 1 < lengths.len() && s > seg_start + lengths[seg] {
            seg_start += lengths[seg];
            seg += 1;
        }
        let t = if lengths[seg] > 0.0 {
            ((s - seg_start) / lengths[seg]).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push((s, wps[seg].lerp(wps[seg + 1], t)));
        k += 1;
    }
    out.push((total, wps[wps.len() - 1]));
    out
}

/// Flies every path at constant speed, one trace per path.
pub fn simulate(paths: &[CandidatePath], config: &SimConfig) -> Result<Vec<Trace>> {
    config.validate()?;
    if paths.is_empty() {
        return Err(Error::Simulation("no paths to simulate".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let noise =
        Normal::new(0.0, config.noise_sigma).map_err(|e| Error::Simulation(e.to_string()))?;
    let traces = paths
        .iter()
        .enumerate()
        .map(|(vehicle, path)| {
            let samples = resample(path, config.spacing())
                .into_iter()
                .map(|(s, p)| {
                    let position = if config.noise_sigma > 0.0 {
                        p + Point3::new(
                            noise.sample(&mut rng),
                            noise.sample(&mut rng),
                            noise.sample(&mut rng),
                        )
                    } else {
                        p
                    };
                    Sample {
                        time: s / config.speed,
                        position,
                    }
                })
                .collect();
            Trace { vehicle, samples }
        })
        .collect();
    Ok(traces)
}

/// Distance from each planned waypoint to the closest flown sample.
#[derive(Debug, Clone, PartialEq)]
pub struct PathError {
    pub errors: Vec<f64>,
    pub max: f64,
    pub mean: f64,
}

pub fn path_error(planned: &CandidatePath, flown: &Trace) -> Result<PathError> {
    if flown.samples.is_empty() {
        return Err(Error::Simulation("flown trace has no samples".into()));
    }
    let errors: Vec<f64> = planned
        .waypoints()
        .iter()
        .map(|w| {
            flown
                .positions()
                .map(|p| p.distance(*w))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let max = errors.iter().copied().fold(0.0, f64::max);
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    Ok(PathError { errors, max, mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn straight(len: f64) -> CandidatePath {
        CandidatePath::new(vec![
            Point3::ORIGIN,
            Point3::new(len / 2.0, 0.0, 0.0),
            Point3::new(len, 0.0, 0.0),
        ])
        .unwrap()
    }

    fn distance_to_polyline(p: Point3, path: &CandidatePath) -> f64 {
        path.segments()
            .map(|(a, b)| {
                let ab = b - a;
                let t = if ab.dot(ab) > 0.0 {
                    ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                p.distance(a.lerp(b, t))
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn zigzag() -> CandidatePath {
        CandidatePath::new(vec![
            Point3::new(0.0, 0.0, 30.0),
            Point3::new(7.3, 4.1, 31.0),
            Point3::new(12.0, -3.0, 29.5),
            Point3::new(20.0, 9.5, 30.0),
        ])
        .unwrap()
    }

    #[test]
    fn straight_segment_sampling() {
        let cfg = SimConfig::new(1.0, 1.0, 0.0, 0).unwrap();
        let traces = simulate(&[straight(10.0)], &cfg).unwrap();
        let s = &traces[0].samples;
        assert_eq!(s.len(), 11);
        for (i, sample) in s.iter().enumerate() {
            assert!((sample.position.x - i as f64).abs() < 1e-12);
            assert!((sample.time - i as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_noise_samples_lie_on_polyline() {
        let path = zigzag();
        let cfg = SimConfig::new(2.0, 0.3, 0.0, 0).unwrap();
        let trace = &simulate(std::slice::from_ref(&path), &cfg).unwrap()[0];
        assert_eq!(trace.samples[0].position, path.start());
        assert_eq!(trace.samples.last().unwrap().position, path.target());
        assert!(trace.samples.windows(2).all(|w| w[1].time > w[0].time));
        for p in trace.positions() {
            assert!(distance_to_polyline(p, &path) < 1e-9);
        }
    }

    #[test]
    fn degenerate_path_gives_single_sample() {
        let p = Point3::new(1.0, 2.0, 3.0);
        let path = CandidatePath::new(vec![p, p, p]).unwrap();
        let trace = &simulate(&[path], &SimConfig::new(1.0, 0.1, 0.0, 0).unwrap()).unwrap()[0];
        assert_eq!(trace.samples.len(), 1);
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(SimConfig::new(0.0, 1.0, 0.0, 0).is_err());
        assert!(SimConfig::new(1.0, -1.0, 0.0, 0).is_err());
        assert!(SimConfig::new(1.0, 1.0, -0.1, 0).is_err());
        assert!(simulate(&[], &SimConfig::new(1.0, 1.0, 0.0, 0).unwrap()).is_err());
        let cfg = SimConfig::new(5.0, 1.0, 0.0, 0).unwrap();
        assert!(cfg.check_sampling(&[straight(8.0)]).is_err());
        assert!(cfg.check_sampling(&[straight(12.0)]).is_ok());
    }

    #[test]
    fn noise_has_configured_spread() {
        let cfg = SimConfig::new(1.0, 0.01, 0.5, 7).unwrap();
        let path = straight(100.0);
        let trace = &simulate(std::slice::from_ref(&path), &cfg).unwrap()[0];
        let clean = &simulate(
            &[path],
            &SimConfig {
                noise_sigma: 0.0,
                ..cfg
            },
        )
        .unwrap()[0];
        assert!(trace.samples.len() >= 10_000);
        let n = trace.samples.len() as f64;
        for axis in 0..3 {
            let d: Vec<f64> = trace
                .positions()
                .zip(clean.positions())
                .map(|(a, b)| (a - b).to_array()[axis])
                .collect();
            let mean = d.iter().sum::<f64>() / n;
            let sd = (d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            assert!((sd - 0.5).abs() < 0.05, "axis {axis}: sd {sd}");
        }
    }

    #[test]
    fn simulation_is_deterministic() {
        let cfg = SimConfig::new(1.5, 0.2, 0.3, 99).unwrap();
        assert_eq!(
            simulate(&[zigzag()], &cfg).unwrap(),
            simulate(&[zigzag()], &cfg).unwrap()
        );
    }

    #[test]
    fn exact_trace_has_zero_error() {
        let path = zigzag();
        let flown = Trace {
            vehicle: 0,
            samples: path
                .waypoints()
                .iter()
                .enumerate()
                .map(|(i, p)| Sample {
                    time: i as f64,
                    position: *p,
                })
                .collect(),
        };
        let e = path_error(&path, &flown).unwrap();
        assert!(e.errors.iter().all(|v| *v == 0.0));
        assert_eq!((e.max, e.mean), (0.0, 0.0));
        assert!(path_error(
            &path,
            &Trace {
                vehicle: 0,
                samples: vec![]
            }
        )
        .is_err());
    }

    #[test]
    fn translated_trace_along_its_own_line() {
        let path = CandidatePath::new(vec![
            Point3::ORIGIN,
            Point3::new(3.0, 0.0, 0.0),
            Point3::new(6.0, 0.0, 0.0),
            Point3::new(10.0, 0.0, 0.0),
        ])
        .unwrap();
        let cfg = SimConfig::new(1.0, 0.5, 0.0, 0).unwrap();
        let mut flown = simulate(std::slice::from_ref(&path), &cfg).unwrap().remove(0);
        for s in &mut flown.samples {
            s.position = s.position + Point3::new(1.0, 0.0, 0.0);
        }
        let e = path_error(&path, &flown).unwrap();
        // Brute-force closest sample per waypoint.
        for (w, got) in path.waypoints().iter().zip(&e.errors) {
            let want = flown
                .positions()
                .map(|p| p.distance(*w))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(*got, want);
        }
        assert!(e.errors[1..3].iter().all(|v| *v < 1e-12));
        assert!(e.errors[0] <= 1.0 && e.errors[3] <= 1.0);
    }

    proptest! {
        #[test]
        fn zero_noise_error_is_within_half_spacing(
            pts in proptest::collection::vec((0.0..50.0, 0.0..50.0, 20.0..40.0), 3..8),
            speed in 0.5..5.0f64,
            dt in 0.05..1.0f64,
        ) {
            let path = CandidatePath::new(pts.into_iter().map(|(x, y, z)| Point3::new(x, y, z)).collect()).unwrap();
            let cfg = SimConfig::new(speed, dt, 0.0, 0).unwrap();
            let trace = &simulate(std::slice::from_ref(&path), &cfg).unwrap()[0];
            for p in trace.positions() {
                prop_assert!(distance_to_polyline(p, &path) <= cfg.spacing() + 1e-9);
            }
            let e = path_error(&path, trace).unwrap();
            prop_assert!(e.max <= cfg.spacing() / 2.0 + 1e-9);
        }

        #[test]
        fn error_is_translation_invariant(
            tx in -100.0..100.0f64, ty in -100.0..100.0f64, tz in -10.0..10.0f64, sigma in 0.0..1.0f64,
        ) {
            let path = zigzag();
            let cfg = SimConfig::new(1.0, 0.25, sigma, 3).unwrap();
            let flown = simulate(std::slice::from_ref(&path), &cfg).unwrap().remove(0);
            let base = path_error(&path, &flown).unwrap();
            let t = Point3::new(tx, ty, tz);
            let moved_path = CandidatePath::new(path.waypoints().iter().map(|p| *p + t).collect()).unwrap();
            let moved = Trace {
                vehicle: 0,
                samples: flown.samples.iter().map(|s| Sample { time: s.time, position: s.position + t }).collect(),
            };
            let e = path_error(&moved_path, &moved).unwrap();
            for (a, b) in e.errors.iter().zip(&base.errors) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}
