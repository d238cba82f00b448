use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde_json::json;
use thetaform_core::cost::violation_cost_inflated;
use thetaform_core::{
    compare, derive_paths, path_error, run_with, simulate, Attitude, CostBreakdown, EulerAngles,
    RunReport, Scenario, SimConfig, Variant,
};

use crate::args::{CompareArgs, DeriveArgs, PlanArgs, SimulateArgs, ValidateArgs};
use crate::files::{self, bad_input, Header};

/// Published results of the original study, measured on its own obstacle
/// layout, printed for context only.
const PUBLISHED_ROWS: [(&str, f64, f64, f64); 2] = [
    ("PSO", 112.43, 143.0, 102.0),
    ("theta-PSO", 111.02, 142.84, 68.0),
];
const PUBLISHED_LABEL: &str = "paper-reported, different instance";

fn warn_all(scenario: &Scenario) {
    for w in scenario.warnings() {
        eprintln!("warning: {w}");
    }
}

fn unix_seconds(t: SystemTime) -> f64 {
    t.duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

fn cost_json(c: &CostBreakdown) -> serde_json::Value {
    json!({ "j1": c.j1, "j2": c.j2, "j3": c.j3, "total": c.total })
}

pub fn plan(args: &PlanArgs) -> Result<()> {
    let scenario = files::load(args.scenario.as_deref())?;
    let mut config = scenario.pso.clone();
    args.swarm.apply(&mut config);
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(variant) = args.variant {
        config.variant = variant;
    }
    config.validate().map_err(|e| bad_input(e.to_string()))?;
    warn_all(&scenario);

    let started = SystemTime::now();
    let report = run_with(&scenario, &config)?;
    let finished = SystemTime::now();

    files::ensure_dir(&args.out)?;
    let header = Header::new(&scenario, config.seed, config.variant);
    files::write_path(
        &args.out.join("centroid_path.csv"),
        &header,
        &report.best_path,
    )?;
    write_convergence(&args.out.join("convergence.csv"), &header, &report)?;
    write_geojson(&args.out.join("centroid_path.geojson"), &header, &report)?;

    let meta = json!({
        "scenario_sha256": scenario.content_hash(),
        "scenario_file": args.scenario.as_ref().map(|p| p.display().to_string()),
        "seed": config.seed,
        "variant": config.variant,
        "weights": scenario.weights,
        "config": config,
        "best_cost": cost_json(&report.best_cost),
        "final_swarm_best": cost_json(report.trace.last().expect("trace is never empty")),
        "iterations_to_convergence": report.iterations_to_convergence,
        "warnings": report.warnings,
        "started_unix_s": unix_seconds(started),
        "finished_unix_s": unix_seconds(finished),
        "wall_time_s": report.wall_time.as_secs_f64(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    fs::write(
        args.out.join("run.json"),
        serde_json::to_string_pretty(&meta)? + "\n",
    )?;

    let c = report.best_cost;
    println!(
        "{} seed {}: cost {:.4} (length {:.4} m, violation {}, altitude {} m), converged at iteration {}",
        config.variant, config.seed, c.total, c.j1, c.j2, c.j3, report.iterations_to_convergence
    );
    if !c.is_feasible() {
        eprintln!("warning: no collision-free path inside the altitude band was found");
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn write_convergence(path: &Path, header: &Header, report: &RunReport) -> Result<()> {
    let header = header
        .clone()
        .with("convergence_window", report.config.convergence_window)
        .with("convergence_epsilon", report.config.convergence_epsilon)
        .with(
            "iterations_to_convergence",
            report.iterations_to_convergence,
        );
    let rows = report.trace.iter().enumerate().map(|(k, c)| {
        vec![
            k.to_string(),
            c.total.to_string(),
            c.j1.to_string(),
            c.j2.to_string(),
            c.j3.to_string(),
        ]
    });
    files::write_csv(
        path,
        &header,
        &["iteration", "best_total", "j1", "j2", "j3"],
        rows,
    )
}

fn write_geojson(path: &Path, header: &Header, report: &RunReport) -> Result<()> {
    let coordinates: Vec<[f64; 3]> = report
        .best_path
        .waypoints()
        .iter()
        .map(|p| p.to_array())
        .collect();
    let mut properties = serde_json::Map::new();
    for (k, v) in &header.fields {
        properties.insert(k.clone(), json!(v));
    }
    properties.insert("total_cost".into(), json!(report.best_cost.total));
    let doc = json!({
        "type": "FeatureCollection",
        "crs": {
            "type": "name",
            "properties": { "name": "LOCAL:thetaform-inertial-metres" }
        },
        "note": "coordinates are x, y, z in metres in the scenario's local inertial frame, not longitude/latitude",
        "features": [{
            "type": "Feature",
            "geometry": { "type": "LineString", "coordinates": coordinates },
            "properties": properties,
        }],
    });
    fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")
        .with_context(|| format!("cannot write {}", path.display()))
}

pub fn compare_cmd(args: &CompareArgs) -> Result<()> {
    let mut scenario = files::load(args.scenario.as_deref())?;
    let hash = scenario.content_hash();
    args.swarm.apply(&mut scenario.pso);
    scenario
        .pso
        .validate()
        .map_err(|e| bad_input(e.to_string()))?;
    if args.runs == 0 {
        return Err(bad_input("--runs must be at least 1"));
    }
    warn_all(&scenario);
    let table = compare(&scenario, args.runs, args.base_seed)?;

    println!(
        "{:<10} {:>5} {:>12} {:>12} {:>12} {:>11}",
        "variant", "runs", "min_cost", "max_cost", "median_cost", "median_iter"
    );
    for r in &table.rows {
        println!(
            "{:<10} {:>5} {:>12.4} {:>12.4} {:>12.4} {:>11}",
            r.variant.to_string(),
            r.runs,
            r.min_cost,
            r.max_cost,
            r.median_cost,
            r.median_iterations
        );
    }
    println!("{PUBLISHED_LABEL}:");
    for (name, min, max, iters) in PUBLISHED_ROWS {
        println!(
            "{:<10} {:>5} {:>12} {:>12} {:>12} {:>11}",
            name, "-", min, max, "-", iters
        );
    }
    let infeasible = table
        .reports
        .iter()
        .filter(|r| !r.best_cost.is_feasible())
        .count();
    if infeasible > 0 {
        eprintln!("warning: {infeasible} run(s) ended without a feasible path");
    }

    files::ensure_dir(&args.out)?;
    let last = args.base_seed + args.runs as u64 - 1;
    let mut header = Header::new(
        &scenario,
        format!("{}..={last}", args.base_seed),
        "classic,theta",
    );
    header.fields[0].1 = hash;
    let mut rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            vec![
                "measured".into(),
                r.variant.to_string(),
                r.runs.to_string(),
                r.min_cost.to_string(),
                r.max_cost.to_string(),
                r.median_cost.to_string(),
                r.median_iterations.to_string(),
            ]
        })
        .collect();
    for (name, min, max, iters) in PUBLISHED_ROWS {
        rows.push(vec![
            PUBLISHED_LABEL.into(),
            name.into(),
            String::new(),
            min.to_string(),
            max.to_string(),
            String::new(),
            iters.to_string(),
        ]);
    }
    files::write_csv(
        &args.out.join("comparison.csv"),
        &header,
        &[
            "source",
            "variant",
            "runs",
            "min_cost",
            "max_cost",
            "median_cost",
            "median_iterations",
        ],
        rows,
    )?;
    let runs = table.reports.iter().map(|r| {
        let c = r.best_cost;
        vec![
            r.variant.to_string(),
            r.seed.to_string(),
            c.total.to_string(),
            c.j1.to_string(),
            c.j2.to_string(),
            c.j3.to_string(),
            r.iterations_to_convergence.to_string(),
        ]
    });
    files::write_csv(
        &args.out.join("comparison_runs.csv"),
        &header,
        &[
            "variant",
            "seed",
            "total",
            "j1",
            "j2",
            "j3",
            "iterations_to_convergence",
        ],
        runs,
    )?;
    Ok(())
}

pub fn derive(args: &DeriveArgs) -> Result<()> {
    let scenario = files::load(args.scenario.as_deref())?;
    let input = files::read_path(&args.path)?;
    let name = args.path.display();
    if input.path.start() != scenario.start || input.path.target() != scenario.target {
        return Err(bad_input(format!(
            "{name}: path runs {} -> {}, but the scenario runs {} -> {}",
            input.path.start(),
            input.path.target(),
            scenario.start,
            scenario.target
        )));
    }
    let hash = scenario.content_hash();
    if let Some(recorded) = input.meta.get("scenario_sha256") {
        if *recorded != hash {
            eprintln!("warning: {name} was planned on a different scenario ({recorded})");
        }
    }
    let attitude = match &args.attitude {
        Some(a) => Attitude::Constant(
            EulerAngles::new(a[0], a[1], a[2]).map_err(|e| bad_input(e.to_string()))?,
        ),
        None => Attitude::Identity,
    };
    let paths = derive_paths(&input.path, &scenario.formation, attitude)?;

    files::ensure_dir(&args.out)?;
    let unknown = String::from("unknown");
    let seed = input.meta.get("seed").unwrap_or(&unknown);
    let variant = input.meta.get("variant").unwrap_or(&unknown);
    for (n, (p, offset)) in paths.iter().zip(scenario.formation.offsets()).enumerate() {
        let header = Header::new(&scenario, seed, variant)
            .with("uav", n + 1)
            .with("offset_m", offset)
            .with(
                "offset_frame",
                format!("{:?}", scenario.formation.offset_frame()).to_lowercase(),
            );
        let file = args.out.join(format!("uav_{}.csv", n + 1));
        files::write_path(&file, &header, p)?;
        println!("wrote {}", file.display());
        if args.audit {
            let j2 =
                violation_cost_inflated(p, &scenario.obstacles, scenario.formation.quad_radius());
            println!(
                "uav {}: violation cost with formation radius 0 = {j2}",
                n + 1
            );
        }
    }
    Ok(())
}

pub fn simulate_cmd(args: &SimulateArgs) -> Result<()> {
    let config = SimConfig::new(args.speed, args.timestep, args.noise, args.seed)
        .map_err(|e| bad_input(e.to_string()))?;
    let inputs: Vec<files::PathFile> = args
        .paths
        .iter()
        .map(|p| files::read_path(p))
        .collect::<Result<_>>()?;
    let paths: Vec<_> = inputs.iter().map(|f| f.path.clone()).collect();
    if let Err(e) = config.check_sampling(&paths) {
        eprintln!("warning: {e}");
    }
    let traces = simulate(&paths, &config)?;
    let labels: Vec<String> = inputs
        .iter()
        .enumerate()
        .map(|(i, f)| {
            f.meta
                .get("uav")
                .cloned()
                .unwrap_or_else(|| (i + 1).to_string())
        })
        .collect();

    let header = Header::carried(&inputs[0].meta)
        .with("speed_m_s", args.speed)
        .with("timestep_s", args.timestep)
        .with("noise_sigma_m", args.noise)
        .with("sim_seed", args.seed);
    files::ensure_dir(&args.out)?;
    let trace_rows = traces.iter().zip(&labels).flat_map(|(t, label)| {
        t.samples.iter().map(move |s| {
            let p = s.position;
            vec![
                s.time.to_string(),
                label.clone(),
                p.x.to_string(),
                p.y.to_string(),
                p.z.to_string(),
            ]
        })
    });
    files::write_csv(
        &args.out.join("trace.csv"),
        &header,
        &["time_s", "uav_index", "x", "y", "z"],
        trace_rows,
    )?;

    let mut error_rows = Vec::new();
    for ((input, trace), label) in inputs.iter().zip(&traces).zip(&labels) {
        let e = path_error(&input.path, trace)?;
        println!(
            "uav {label}: max error {} m, mean error {} m",
            e.max, e.mean
        );
        error_rows.extend(
            e.errors
                .iter()
                .enumerate()
                .map(|(i, v)| vec![label.clone(), i.to_string(), v.to_string()]),
        );
    }
    files::write_csv(
        &args.out.join("errors.csv"),
        &header,
        &["uav_index", "waypoint_index", "error_m"],
        error_rows,
    )?;
    Ok(())
}

pub fn validate(args: &ValidateArgs) -> Result<()> {
    let scenario = files::load(args.scenario.as_deref())?;
    let source = args.scenario.as_ref().map_or_else(
        || "bundled benchmark".to_owned(),
        |p| p.display().to_string(),
    );
    println!("ok: {source}");
    println!("scenario_sha256: {}", scenario.content_hash());
    println!("obstacles: {}", scenario.obstacles.len());
    println!("vehicles: {}", scenario.formation.vehicle_count());
    println!(
        "swarm: {} particles, {} free waypoints, {} iterations, {} variant",
        scenario.pso.swarm_size,
        scenario.pso.waypoints,
        scenario.pso.iterations,
        match scenario.pso.variant {
            Variant::Classic => "classic",
            Variant::Theta => "theta",
        }
    );
    warn_all(&scenario);
    Ok(())
}
