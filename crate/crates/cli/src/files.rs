//! Headered CSV reading and writing.
//!
//! Every data file starts with `# key: value` comment lines naming the
//! scenario hash, planning seed, variant and cost weights, followed by a
//! normal CSV header row. Floats use the shortest text that parses back to
//! the same value.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use thetaform_core::{CandidatePath, CostWeights, Point3, Scenario};

/// An error caused by the user's input rather than by the program.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn bad_input(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

/// Loads a scenario file, or the bundled benchmark for `None`.
pub fn load(path: Option<&Path>) -> Result<Scenario> {
    let Some(path) = path else {
        return Ok(thetaform_core::benchmark_scenario());
    };
    let file =
        File::open(path).map_err(|e| bad_input(format!("cannot open {}: {e}", path.display())))?;
    thetaform_core::load_scenario(file).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

pub fn weights_text(w: &CostWeights) -> String {
    format!(
        "length={} violation={} altitude={}",
        w.length, w.violation, w.altitude
    )
}

/// Provenance lines shared by every output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub fields: Vec<(String, String)>,
}

impl Header {
    pub fn new(scenario: &Scenario, seed: impl fmt::Display, variant: impl fmt::Display) -> Self {
        Self {
            fields: vec![
                ("scenario_sha256".into(), scenario.content_hash()),
                ("seed".into(), seed.to_string()),
                ("variant".into(), variant.to_string()),
                ("weights".into(), weights_text(&scenario.weights)),
            ],
        }
    }

    /// Keeps the four provenance keys of a file read back from disk,
    /// marking absent ones as unknown.
    pub fn carried(meta: &BTreeMap<String, String>) -> Self {
        let fields = ["scenario_sha256", "seed", "variant", "weights"]
            .into_iter()
            .map(|k| {
                (
                    k.to_owned(),
                    meta.get(k).cloned().unwrap_or_else(|| "unknown".into()),
                )
            })
            .collect();
        Self { fields }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.fields.push((key.to_owned(), value.to_string()));
        self
    }

    fn write(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (k, v) in &self.fields {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))
}

/// Writes a headered CSV with the given column names and rows.
pub fn write_csv(
    path: &Path,
    header: &Header,
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = BufWriter::new(file);
    header.write(&mut out)?;
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(columns)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(())
}

pub const PATH_COLUMNS: [&str; 4] = ["waypoint_index", "x_m", "y_m", "z_m"];

pub fn path_rows(path: &CandidatePath) -> impl Iterator<Item = Vec<String>> + '_ {
    path.waypoints().iter().enumerate().map(|(i, p)| {
        vec![
            i.to_string(),
            p.x.to_string(),
            p.y.to_string(),
            p.z.to_string(),
        ]
    })
}

pub fn write_path(path: &Path, header: &Header, waypoints: &CandidatePath) -> Result<()> {
    write_csv(path, header, &PATH_COLUMNS, path_rows(waypoints))
}

/// A path CSV read back from disk with its `# key: value` metadata.
#[derive(Debug, Clone)]
pub struct PathFile {
    pub path: CandidatePath,
    pub meta: BTreeMap<String, String>,
}

pub fn read_path(file: &Path) -> Result<PathFile> {
    let text = fs::read_to_string(file)
        .map_err(|e| bad_input(format!("cannot open {}: {e}", file.display())))?;
    let name = file.display();
    let mut meta = BTreeMap::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line.trim_start_matches('#').split_once(':') {
            meta.insert(k.trim().to_owned(), v.trim().to_owned());
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let columns = reader
        .headers()
        .map_err(|e| bad_input(format!("{name}: {e}")))?
        .clone();
    if columns.iter().collect::<Vec<_>>() != PATH_COLUMNS {
        return Err(bad_input(format!(
            "{name}: expected columns {}",
            PATH_COLUMNS.join(",")
        )));
    }
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad_input(format!("{name}: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64> {
            record[i].trim().parse::<f64>().map_err(|_| {
                bad_input(format!(
                    "{name}: line {line}: `{}` is not a number ({})",
                    &record[i], PATH_COLUMNS[i]
                ))
            })
        };
        let index = field(0)?;
        if index != points.len() as f64 {
            return Err(bad_input(format!(
                "{name}: line {line}: expected waypoint_index {}",
                points.len()
            )));
        }
        let p = Point3::try_new(field(1)?, field(2)?, field(3)?)
            .map_err(|e| bad_input(format!("{name}: line {line}: {e}")))?;
        points.push(p);
    }
    if points.is_empty() {
        return Err(bad_input(format!("{name}: no waypoints")));
    }
    let path = CandidatePath::new(points).map_err(|e| bad_input(format!("{name}: {e}")))?;
    Ok(PathFile { path, meta })
}
