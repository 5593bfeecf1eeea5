use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::dynamics::{steady_state, Evolution, Liouvillian};
use crate::error::Result;
use crate::VERSION;

use super::config::ScenarioSpec;
use super::record::{write_csv, CorrelationRecord};

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<CorrelationRecord>,
    /// `‖L[ρ]‖_F` of the last state.
    pub final_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub csv_path: PathBuf,
    pub meta_path: PathBuf,
    pub rows: usize,
    pub final_residual: f64,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady_reach_time: Option<f64>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    mode: &'static str,
    version: &'static str,
    spec: &'a ScenarioSpec,
    csv: String,
    rows: usize,
    wall_time_s: f64,
    final_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    steady_reach_time: Option<f64>,
}

/// Integrates the scenario and evaluates the requested measures at every
/// recorded sample.
pub fn simulate(spec: &ScenarioSpec) -> Result<RunOutput> {
    spec.validate()?;
    let generator = Liouvillian::new(&spec.bath()?)?;
    let rho0 = spec.initial_state()?;
    let mut evolution = Evolution::new(&generator, &rho0, &spec.evolution_config())?;
    let mut records = Vec::new();
    for sample in evolution.by_ref() {
        let (t, rho) = sample?;
        records.push(CorrelationRecord::evaluate(spec, t, &rho)?);
    }
    Ok(RunOutput {
        records,
        final_residual: evolution.residual(),
    })
}

/// Relaxes to the steady state and evaluates the measures there.
pub fn simulate_steady(spec: &ScenarioSpec) -> Result<(CorrelationRecord, f64, f64)> {
    spec.validate()?;
    let steady = steady_state(&spec.initial_state()?, &spec.bath()?, &spec.steady_config())?;
    let record = CorrelationRecord::evaluate(spec, steady.reach_time, &steady.state)?;
    Ok((record, steady.residual, steady.reach_time))
}

/// `<dir>/<stem>.meta.json` next to the CSV.
pub fn meta_path_for(csv_path: &Path) -> PathBuf {
    let stem = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    csv_path.with_file_name(format!("{stem}.meta.json"))
}

/// Runs a trajectory and writes the CSV plus its metadata sidecar.
pub fn run_scenario(spec: &ScenarioSpec, csv_path: &Path) -> Result<RunSummary> {
    let start = Instant::now();
    let output = simulate(spec)?;
    let wall = start.elapsed().as_secs_f64();
    emit(
        spec,
        csv_path,
        &output.records,
        output.final_residual,
        wall,
        None,
    )
}

/// Runs to the steady state and writes a one-row CSV plus sidecar.
pub fn run_steady(spec: &ScenarioSpec, csv_path: &Path) -> Result<RunSummary> {
    let start = Instant::now();
    let (record, residual, reach) = simulate_steady(spec)?;
    let wall = start.elapsed().as_secs_f64();
    emit(spec, csv_path, &[record], residual, wall, Some(reach))
}

fn emit(
    spec: &ScenarioSpec,
    csv_path: &Path,
    records: &[CorrelationRecord],
    final_residual: f64,
    wall_time_s: f64,
    steady_reach_time: Option<f64>,
) -> Result<RunSummary> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_csv(BufWriter::new(File::create(csv_path)?), spec, records)?;

    let meta_path = meta_path_for(csv_path);
    let sidecar = Sidecar {
        mode: if steady_reach_time.is_some() {
            "steady"
        } else {
            "trajectory"
        },
        version: VERSION,
        spec,
        csv: csv_path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        rows: records.len(),
        wall_time_s,
        final_residual,
        steady_reach_time,
    };
    fs::write(&meta_path, serde_json::to_string_pretty(&sidecar)?)?;

    Ok(RunSummary {
        csv_path: csv_path.to_path_buf(),
        meta_path,
        rows: records.len(),
        final_residual,
        wall_time_s,
        steady_reach_time,
    })
}
