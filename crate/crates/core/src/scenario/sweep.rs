use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

use super::config::{check_keys, spec_from_value, ScenarioSpec};
use super::run::run_scenario;

/// Largest admissible Cartesian product of axis values.
pub const MAX_SWEEP_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// `key` or `key[index]` into the base config.
    pub path: String,
    pub values: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Value,
    pub axes: Vec<SweepAxis>,
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub params: Map<String, Value>,
    pub csv: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepIndex {
    pub points: Vec<SweepPoint>,
}

impl SweepIndex {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.status != "ok").count()
    }
}

pub fn parse_sweep(text: &str) -> Result<SweepSpec> {
    let value: Value = serde_json::from_str(text)?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::Config("sweep must be a JSON object".into()))?;
    check_keys(object, &["base", "axes", "output_dir"])?;
    let base = object
        .get("base")
        .cloned()
        .ok_or_else(|| Error::Config("sweep is missing `base`".into()))?;
    let axes: Vec<SweepAxis> = match object.get("axes") {
        Some(a) => serde_json::from_value(a.clone())?,
        None => Vec::new(),
    };
    let output_dir = object
        .get("output_dir")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Config("sweep is missing string `output_dir`".into()))?
        .into();
    let spec = SweepSpec {
        base,
        axes,
        output_dir,
    };
    spec.points()?;
    Ok(spec)
}

fn parse_path(path: &str) -> Result<(String, Option<usize>)> {
    let bad = || {
        Error::Config(format!(
            "bad sweep path {path:?}; expected `key` or `key[i]`"
        ))
    };
    match path.split_once('[') {
        None => Ok((path.to_string(), None)),
        Some((key, rest)) => {
            let index = rest.strip_suffix(']').ok_or_else(bad)?;
            Ok((key.to_string(), Some(index.parse().map_err(|_| bad())?)))
        }
    }
}

fn set_path(config: &mut Value, path: &str, value: Value) -> Result<()> {
    let (key, index) = parse_path(path)?;
    let object = config
        .as_object_mut()
        .ok_or_else(|| Error::Config("sweep base must be a JSON object".into()))?;
    match index {
        None => {
            object.insert(key, value);
        }
        Some(i) => {
            let slot = object
                .get_mut(&key)
                .and_then(Value::as_array_mut)
                .and_then(|a| a.get_mut(i))
                .ok_or_else(|| Error::Config(format!("sweep path {path:?} not present in base")))?;
            *slot = value;
        }
    }
    Ok(())
}

fn token(value: &Value) -> String {
    let raw = match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    raw.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || ".-+".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

impl SweepSpec {
    /// Every grid point as `(axis assignments, file name, spec)`, validated.
    pub fn points(&self) -> Result<Vec<(Map<String, Value>, String, ScenarioSpec)>> {
        let mut total = 1usize;
        for axis in &self.axes {
            if axis.values.is_empty() {
                return Err(Error::Config(format!(
                    "sweep axis {:?} has no values",
                    axis.path
                )));
            }
            parse_path(&axis.path)?;
            total = total.saturating_mul(axis.values.len());
        }
        if total > MAX_SWEEP_POINTS {
            return Err(Error::SweepTooLarge {
                points: total,
                limit: MAX_SWEEP_POINTS,
            });
        }

        let mut points = Vec::with_capacity(total);
        for flat in 0..total {
            let mut config = self.base.clone();
            let mut params = Map::new();
            let mut tokens = Vec::new();
            let mut rest = flat;
            let mut picks = vec![0; self.axes.len()];
            for (k, axis) in self.axes.iter().enumerate().rev() {
                picks[k] = rest % axis.values.len();
                rest /= axis.values.len();
            }
            for (axis, &pick) in self.axes.iter().zip(&picks) {
                let value = axis.values[pick].clone();
                set_path(&mut config, &axis.path, value.clone())?;
                let (key, index) = parse_path(&axis.path)?;
                let name = match index {
                    Some(i) => format!("{key}{i}"),
                    None => key,
                };
                tokens.push(format!("{name}={}", token(&value)));
                params.insert(axis.path.clone(), value);
            }
            if let Some(object) = config.as_object_mut() {
                object.remove("output_path");
            }
            let spec = spec_from_value(config)?;
            let file = if tokens.is_empty() {
                "run.csv".to_string()
            } else {
                format!("{}.csv", tokens.join("__"))
            };
            points.push((params, file, spec));
        }
        Ok(points)
    }
}

/// Runs every grid point into `output_dir` and writes `index.json`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepIndex> {
    let points = spec.points()?;
    fs::create_dir_all(&spec.output_dir)?;
    let dir: &Path = &spec.output_dir;
    let results: Vec<SweepPoint> = points
        .into_par_iter()
        .map(|(params, file, scenario)| {
            let outcome = run_scenario(&scenario, &dir.join(&file));
            SweepPoint {
                params,
                csv: file,
                status: if outcome.is_ok() { "ok" } else { "failed" }.into(),
                error: outcome.err().map(|e| e.to_string()),
            }
        })
        .collect();
    let index = SweepIndex { points: results };
    fs::write(
        dir.join("index.json"),
        serde_json::to_string_pretty(&index)?,
    )?;
    Ok(index)
}
