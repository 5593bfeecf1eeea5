use std::collections::BTreeSet;
use std::path::PathBuf;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::dynamics::{
    BathSpec, EvolutionConfig, SteadyConfig, DEFAULT_DT, DEFAULT_RECORD_STRIDE, DEFAULT_STEADY_TOL,
    DEFAULT_T_GUARD, DEFAULT_T_MAX,
};
use crate::error::{Error, Result};
use crate::hilbert::{
    basis_state, density_from_pure, DensityMatrix, PureState, QubitRegister, C64, MAX_SITES,
};

pub const CONFIG_KEYS: [&str; 12] = [
    "n_sites",
    "initial",
    "gammas",
    "occupations",
    "dt",
    "t_max",
    "record_stride",
    "steady_tol",
    "measures",
    "pairs",
    "output_path",
    "t_guard",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Concurrence,
    Discord,
    MutualInformation,
    SpinSqueezing,
    Moments,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Concurrence,
        Measure::Discord,
        Measure::MutualInformation,
        Measure::SpinSqueezing,
        Measure::Moments,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Label(String),
    Amplitudes(Vec<[f64; 2]>),
}

impl InitialState {
    pub fn density(&self, n_sites: usize) -> Result<DensityMatrix> {
        let register = QubitRegister::new(n_sites)?;
        let psi = match self {
            InitialState::Label(label) => basis_state(label, register)?,
            InitialState::Amplitudes(amps) => PureState::new(DVector::from_iterator(
                amps.len(),
                amps.iter().map(|&[re, im]| C64::new(re, im)),
            ))?,
        };
        density_from_pure(&psi)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum PairsField {
    Keyword(String),
    List(Vec<[usize; 2]>),
}

#[derive(Debug, Deserialize)]
struct RawConfig {
    n_sites: usize,
    initial: InitialState,
    gammas: Option<Vec<f64>>,
    occupations: Option<Vec<f64>>,
    dt: Option<f64>,
    t_max: Option<f64>,
    record_stride: Option<usize>,
    steady_tol: Option<f64>,
    t_guard: Option<f64>,
    measures: Option<Vec<Measure>>,
    pairs: Option<PairsField>,
    output_path: Option<PathBuf>,
}

/// A fully validated scenario with defaults applied. Serializes back to the
/// config schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSpec {
    pub n_sites: usize,
    pub initial: InitialState,
    pub gammas: Vec<f64>,
    pub occupations: Vec<f64>,
    pub dt: f64,
    pub t_max: f64,
    pub record_stride: usize,
    pub steady_tol: f64,
    pub t_guard: f64,
    pub measures: Vec<Measure>,
    pub pairs: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

pub fn all_pairs(n_sites: usize) -> Vec<[usize; 2]> {
    (1..=n_sites)
        .flat_map(|i| (i + 1..=n_sites).map(move |j| [i, j]))
        .collect()
}

pub fn parse_config(text: &str) -> Result<ScenarioSpec> {
    let value: Value = serde_json::from_str(text)?;
    spec_from_value(value)
}

pub fn spec_from_value(value: Value) -> Result<ScenarioSpec> {
    let object = value
        .as_object()
        .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    check_keys(object, &CONFIG_KEYS)?;
    let raw: RawConfig = serde_json::from_value(value)?;
    raw.into_spec()
}

pub(crate) fn check_keys(object: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    let unknown: Vec<String> = object
        .keys()
        .filter(|k| !allowed.contains(&k.as_str()))
        .cloned()
        .collect();
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(Error::UnknownKeys(unknown))
    }
}

impl RawConfig {
    fn into_spec(self) -> Result<ScenarioSpec> {
        let n = self.n_sites;
        if !(2..=MAX_SITES).contains(&n) {
            return Err(Error::Config(format!(
                "n_sites {n} outside supported range 2..={MAX_SITES}"
            )));
        }
        match &self.initial {
            InitialState::Label(label) => {
                let len = label.chars().count();
                if len != n {
                    return Err(Error::Config(format!("initial length {len} ≠ n_sites {n}")));
                }
            }
            InitialState::Amplitudes(amps) => {
                if amps.len() != 1 << n {
                    return Err(Error::Config(format!(
                        "initial has {} amplitudes ≠ 2^n_sites = {}",
                        amps.len(),
                        1 << n
                    )));
                }
            }
        }
        let fibers = n - 1;
        let occupations = self
            .occupations
            .ok_or_else(|| Error::Config("missing field `occupations`".into()))?;
        if occupations.len() != fibers {
            return Err(Error::Config(format!(
                "occupations length {} ≠ n_sites − 1 = {fibers}",
                occupations.len()
            )));
        }
        let gammas = self.gammas.unwrap_or_else(|| vec![1.0; fibers]);
        if gammas.len() != fibers {
            return Err(Error::Config(format!(
                "gammas length {} ≠ n_sites − 1 = {fibers}",
                gammas.len()
            )));
        }

        let measures = match self.measures {
            None => Measure::ALL.to_vec(),
            Some(list) => list
                .into_iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        };
        let pairs = match self.pairs {
            None => all_pairs(n),
            Some(PairsField::Keyword(k)) if k == "all" => all_pairs(n),
            Some(PairsField::Keyword(k)) => {
                return Err(Error::Config(format!(
                    "pairs must be \"all\" or a list of [i, j], got {k:?}"
                )))
            }
            Some(PairsField::List(list)) => {
                for &[i, j] in &list {
                    if !(1 <= i && i < j && j <= n) {
                        return Err(Error::Config(format!(
                            "pair [{i}, {j}] must satisfy 1 ≤ i < j ≤ {n}"
                        )));
                    }
                }
                list.into_iter()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect()
            }
        };

        let spec = ScenarioSpec {
            n_sites: n,
            initial: self.initial,
            gammas,
            occupations,
            dt: self.dt.unwrap_or(DEFAULT_DT),
            t_max: self.t_max.unwrap_or(DEFAULT_T_MAX),
            record_stride: self.record_stride.unwrap_or(DEFAULT_RECORD_STRIDE),
            steady_tol: self.steady_tol.unwrap_or(DEFAULT_STEADY_TOL),
            t_guard: self.t_guard.unwrap_or(DEFAULT_T_GUARD),
            measures,
            pairs,
            output_path: self.output_path,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl ScenarioSpec {
    /// Checks everything the parser checks; for specs built in code.
    pub fn validate(&self) -> Result<()> {
        self.bath()?;
        self.evolution_config().validate()?;
        self.initial_state()?;
        if !(self.t_guard > 0.0 && self.t_guard.is_finite()) {
            return Err(Error::Config(format!(
                "t_guard = {} must be positive",
                self.t_guard
            )));
        }
        Ok(())
    }

    pub fn bath(&self) -> Result<BathSpec> {
        BathSpec::new(self.gammas.clone(), self.occupations.clone())
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        self.initial.density(self.n_sites)
    }

    pub fn evolution_config(&self) -> EvolutionConfig {
        EvolutionConfig {
            dt: self.dt,
            t_max: self.t_max,
            record_stride: self.record_stride,
            steady_tol: self.steady_tol,
        }
    }

    pub fn steady_config(&self) -> SteadyConfig {
        SteadyConfig {
            dt: self.dt,
            steady_tol: self.steady_tol,
            t_guard: self.t_guard,
        }
    }

    pub fn wants(&self, measure: Measure) -> bool {
        self.measures.contains(&measure)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}
