//! Scenario configuration, execution and output.
//!
//! A scenario is a JSON document (see [`parse_config`]); running it writes a
//! CSV with one row per recorded sample and a `<stem>.meta.json` sidecar.
//! CSV columns, in order: `t`; for each pair `i < j`: `C_i_j`,
//! `D_i_j_measB`, `D_i_j_measA`, `I_i_j`; then `xi2`, `xi2_defined`, `Jx`,
//! `Jy`, `Jz`, `trace_dev`, `min_eig`. Columns of measures that were not
//! requested are left out. Undefined squeezing is written as `nan` with
//! `xi2_defined = 0`.

mod config;
mod presets;
mod record;
mod run;
mod sweep;
mod validate;

pub use config::{all_pairs, parse_config, spec_from_value, InitialState, Measure, ScenarioSpec};
pub use presets::{preset, PresetOptions, PRESET_NAMES};
pub use record::{csv_header, csv_row, format_float, write_csv, CorrelationRecord, PairRecord};
pub use run::{
    meta_path_for, run_scenario, run_steady, simulate, simulate_steady, RunOutput, RunSummary,
};
pub use sweep::{
    parse_sweep, run_sweep, SweepAxis, SweepIndex, SweepPoint, SweepSpec, MAX_SWEEP_POINTS,
};
pub use validate::{validate, CheckResult, Fault, ValidateOptions, ValidationReport};
