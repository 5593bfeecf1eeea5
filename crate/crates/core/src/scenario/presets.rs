use serde_json::json;

use crate::error::{Error, Result};

use super::config::{spec_from_value, ScenarioSpec};

pub const PRESET_NAMES: [&str; 5] = ["fig2", "fig3", "fig4", "fig5", "fig6"];

/// Overrides accepted by [`preset`]. `fig4` requires both.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PresetOptions {
    /// Temperature of the heated fiber (all fibers for `fig4`).
    pub n: Option<f64>,
    pub initial: Option<String>,
}

/// Scenario of a named figure regime:
///
/// * `fig2`: N = 3 from |GGG⟩, n = (n, 0), n defaults to 0.2 (other panel: 1)
/// * `fig3`: N = 3 from |EEE⟩, n = (n, 0), n defaults to 0 (other panel: 0.2)
/// * `fig4`: N = 3, n = (n, n), initial state and n required
/// * `fig5`: N = 5 from |GGGGG⟩, n = (0, n, 0, 0), n defaults to 0.2 (other panel: 1)
/// * `fig6`: N = 5 from |EEEEE⟩, n = (0, n, 0, 0), n defaults to 0.2 (other panel: 1)
pub fn preset(name: &str, options: &PresetOptions) -> Result<ScenarioSpec> {
    let (n_sites, initial, occupations, t_max) = match name {
        "fig2" => (
            3,
            "GGG".to_string(),
            vec![options.n.unwrap_or(0.2), 0.0],
            50.0,
        ),
        "fig3" => (
            3,
            "EEE".to_string(),
            vec![options.n.unwrap_or(0.0), 0.0],
            50.0,
        ),
        "fig4" => {
            let n = options
                .n
                .ok_or_else(|| Error::Config("preset fig4 requires --n".into()))?;
            let initial = options
                .initial
                .clone()
                .ok_or_else(|| Error::Config("preset fig4 requires --initial".into()))?;
            (3, initial, vec![n, n], 50.0)
        }
        "fig5" | "fig6" => {
            let label = if name == "fig5" { "GGGGG" } else { "EEEEE" };
            (
                5,
                label.to_string(),
                vec![0.0, options.n.unwrap_or(0.2), 0.0, 0.0],
                100.0,
            )
        }
        other => {
            return Err(Error::Config(format!(
                "unknown preset {other:?}; expected one of {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    let initial = match (name, &options.initial) {
        ("fig4", _) | (_, None) => initial,
        (_, Some(label)) => label.clone(),
    };
    spec_from_value(json!({
        "n_sites": n_sites,
        "initial": initial,
        "occupations": occupations,
        "t_max": t_max,
    }))
}
