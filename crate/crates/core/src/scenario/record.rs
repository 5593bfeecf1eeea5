use std::fmt::Write as _;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::hilbert::DensityMatrix;
use crate::measures::{concurrence, discord, mutual_information, MeasuredSide, PairState};
use crate::squeezing::{collective_moments, squeezing_from_moments};

use super::config::{Measure, ScenarioSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct PairRecord {
    pub pair: [usize; 2],
    pub concurrence: Option<f64>,
    /// Discord with the measurement on the second site of the pair.
    pub discord_meas_b: Option<f64>,
    /// Discord with the measurement on the first site of the pair.
    pub discord_meas_a: Option<f64>,
    pub mutual_information: Option<f64>,
}

/// One trajectory sample. Unrequested measures are `None`; `xi_squared` is
/// `Some(NaN)` when squeezing was requested but the mean spin vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRecord {
    pub t: f64,
    pub pairs: Vec<PairRecord>,
    pub xi_squared: Option<f64>,
    pub mean_spin: Option<[f64; 3]>,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
}

impl CorrelationRecord {
    pub fn evaluate(spec: &ScenarioSpec, t: f64, rho: &DensityMatrix) -> Result<Self> {
        let mut pairs = Vec::with_capacity(spec.pairs.len());
        for &[i, j] in &spec.pairs {
            let pair = PairState::from_state(rho, i, j)?;
            let mut record = PairRecord {
                pair: [i, j],
                concurrence: None,
                discord_meas_b: None,
                discord_meas_a: None,
                mutual_information: None,
            };
            if spec.wants(Measure::Concurrence) {
                record.concurrence = Some(concurrence(&pair)?);
            }
            if spec.wants(Measure::Discord) {
                record.discord_meas_b = Some(discord(&pair, MeasuredSide::B)?.discord);
                record.discord_meas_a = Some(discord(&pair, MeasuredSide::A)?.discord);
            }
            if spec.wants(Measure::MutualInformation) {
                record.mutual_information = Some(mutual_information(&pair)?);
            }
            pairs.push(record);
        }

        let needs_moments = spec.wants(Measure::SpinSqueezing) || spec.wants(Measure::Moments);
        let moments = if needs_moments {
            Some(collective_moments(rho)?)
        } else {
            None
        };
        let xi_squared = match (&moments, spec.wants(Measure::SpinSqueezing)) {
            (Some(m), true) => match squeezing_from_moments(m) {
                Ok(r) => Some(r.xi_squared),
                Err(Error::MeanSpinVanishes) => Some(f64::NAN),
                Err(e) => return Err(e),
            },
            _ => None,
        };
        let mean_spin = moments
            .filter(|_| spec.wants(Measure::Moments))
            .map(|m| [m.mean.x, m.mean.y, m.mean.z]);

        Ok(Self {
            t,
            pairs,
            xi_squared,
            mean_spin,
            trace_deviation: rho.trace() - 1.0,
            min_eigenvalue: rho.min_eigenvalue(),
        })
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&PairRecord> {
        self.pairs.iter().find(|p| p.pair == [i, j])
    }
}

/// Column names for a spec, in output order.
pub fn csv_header(spec: &ScenarioSpec) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    for &[i, j] in &spec.pairs {
        if spec.wants(Measure::Concurrence) {
            cols.push(format!("C_{i}_{j}"));
        }
        if spec.wants(Measure::Discord) {
            cols.push(format!("D_{i}_{j}_measB"));
            cols.push(format!("D_{i}_{j}_measA"));
        }
        if spec.wants(Measure::MutualInformation) {
            cols.push(format!("I_{i}_{j}"));
        }
    }
    if spec.wants(Measure::SpinSqueezing) {
        cols.push("xi2".into());
        cols.push("xi2_defined".into());
    }
    if spec.wants(Measure::Moments) {
        cols.extend(["Jx", "Jy", "Jz"].map(String::from));
    }
    cols.push("trace_dev".into());
    cols.push("min_eig".into());
    cols
}

/// Shortest round-trip decimal; `nan` for NaN, no negative zero.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

pub fn csv_row(record: &CorrelationRecord) -> String {
    let mut fields = vec![format_float(record.t)];
    for p in &record.pairs {
        for value in [
            p.concurrence,
            p.discord_meas_b,
            p.discord_meas_a,
            p.mutual_information,
        ]
        .into_iter()
        .flatten()
        {
            fields.push(format_float(value));
        }
    }
    if let Some(xi) = record.xi_squared {
        fields.push(format_float(xi));
        fields.push(if xi.is_nan() { "0" } else { "1" }.into());
    }
    if let Some(mean) = record.mean_spin {
        fields.extend(mean.iter().map(|&v| format_float(v)));
    }
    fields.push(format_float(record.trace_deviation));
    fields.push(format_float(record.min_eigenvalue));
    fields.join(",")
}

pub fn write_csv<W: Write>(
    mut out: W,
    spec: &ScenarioSpec,
    records: &[CorrelationRecord],
) -> io::Result<()> {
    let mut text = csv_header(spec).join(",");
    text.push('\n');
    for r in records {
        let _ = writeln!(text, "{}", csv_row(r));
    }
    out.write_all(text.as_bytes())
}
