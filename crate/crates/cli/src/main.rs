use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cavity_chain::scenario::{
    self, parse_config, parse_sweep, preset, run_scenario, run_steady, run_sweep, Fault,
    PresetOptions, RunSummary, ScenarioSpec, ValidateOptions,
};
use cavity_chain::Error;
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VALIDATION: u8 = 4;

/// Fiber-coupled cavity chains under thermal collective dissipation.
#[derive(Parser)]
#[command(name = "cavity-chain", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write its correlation CSV.
    Simulate {
        config: PathBuf,
        /// Overrides `output_path` from the config.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every point of a parameter sweep.
    Sweep { sweep: PathBuf },
    /// Relax a scenario to its steady state and write a one-row CSV.
    Steady {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-check the fast paths against the dense oracles.
    Validate {
        #[arg(short, long)]
        verbose: bool,
        /// Multiplies every tolerance (use < 1 to tighten).
        #[arg(long, default_value_t = 1.0)]
        tolerance_factor: f64,
        /// Negative control: corrupt the oracle on purpose.
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Run (or print) the scenario of a figure regime.
    Preset {
        #[arg(value_parser = scenario::PRESET_NAMES)]
        name: String,
        /// Print the scenario config instead of running it.
        #[arg(long)]
        emit_config: bool,
        /// Occupation of the heated fiber (both fibers for fig4).
        #[arg(long)]
        n: Option<f64>,
        /// Initial basis label, e.g. EEG.
        #[arg(long)]
        initial: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    NegatedRate,
}

fn exit_code(err: &Error) -> u8 {
    if err.is_config_error() || matches!(err, Error::Io(_)) {
        EXIT_CONFIG
    } else {
        EXIT_NUMERICAL
    }
}

fn fail(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(exit_code(&err))
}

fn load_spec(path: &Path) -> Result<ScenarioSpec, Error> {
    parse_config(&fs::read_to_string(path)?)
}

fn output_for(spec: &ScenarioSpec, explicit: Option<PathBuf>, fallback: PathBuf) -> PathBuf {
    explicit
        .or_else(|| spec.output_path.clone())
        .unwrap_or(fallback)
}

fn stem_csv(config: &Path, suffix: &str) -> PathBuf {
    let stem = config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    PathBuf::from(format!("{stem}{suffix}.csv"))
}

fn report(summary: &RunSummary) {
    println!(
        "wrote {} ({} rows, final ‖L[ρ]‖ = {:e}, {:.2} s); metadata in {}",
        summary.csv_path.display(),
        summary.rows,
        summary.final_residual,
        summary.wall_time_s,
        summary.meta_path.display()
    );
    if let Some(t) = summary.steady_reach_time {
        println!("steady state reached at t = {t}");
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Simulate { config, output } => {
            let spec = load_spec(&config)?;
            let csv = output_for(&spec, output, stem_csv(&config, ""));
            report(&run_scenario(&spec, &csv)?);
        }
        Command::Steady { config, output } => {
            let spec = load_spec(&config)?;
            let csv = output_for(&spec, output, stem_csv(&config, ".steady"));
            report(&run_steady(&spec, &csv)?);
        }
        Command::Sweep { sweep } => {
            let spec = parse_sweep(&fs::read_to_string(&sweep)?)?;
            let index = run_sweep(&spec)?;
            let failed = index.failures();
            println!(
                "{} points, {} failed; index in {}",
                index.points.len(),
                failed,
                spec.output_dir.join("index.json").display()
            );
            for p in index.points.iter().filter(|p| p.error.is_some()) {
                eprintln!("{}: {}", p.csv, p.error.as_deref().unwrap_or_default());
            }
            if failed > 0 {
                return Ok(ExitCode::from(EXIT_NUMERICAL));
            }
        }
        Command::Validate {
            verbose,
            tolerance_factor,
            inject_fault,
        } => {
            if !(tolerance_factor > 0.0) {
                return Err(Error::Config("--tolerance-factor must be positive".into()));
            }
            let options = ValidateOptions {
                tolerance_factor,
                fault: inject_fault.map(|FaultArg::NegatedRate| Fault::NegatedRate),
                ..ValidateOptions::default()
            };
            let result = scenario::validate(&options);
            for check in &result.checks {
                if verbose || !check.passed || tolerance_factor != 1.0 {
                    println!("{check}");
                } else {
                    println!("PASS {}", check.name);
                }
            }
            if !result.all_passed() {
                return Ok(ExitCode::from(EXIT_VALIDATION));
            }
        }
        Command::Preset {
            name,
            emit_config,
            n,
            initial,
            output,
        } => {
            let spec = preset(&name, &PresetOptions { n, initial })?;
            if emit_config {
                println!("{}", spec.to_json());
            } else {
                let csv = output_for(&spec, output, PathBuf::from(format!("{name}.csv")));
                report(&run_scenario(&spec, &csv)?);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    run(cli.command).unwrap_or_else(fail)
}
