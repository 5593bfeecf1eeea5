use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{
    liouvillian_apply, steady_state, BathSpec, Evolution, EvolutionConfig, Liouvillian,
    SteadyConfig,
};
use crate::error::Result;
use crate::hilbert::{max_abs_diff, DensityMatrix, C64};
use crate::measures::{discord, MeasuredSide, PairState};
use crate::oracle::{
    dense_liouvillian, discord_grid, expm_propagate, random_bath, random_density, squeezing_scan,
    unique_steady_state, DenseLiouvillian,
};
use crate::squeezing::spin_squeezing;

/// Deliberate corruption used as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// The oracle generator uses `−γ₁` on the first fiber.
    NegatedRate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    /// Multiplies every tolerance; values below 1 tighten the checks.
    pub tolerance_factor: f64,
    pub fault: Option<Fault>,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            tolerance_factor: 1.0,
            fault: None,
            seed: 20_140_815,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub error: Option<String>,
}

impl CheckResult {
    /// `tolerance / deviation`; above 1 means the check passes with room.
    pub fn margin(&self) -> f64 {
        self.tolerance / self.deviation
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        match &self.error {
            Some(e) => write!(f, "{status} {}: error: {e}", self.name),
            None => write!(
                f,
                "{status} {}: deviation {:.3e} (tolerance {:.1e}, margin {:.2e})",
                self.name,
                self.deviation,
                self.tolerance,
                self.margin()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the oracle cross-checks.
pub fn validate(options: &ValidateOptions) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let factor = options.tolerance_factor;
    let mut checks = Vec::new();
    let mut record = |name: &'static str, tolerance: f64, outcome: Result<f64>| {
        let tolerance = tolerance * factor;
        checks.push(match outcome {
            Ok(deviation) => CheckResult {
                name,
                deviation,
                tolerance,
                passed: deviation <= tolerance,
                error: None,
            },
            Err(e) => CheckResult {
                name,
                deviation: f64::NAN,
                tolerance,
                passed: false,
                error: Some(e.to_string()),
            },
        });
    };

    record(
        "liouvillian dense vs fast (50 random instances, N = 2, 3)",
        1e-12,
        liouvillian_check(&mut rng, options.fault),
    );
    record(
        "discord optimizer vs 0.5° grid",
        1e-4,
        discord_check(&mut rng),
    );
    record(
        "squeezing eigenvalue vs 0.1° scan",
        1e-6,
        squeezing_check(&mut rng),
    );
    record(
        "RK4 vs matrix exponential (|GGG⟩, n = (0.2, 0), t = 1)",
        1e-8,
        propagation_check(),
    );
    record(
        "steady state relaxation vs kernel (N = 3, n = (0.2, 0.5))",
        1e-7,
        steady_check(),
    );
    ValidationReport { checks }
}

fn oracle_for(bath: &BathSpec, n: usize, fault: Option<Fault>) -> Result<DenseLiouvillian> {
    let dense = dense_liouvillian(bath, n)?;
    match fault {
        None => Ok(dense),
        Some(Fault::NegatedRate) => {
            let mut gammas = vec![0.0; bath.n_fibers()];
            gammas[0] = bath.gammas()[0];
            let first = dense_liouvillian(&BathSpec::new(gammas, bath.occupations().to_vec())?, n)?;
            let corrupted = dense.matrix() - first.matrix() * C64::new(2.0, 0.0);
            Ok(DenseLiouvillian::from_raw(n, corrupted))
        }
    }
}

fn liouvillian_check(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..50 {
        let n = 2 + k % 2;
        let bath = random_bath(rng, n);
        let rho = random_density(rng, n);
        let dense = oracle_for(&bath, n, fault)?.apply(rho.matrix())?;
        let fast = liouvillian_apply(&rho, &bath)?;
        worst = worst.max(max_abs_diff(&dense, &fast));
    }
    Ok(worst)
}

fn discord_check(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let pair = PairState::new(random_density(rng, 2), (1, 2))?;
        for side in [MeasuredSide::A, MeasuredSide::B] {
            let fast = discord(&pair, side)?.discord;
            let grid = discord_grid(&pair, side, 0.5)?;
            worst = worst.max((fast - grid).abs());
        }
    }
    Ok(worst)
}

fn squeezing_check(rng: &mut ChaCha8Rng) -> Result<f64> {
    let generator = Liouvillian::new(&BathSpec::zero_temperature(3))?;
    let config = EvolutionConfig {
        t_max: 1.0,
        record_stride: 1000,
        ..EvolutionConfig::default()
    };
    let rho0 = DensityMatrix::from_label("EEG")?;
    let mut states: Vec<DensityMatrix> = Evolution::new(&generator, &rho0, &config)?
        .map(|s| s.map(|(_, rho)| rho))
        .collect::<Result<_>>()?;
    states.push(random_density(rng, 3));
    let mut worst = 0.0f64;
    for rho in states.iter().skip(1) {
        let eig = spin_squeezing(rho)?.xi_squared;
        let scan = squeezing_scan(rho, 0.1)?;
        worst = worst.max((eig - scan).abs());
    }
    Ok(worst)
}

fn propagation_check() -> Result<f64> {
    let bath = BathSpec::unit_rates(vec![0.2, 0.0])?;
    let rho0 = DensityMatrix::from_label("GGG")?;
    let generator = Liouvillian::new(&bath)?;
    let config = EvolutionConfig {
        t_max: 1.0,
        record_stride: 1000,
        ..EvolutionConfig::default()
    };
    let rk = Evolution::new(&generator, &rho0, &config)?
        .last()
        .expect("at least one sample")?
        .1;
    let exact = expm_propagate(&dense_liouvillian(&bath, 3)?, &rho0, 1.0)?;
    Ok(max_abs_diff(rk.matrix(), exact.matrix()))
}

fn steady_check() -> Result<f64> {
    let bath = BathSpec::unit_rates(vec![0.2, 0.5])?;
    let relaxed = steady_state(
        &DensityMatrix::from_label("GGG")?,
        &bath,
        &SteadyConfig {
            steady_tol: 1e-10,
            ..SteadyConfig::default()
        },
    )?;
    let kernel = unique_steady_state(&dense_liouvillian(&bath, 3)?)?;
    Ok(max_abs_diff(relaxed.state.matrix(), kernel.matrix()))
}
