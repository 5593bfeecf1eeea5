//! Simulation of chains of polaritonic qubits coupled by thermal fibers.
//!
//! Each fiber `j` joins sites `j` and `j + 1` and dissipates only through the
//! collective lowering operator `σ_j⁻ + σ_{j+1}⁻`, at rate `γ_j` and thermal
//! occupation `n_j`. The crate integrates the resulting master equation and
//! evaluates pairwise concurrence, quantum discord, and the Kitagawa–Ueda
//! spin-squeezing parameter along the trajectory.
//!
//! Modules, bottom-up:
//!
//! * [`hilbert`]: register, basis states, density matrices, ladder algebra,
//!   partial traces.
//! * [`dynamics`]: the generator, RK4 integration, steady states.
//! * [`measures`]: entropy, mutual information, concurrence, discord.
//! * [`squeezing`]: collective spin moments and ξ_s².
//! * [`oracle`]: slow dense reference implementations used for validation.
//! * [`scenario`]: JSON configs, CSV output, sweeps, presets, `validate`.

pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod measures;
pub mod oracle;
pub mod scenario;
pub mod squeezing;

pub use dynamics::{
    evolve, liouvillian_apply, rk4_step, steady_state, BathSpec, EvolutionConfig, Liouvillian,
    SteadyConfig, SteadyState, Trajectory,
};
pub use error::{Error, Result};
pub use hilbert::{
    apply_ladder, basis_state, density_from_pure, expectation, partial_trace, DensityMatrix,
    Ladder, Observable, PureState, QubitRegister, Side, SiteOp, C64,
};
pub use measures::{
    classical_correlation, concurrence, conditional_entropy, conditional_entropy_with, discord,
    measurement_projectors, mutual_information, von_neumann_entropy, DiscordReport, MeasuredSide,
    MeasurementBasis, PairState,
};
pub use scenario::{
    parse_config, preset, run_scenario, run_sweep, validate, CorrelationRecord, ScenarioSpec,
    SweepSpec,
};
pub use squeezing::{
    collective_moments, mean_spin_angles, spin_squeezing, CollectiveMoments, SqueezingResult,
};

/// Library version, echoed into run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
