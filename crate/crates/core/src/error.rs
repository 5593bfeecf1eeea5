use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("label/register size mismatch: label has {label} sites, register has {register}")]
    LabelMismatch { label: usize, register: usize },

    #[error("unknown site symbol {0:?} (expected 'G' or 'E')")]
    UnknownSiteSymbol(char),

    #[error("register size {0} outside supported range 1..={max}", max = crate::hilbert::MAX_SITES)]
    RegisterSize(usize),

    #[error("state not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("site {site} out of range for {n_sites}-site register")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("invalid site list: {0}")]
    InvalidSites(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("state not positive: eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("invalid spin-flip spectrum: eigenvalue {re:e}{im:+e}i")]
    InvalidSpinFlipSpectrum { re: f64, im: f64 },

    #[error("optimizer failed to reach sup: discord {0:e}")]
    OptimizerFailed(f64),

    #[error("mean spin vanishes; squeezing undefined")]
    MeanSpinVanishes,

    #[error("covariance matrix not positive semidefinite: eigenvalue {0:e}")]
    CovarianceNotPsd(f64),

    #[error("invalid bath: {0}")]
    InvalidBath(String),

    #[error("invalid parameter: {0}")]
    InvalidConfig(String),

    #[error(
        "positivity violated at t = {t}: minimum eigenvalue {min_eig:e} (time step too large?)"
    )]
    PositivityViolation { t: f64, min_eig: f64 },

    #[error("integration diverged at t = {t} (time step too large?)")]
    Diverged { t: f64 },

    #[error("no steady state within guard: ‖L[ρ]‖ = {last_norm:e} at t = {t_guard}")]
    NoSteadyState { last_norm: f64, t_guard: f64 },

    #[error("register too large for dense oracle: {n_sites} sites (max {max})")]
    OracleTooLarge { n_sites: usize, max: usize },

    #[error("generator kernel is empty (smallest singular value {0:e})")]
    EmptyKernel(f64),

    #[error("steady state not unique: kernel dimension {0}")]
    NonUniqueSteadyState(usize),

    #[error("unknown config keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),

    #[error("config: {0}")]
    Config(String),

    #[error("sweep has {points} points, exceeding the limit of {limit}")]
    SweepTooLarge { points: usize, limit: usize },

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error stems from user input (config, labels, sizes) rather
    /// than from the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::LabelMismatch { .. }
                | Error::UnknownSiteSymbol(_)
                | Error::RegisterSize(_)
                | Error::NotNormalized(_)
                | Error::SiteOutOfRange { .. }
                | Error::InvalidSites(_)
                | Error::InvalidBath(_)
                | Error::InvalidConfig(_)
                | Error::UnknownKeys(_)
                | Error::Config(_)
                | Error::SweepTooLarge { .. }
                | Error::Json(_)
        )
    }
}
