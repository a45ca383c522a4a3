use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("nonpositive damping: {name} = {value}")]
    NonpositiveDamping { name: &'static str, value: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("operation requires the symmetric setting (delta_1 = -delta_2 = 2 omega, j_1 = j_2, kappa_1 = kappa_2)")]
    NotSymmetric,

    #[error("non-Lindbladizable rates: (gamma_minus + gamma_plus)^2 - 4 gamma_s^2 = {discriminant}")]
    NonLindbladizable { discriminant: f64 },

    #[error("unstable: gamma_minus - gamma_plus = {gap}")]
    Unstable { gap: f64 },

    #[error("drive ratio r = {0} is outside [0, 1)")]
    RatioOutOfRange(f64),

    #[error("variance must be positive, got {0}")]
    NonpositiveVariance(f64),

    #[error("epsilon = {0} is outside the domain eps < 1")]
    EpsilonOutOfDomain(f64),

    #[error("unstable drift: max eigenvalue real part {max_real_part}")]
    UnstableDrift { max_real_part: f64 },

    #[error("unstable periodic dynamics: Floquet spectral radius {spectral_radius}")]
    UnstablePeriodic { spectral_radius: f64 },

    #[error("non-convergent after {periods} periods (residual {residual:e})")]
    NonConvergent { periods: u64, residual: f64 },

    #[error("algebraic steady state requires a time-independent drift")]
    TimeDependentDrift,

    #[error("singular linear system in {0}")]
    Singular(&'static str),

    #[error("no interior minimum: optimum at range boundary {argmin}")]
    NoInteriorMinimum { argmin: f64 },

    #[error("spectral scan failed to bracket {0}")]
    NoExtremum(&'static str),

    #[error("config: {0}")]
    Config(String),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
