use core::fmt;

/// A scenario or parameter set that violates a documented precondition.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    TooFewAgents(usize),
    NonPositive {
        field: &'static str,
        value: f64,
    },
    Negative {
        field: &'static str,
        value: f64,
    },
    NonFinite {
        field: &'static str,
    },
    /// `epsilon` must lie strictly inside `(0, lambda)`.
    EpsilonOutOfRange {
        epsilon: f64,
        lambda: f64,
    },
    MuBelowOne(f64),
    N0BelowOne(f64),
    DurationShorterThanStep {
        duration: f64,
        dt: f64,
    },
    PoseCount {
        expected: usize,
        found: usize,
    },
    EmptyRange(&'static str),
    TooFewWfiSamples(usize),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::TooFewAgents(n) => write!(f, "need at least 2 agents, got {n}"),
            ConfigError::NonPositive { field, value } => {
                write!(f, "`{field}` must be > 0, got {value}")
            }
            ConfigError::Negative { field, value } => {
                write!(f, "`{field}` must be >= 0, got {value}")
            }
            ConfigError::NonFinite { field } => write!(f, "`{field}` must be finite"),
            ConfigError::EpsilonOutOfRange { epsilon, lambda } => write!(
                f,
                "`epsilon` must lie in (0, lambda) = (0, {lambda}), got {epsilon}"
            ),
            ConfigError::MuBelowOne(mu) => write!(f, "`mu_k` must be >= 1, got {mu}"),
            ConfigError::N0BelowOne(n0) => write!(f, "`n0` must be >= 1, got {n0}"),
            ConfigError::DurationShorterThanStep { duration, dt } => write!(
                f,
                "`duration` ({duration}) must be 0 or at least one step (dt = {dt})"
            ),
            ConfigError::PoseCount { expected, found } => write!(
                f,
                "explicit initial poses: expected {expected} entries, found {found}"
            ),
            ConfigError::EmptyRange(field) => write!(f, "`{field}` range is empty"),
            ConfigError::TooFewWfiSamples(n) => {
                write!(f, "`wfi_samples` must be at least 8, got {n}")
            }
        }
    }
}

impl ConfigError {
    /// Dotted name of the offending setting, when there is a single one.
    pub fn field(&self) -> &'static str {
        match self {
            ConfigError::TooFewAgents(_) => "n_agents",
            ConfigError::NonPositive { field, .. }
            | ConfigError::Negative { field, .. }
            | ConfigError::NonFinite { field }
            | ConfigError::EmptyRange(field) => field,
            ConfigError::EpsilonOutOfRange { .. } => "epsilon",
            ConfigError::MuBelowOne(_) => "mu_k",
            ConfigError::N0BelowOne(_) => "n0",
            ConfigError::DurationShorterThanStep { .. } => "duration",
            ConfigError::PoseCount { .. } => "init.poses",
            ConfigError::TooFewWfiSamples(_) => "wfi_samples",
        }
    }
}

impl core::error::Error for ConfigError {}

pub(crate) fn check_positive(field: &'static str, value: f64) -> Result<(), ConfigError> {
    if !value.is_finite() {
        return Err(ConfigError::NonFinite { field });
    }
    if value <= 0.0 {
        return Err(ConfigError::NonPositive { field, value });
    }
    Ok(())
}

pub(crate) fn check_nonnegative(field: &'static str, value: f64) -> Result<(), ConfigError> {
    if !value.is_finite() {
        return Err(ConfigError::NonFinite { field });
    }
    if value < 0.0 {
        return Err(ConfigError::Negative { field, value });
    }
    Ok(())
}
