use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("unknown parameter `{key}` in [{section}]{}", suggestion_hint(.suggestion))]
    UnknownParameter {
        section: String,
        key: String,
        suggestion: Option<String>,
    },

    #[error("unknown model `{id}`{}", suggestion_hint(.suggestion))]
    UnknownModel {
        id: String,
        suggestion: Option<String>,
    },

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error(
        "step size underflow at t = {t} (h = {h:e}); problem too stiff for the requested tolerance"
    )]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("step limit exceeded at t = {t}")]
    TooManySteps { t: f64 },

    #[error("non-finite right-hand side at t = {t}; check state and parameters")]
    NonFiniteDerivative { t: f64 },

    #[error("invalid time span [{start}, {end}]")]
    InvalidSpan { start: f64, end: f64 },

    #[error("invalid meal schedule: {0}")]
    InvalidSchedule(String),

    #[error("model `{0}` has no input-affine injection map; impulse meals are not supported")]
    MissingInjection(String),

    #[error("model `{0}` has no linear state-space realization")]
    NotLinear(String),

    #[error("model `{model}` is not linear in the meal size: {reason}")]
    NotLinearInMealSize { model: String, reason: String },

    #[error("position {z} outside the domain [{lo}, {hi}]")]
    OutsideDomain { z: f64, lo: f64, hi: f64 },

    #[error("interpolation nodes must be distinct (nodes {0} and {1} coincide)")]
    DuplicateNodes(usize, usize),

    #[error("root finding for degree {degree} polynomial did not converge")]
    RootFinding { degree: usize },

    #[error("delayed signal queried at t = {t}, before the available history (starts at {start})")]
    HistoryUnavailable { t: f64, start: f64 },

    #[error("empty integration interval [{0}, {1}]")]
    EmptyInterval(f64, f64),

    #[error("config {location}: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn suggestion_hint(s: &Option<String>) -> String {
    match s {
        Some(s) => format!(" (did you mean `{s}`?)"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}
