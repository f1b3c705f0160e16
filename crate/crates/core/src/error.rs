use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("resource budget exceeded: {budget} (limit {limit})")]
    Budget { budget: &'static str, limit: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("order of the zero polynomial is undefined")]
    UndefinedOrder,

    #[error("genericity failure after {attempts} draws: {detail}")]
    Genericity { attempts: usize, detail: String },

    #[error("not finite over the base: {0}")]
    NotFinite(String),

    #[error("oracle inconclusive: {0}")]
    Inconclusive(String),

    #[error("stratum is not a linear subspace: {0}")]
    NonLinearStratum(String),

    #[error("center rejected: {0}")]
    CenterRejected(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("no locus: {0}")]
    NoLocus(String),
}

impl Error {
    /// Stable machine-readable code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Budget { .. } => "E_BUDGET",
            Error::InvalidInput(_) => "E_INPUT",
            Error::Contract(_) => "E_CONTRACT",
            Error::UndefinedOrder => "E_ORDER",
            Error::Genericity { .. } => "E_GENERICITY",
            Error::NotFinite(_) => "E_NOT_FINITE",
            Error::Inconclusive(_) => "E_INCONCLUSIVE",
            Error::NonLinearStratum(_) => "E_NONLINEAR_STRATUM",
            Error::CenterRejected(_) => "E_CENTER",
            Error::TheoremViolation(_) => "E_THEOREM",
            Error::Internal(_) => "E_INTERNAL",
            Error::NoLocus(_) => "E_NO_LOCUS",
        }
    }

    /// Resource-type errors map to exit code 2 in the CLI.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::Inconclusive(_))
    }
}
