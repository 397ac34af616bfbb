use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation contract (dimension mismatch, bad argument).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A composite space would exceed the configured dimension cap.
    #[error("dimension {requested} exceeds cap {cap}")]
    Resource { requested: usize, cap: usize },

    /// A quantity that must be real or non-negative drifted beyond tolerance.
    #[error("numerical health check failed: {0}")]
    NumericalHealth(String),

    /// A decomposition did not converge or reconstruct.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A theorem precondition (conservation, Yanase) does not hold for the model.
    #[error("precondition `{condition}` violated: commutator norm {norm:e}")]
    Precondition { condition: &'static str, norm: f64 },

    /// A truncated Fock expansion lost too much weight.
    #[error("Fock cutoff {cutoff} too small: norm deficit {deficit:e}")]
    Cutoff { cutoff: usize, deficit: f64 },

    /// A relation or bound that must hold was found violated.
    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("invalid input: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// Process exit code for the batch runner: 1 for violated bounds,
    /// 2 for usage errors, 3 for numerical-health problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BoundViolation(_) => 1,
            Error::Usage(_) | Error::Contract(_) | Error::Json(_) | Error::Resource { .. } => 2,
            Error::NumericalHealth(_) | Error::Numerical(_) | Error::Cutoff { .. } => 3,
            Error::Precondition { .. } => 1,
            Error::Io(_) | Error::Csv(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
