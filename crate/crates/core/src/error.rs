use thiserror::Error;

/// Errors raised by model construction, solvers and oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network instance: {0}")]
    InvalidInstance(String),

    #[error("invalid system parameters: {0}")]
    InvalidParams(String),

    #[error("instance has no relays")]
    NoRelays,

    #[error("threshold gamma={gamma} exceeds the strongest-relay bound {bound} (would need alpha > 1)")]
    InfeasibleThreshold { gamma: f64, bound: f64 },

    #[error("monotonicity threshold undefined: rho_e = {rho_e} is too close to 2")]
    SingularObservation { rho_e: f64 },

    #[error("alpha = 0 leaves the source weight unconstrained")]
    DegenerateAlpha,

    #[error("source budget cannot cancel the artificial noise: {0}")]
    InfeasibleBudget(String),

    #[error("no admissible root for the clamped sub-problem")]
    NoFeasibleRoot,

    #[error("wrong budget kind: expected {expected}")]
    WrongBudget { expected: &'static str },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("oracle objective evaluated to a non-finite value at {0}")]
    OracleEval(f64),

    #[error("grid oracle limited to 3 relays, got {0}")]
    OracleTooLarge(usize),

    #[error("instance resampling exhausted after {0} attempts")]
    ResampleExhausted(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
