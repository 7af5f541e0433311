use thiserror::Error;

/// Errors raised by the library. Values such as "no fixed point" or
/// "minimal period exceeds the search cap" are reported through return types,
/// not through this enum.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("map is not expand-on-average (average slope {average_slope} <= 1)")]
    NotExpandOnAverage { average_slope: String },

    #[error("point {0} lies at the discontinuity and carries no side")]
    PointAtDiscontinuityWithoutSide(String),

    #[error("point {point} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { point: String, lo: String, hi: String },

    #[error("orbit hit the critical point at step {step}")]
    HitCritical { step: usize },

    #[error("search cap of {cap} exceeded while {what}")]
    CapExceeded { what: String, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expected exactly one cycle of minimal period {kappa}, found {found}")]
    UniquenessViolation { kappa: usize, found: usize },

    #[error("no admissible cycle of minimal period {kappa}")]
    NotFound { kappa: usize },

    #[error("continuity witness search exceeded {cap} iterates")]
    ContinuityWitnessFailure { cap: usize },

    #[error("precondition of the product inequalities could not be located")]
    PreconditionNotLocated,

    #[error("inequality violated: {0}")]
    ViolationFound(String),

    #[error("kneading comparison gives no monotone bracket for alpha")]
    NoMonotoneBracket,

    #[error("internal invariant broken: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
