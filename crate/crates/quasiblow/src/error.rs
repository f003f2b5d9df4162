//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the simulation and diagnostic layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Wave speed evaluated outside its positivity domain.
    #[error("speed evaluation at u = {u} outside positivity domain ({lo}, {hi})")]
    DomainViolation { u: f64, lo: f64, hi: f64 },

    /// Paired arrays of different lengths.
    #[error("array length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Scaled initial-data support does not fit inside the grid.
    #[error("scaled profile support [{lo}, {hi}] exceeds grid [{x_min}, {x_max}]")]
    SupportOverflow {
        lo: f64,
        hi: f64,
        x_min: f64,
        x_max: f64,
    },

    /// A theorem-scenario hypothesis does not hold.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    /// Requested anchor lies outside the stored trajectory footprint.
    #[error("anchor (t = {t}, x = {x}) outside trajectory footprint")]
    AnchorOutOfRange { t: f64, x: f64 },

    /// A backward characteristic left the grid before reaching t = 0.
    #[error("characteristic triangle exits the grid (apex t = {t}, x = {x})")]
    TriangleExitsGrid { t: f64, x: f64 },

    /// Blow-up estimation requested on a run that reached t_max.
    #[error("no blow-up: finest run reached t_max = {t_max}")]
    NoBlowup { t_max: f64 },

    /// Too few usable scales for a modulus-of-continuity fit.
    #[error("insufficient resolution: {usable} usable scales, need {needed}")]
    InsufficientResolution { usable: usize, needed: usize },

    /// Riemann-invariant exponent a = -1 makes (1+u)^(a+1)/(a+1) undefined.
    #[error("degenerate exponent a = -1 for Riemann invariants")]
    DegenerateExponent,

    /// Log–log fit without enough distinct abscissae.
    #[error("degenerate abscissae: {0} distinct values, need at least 3")]
    DegenerateAbscissae(usize),

    /// Closed-form Riccati solution queried at or past its blow-up time.
    #[error("Riccati evaluation at t = {t} at/past blow-up time {t_star}")]
    EvaluationPastBlowup { t: f64, t_star: f64 },

    /// Query outside the stored time/space range.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// Field state stopped being finite.
    #[error("non-finite value encountered at t = {t}")]
    NonfiniteValue { t: f64 },

    /// Wave speed lost uniform positivity during a step.
    #[error("degeneracy: min c(u) = {min_c} at t = {t}")]
    Degeneracy { min_c: f64, t: f64 },

    /// Configuration failed validation.
    #[error("validation: {0}")]
    Validation(String),

    /// Malformed configuration document.
    #[error("config parse: {0}")]
    Parse(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
