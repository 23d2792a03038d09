use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid quantum label ({n1}, {n2}): {reason}")]
    InvalidLabel { n1: i64, n2: i64, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("momenta are not ordered: {0}")]
    Unordered(String),

    #[error("energy formulas disagree: sum of squares {sum_sq}, chart formula {chart} (relative gap {gap:e})")]
    EnergyMismatch { sum_sq: f64, chart: f64, gap: f64 },

    #[error("logarithm argument vanished for key {key:?} (root collision or invalid region)")]
    SingularArgument { key: &'static str },

    #[error("left the valid sheet: {0}")]
    ConstraintViolation(String),

    #[error("residual has an imaginary part {imag:e} above tolerance")]
    ComplexResidual { imag: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("continuation stalled at c = {last_good_c} while heading to {target_c}: {reason}")]
    TraceFailed { last_good_c: f64, target_c: f64, reason: String },

    #[error("trajectory bound violated at c = {c}: {detail}")]
    BoundsViolation { c: f64, detail: String },

    #[error("seed for the complex branch failed at c = {c}: {reason}")]
    SeedFailure { c: f64, reason: String },

    #[error("two momenta coincide (|k_j - k_l| = {gap:e}); the plane-wave form is degenerate here")]
    DegenerateMomenta { gap: f64 },

    #[error("operation only applies to complex-branch states")]
    ClassificationInapplicable,

    #[error("pole: {0}")]
    Pole(&'static str),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
