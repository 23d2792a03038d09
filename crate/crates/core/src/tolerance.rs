//! Numerical tolerances shared by the solvers and the verification suites.

/// Default Newton stopping tolerance on the infinity norm of a residual.
pub const RESIDUAL_TOL: f64 = 1e-12;

/// Tolerance for identities that hold exactly in exact arithmetic
/// (momentum sums, round trips of the chart conversions).
pub const IDENTITY_TOL: f64 = 1e-10;

/// Relative agreement required between the three energy formulas.
pub const ENERGY_REL_TOL: f64 = 1e-12;

/// Largest imaginary part tolerated in a residual that must be real.
pub const IMAG_RESIDUAL_TOL: f64 = 1e-10;

/// Central finite-difference step, scaled by `max(1, |x|)`.
pub const FD_STEP: f64 = 1e-7;

/// Default iteration cap of the Newton corrector.
pub const NEWTON_MAX_ITER: usize = 100;

/// Maximum number of step halvings in one damped Newton update.
pub const NEWTON_MAX_HALVINGS: usize = 40;

/// Momentum gaps below this are treated as coincident.
pub const DEGENERATE_GAP: f64 = 1e-12;

/// Simplex exponents below this magnitude classify as zero.
pub const EXPONENT_ZERO: f64 = 1e-10;

/// Base continuation step in `c`.
pub const BASE_STEP: f64 = 0.05;

/// Smallest continuation step before the tracer gives up.
pub const MIN_STEP: f64 = 1e-11;

/// Half-width of the window around a critical coupling inside which points
/// are seeded from the square-root local model instead of the secant predictor.
pub const CRITICAL_WINDOW: f64 = 0.02;

/// Half-width of the window around `c = 0` in which labels with a vanishing
/// quantum number are seeded from their small-coupling series.
pub const ORIGIN_WINDOW: f64 = 1e-3;

/// Environment variable overriding [`RESIDUAL_TOL`] in the command-line tool.
pub const TOL_ENV_VAR: &str = "BETHE3_TOL";

/// Reads the residual tolerance, honouring the environment override.
pub fn residual_tol_from_env() -> f64 {
    std::env::var(TOL_ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(RESIDUAL_TOL)
}
