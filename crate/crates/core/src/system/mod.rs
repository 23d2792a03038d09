//! Quantization conditions for the three momenta and the corrector that solves them.
//!
//! Two equivalent forms of the real-momentum conditions are kept. The phase-sum
//! form adds up scattering phases [`theta`] and is what the tracer iterates on.
//! The product form multiplies the scattering factors into one argument per
//! equation and takes a [`tracked_log`] of it, which records how often each
//! argument has wound around the origin since `c = 0`. Both must agree.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::QuantumLabel;
use crate::tolerance::IMAG_RESIDUAL_TOL;

pub mod complex;
pub mod newton;
pub mod winding;

pub use complex::{gamma_squared_from_alpha, phase_integer, residual_complex, Family};
pub use newton::{newton_solve, NewtonOptions, NewtonReport};
pub use winding::{tracked_log, LogKey, WindingState};

pub(crate) const TWO_PI: f64 = 2.0 * PI;

/// Two-body scattering phase for a momentum gap `dk`.
///
/// Continued analytically through `c = 0`: `0` as `c -> +inf`, `-pi` at `c = 0`
/// and `-2 pi` as `c -> -inf` for any fixed `dk > 0`.
pub fn theta(dk: f64, c: f64) -> f64 {
    if c > 0.0 {
        -2.0 * (dk / c).atan()
    } else if c < 0.0 {
        -2.0 * PI - 2.0 * (dk / c).atan()
    } else {
        -PI
    }
}

/// Unknowns and residual of one of the coupled systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualPoint {
    pub unknowns: [f64; 2],
    pub residual: [f64; 2],
    pub jacobian: Option<[[f64; 2]; 2]>,
}

impl ResidualPoint {
    pub fn norm(&self) -> f64 {
        self.residual[0].abs().max(self.residual[1].abs())
    }
}

/// Phase-sum form of the real-momentum conditions.
///
/// When `deflate` is set the first component is divided by `d1`, removing the
/// spurious root `d1 = 0` that the `n1 = 1` equations carry for `c < 0`.
pub fn real_phase_residual(d1: f64, d2: f64, c: f64, n1: i64, n2: i64, deflate: bool) -> [f64; 2] {
    let t1 = theta(d1, c);
    let t2 = theta(d2, c);
    let t12 = theta(d1 + d2, c);
    let mut f1 = d1 - TWO_PI * (n1 + 1) as f64 - 2.0 * t1 - t12 + t2;
    let f2 = d2 - TWO_PI * (n2 + 1) as f64 - 2.0 * t2 - t12 + t1;
    if deflate {
        f1 /= d1;
    }
    [f1, f2]
}

fn factor(c: f64, d: f64) -> Complex64 {
    // (c + i d) / (c - i d)
    Complex64::new(c, d) / Complex64::new(c, -d)
}

/// Product arguments of the two quantization equations.
pub fn quantization_arguments(d1: f64, d2: f64, c: f64) -> Result<[Complex64; 2]> {
    if c == 0.0 && (d1 == 0.0 || d2 == 0.0 || d1 + d2 == 0.0) {
        return Err(Error::SingularArgument { key: "coincident momenta at zero coupling" });
    }
    let (f1, f2, f12) = (factor(c, d1), factor(c, d2), factor(c, d1 + d2));
    Ok([f1 * f1 / f2 * f12, f2 * f2 / f1 * f12])
}

fn real_log_residual(
    d1: f64,
    d2: f64,
    c: f64,
    label: QuantumLabel,
    w: &mut WindingState,
    commit: bool,
) -> Result<(ResidualPoint, [i64; 2])> {
    let args = quantization_arguments(d1, d2, c)?;
    let d = [d1, d2];
    let n = [label.n1, label.n2];
    let mut res = [0.0; 2];
    let mut windings = [0; 2];
    for j in 0..2 {
        let log = if commit {
            tracked_log(args[j], w, j)?
        } else {
            w.peek(args[j], j)?.0
        };
        windings[j] = w.peek(args[j], j)?.1;
        let r = Complex64::new(d[j], 0.0) - Complex64::i() * log - TWO_PI * n[j] as f64;
        if r.im.abs() > IMAG_RESIDUAL_TOL {
            return Err(Error::ComplexResidual { imag: r.im });
        }
        res[j] = r.re;
    }
    Ok((ResidualPoint { unknowns: d, residual: res, jacobian: None }, windings))
}

/// Residual of the real-momentum conditions with branch-tracked logarithms.
///
/// The winding state is advanced to `(d1, d2, c)`; feed it points along a
/// continuous path starting from the free solution at `c = 0`.
pub fn residual_real(
    d1: f64,
    d2: f64,
    c: f64,
    label: QuantumLabel,
    w: &mut WindingState,
) -> Result<ResidualPoint> {
    real_log_residual(d1, d2, c, label, w, true).map(|r| r.0)
}

/// Same as [`residual_real`] without advancing the winding state. Also returns
/// the winding counts the point would produce.
pub fn residual_real_peek(
    d1: f64,
    d2: f64,
    c: f64,
    label: QuantumLabel,
    w: &WindingState,
) -> Result<(ResidualPoint, [i64; 2])> {
    let mut scratch = w.clone();
    real_log_residual(d1, d2, c, label, &mut scratch, false)
}

/// Local branch integers `n_j(c)` implied by the winding counts.
pub fn local_branch_integers(label: QuantumLabel, windings: [i64; 2]) -> [i64; 2] {
    [label.n1 - windings[0], label.n2 - windings[1]]
}

/// Residual of the common-gap equation for labels with `n1 = n2 = n0`.
pub fn residual_equal_delta(d: f64, c: f64, n0: i64) -> f64 {
    d - theta(d, c) - theta(2.0 * d, c) - TWO_PI * (n0 + 1) as f64
}

/// Implicit derivative of the common gap along the equal-label root curve.
pub fn ddelta_dc(delta: f64, c: f64) -> Result<f64> {
    let d2 = delta * delta;
    let c2 = c * c;
    let den = c2 * (c2 + 5.0 * d2) + 4.0 * d2 * d2 + 6.0 * c * (2.0 * d2 + c2);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Pole("fold of the equal-gap root curve"));
    }
    Ok(6.0 * delta * (c2 + 2.0 * d2) / den)
}
