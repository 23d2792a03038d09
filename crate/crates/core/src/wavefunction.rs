//! The eigenfunction as a six-term plane-wave sum on the ordered region
//! `0 <= x1 <= x2 <= x3 <= 1`, extended to the whole torus by symmetry.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BranchCoords, Momenta, StateSolution};
use crate::tolerance::DEGENERATE_GAP;

/// Permutations in the order `123, 213, 132, 321, 312, 231`, zero-based.
pub const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [2, 0, 1], [1, 2, 0]];

/// Indices into [`PERMUTATIONS`] of the cyclic terms (`123`, `231`, `312`),
/// which carry trimer configurations on the complex branch.
pub const CYCLIC_TERMS: [usize; 3] = [0, 5, 4];
/// Indices of the transposition terms (`213`, `132`, `321`), which carry dimers.
pub const TRANSPOSITION_TERMS: [usize; 3] = [1, 2, 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetheAmplitudes {
    pub a: [Complex64; 6],
}

/// `(c - i (kj - kl)) / (c + i (kj - kl))`
fn scattering_factor(kj: Complex64, kl: Complex64, c: f64) -> Result<Complex64> {
    let d = kj - kl;
    if d.norm() < DEGENERATE_GAP {
        return Err(Error::DegenerateMomenta { gap: d.norm() });
    }
    let i = Complex64::i();
    let den = c + i * d;
    if den.norm() == 0.0 {
        return Err(Error::Pole("scattering factor"));
    }
    Ok((c - i * d) / den)
}

/// Amplitudes of the six plane waves, normalized to `a(123) = 1`.
pub fn amplitudes(m: &Momenta, c: f64) -> Result<BetheAmplitudes> {
    if c == 0.0 {
        // every scattering factor is -1 for distinct momenta; keep that value
        // when free momenta coincide, where the wavefunction is a constant
        return Ok(BetheAmplitudes { a: [Complex64::new(1.0, 0.0); 6] });
    }
    let [k1, k2, k3] = m.k;
    let e21 = scattering_factor(k2, k1, c)?;
    let e32 = scattering_factor(k3, k2, c)?;
    let e31 = scattering_factor(k3, k1, c)?;
    let one = Complex64::new(1.0, 0.0);
    Ok(BetheAmplitudes { a: [one, -e21, -e32, -e21 * e31 * e32, e31 * e32, e21 * e31] })
}

/// Positions reduced into `[0, 1)` and sorted into the ordered region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationPoint {
    pub x: [f64; 3],
}

impl ConfigurationPoint {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        let mut x = [x1.rem_euclid(1.0), x2.rem_euclid(1.0), x3.rem_euclid(1.0)];
        x.sort_by(f64::total_cmp);
        ConfigurationPoint { x }
    }
}

/// Eigenfunction of one solved state, with amplitudes precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavefunction {
    pub k: [Complex64; 3],
    pub amps: BetheAmplitudes,
    pub c: f64,
}

impl Wavefunction {
    pub fn new(state: &StateSolution) -> Result<Self> {
        Ok(Wavefunction { k: state.momenta.k, amps: amplitudes(&state.momenta, state.c)?, c: state.c })
    }

    fn terms(&self, x: [f64; 3]) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        PERMUTATIONS.iter().enumerate().map(move |(j, p)| {
            let phase: Complex64 = (0..3).map(|s| self.k[p[s]] * x[s]).sum();
            (j, self.amps.a[j] * (Complex64::i() * phase).exp())
        })
    }

    /// Six-term sum at an ordered point, without wrapping or sorting
    /// (so `x3 = 1` is allowed).
    pub fn ordered(&self, x: [f64; 3]) -> Complex64 {
        self.terms(x).map(|(_, t)| t).sum()
    }

    /// Partial derivative in slot `s` of the ordered sum.
    pub fn ordered_derivative(&self, x: [f64; 3], s: usize) -> Complex64 {
        self.terms(x).map(|(j, t)| t * Complex64::i() * self.k[PERMUTATIONS[j][s]]).sum()
    }

    /// Sum of term magnitudes, the natural scale of round-off in [`Self::ordered`].
    pub fn ordered_scale(&self, x: [f64; 3]) -> f64 {
        self.terms(x).map(|(_, t)| t.norm()).sum()
    }

    pub fn eval(&self, p: ConfigurationPoint) -> Complex64 {
        self.ordered(p.x)
    }
}

/// Unnormalized eigenfunction at an arbitrary point of the torus.
pub fn psi(point: ConfigurationPoint, state: &StateSolution) -> Result<Complex64> {
    Ok(Wavefunction::new(state)?.eval(point))
}

/// Derivative jump at a coincidence point, relative to `max(1, |c psi|)`.
///
/// With `x_pair <= x_third` the first two particles meet at `x_pair`;
/// otherwise the last two meet at `x_pair` with the first at `x_third`.
pub fn jump_residual(state: &StateSolution, x_pair: f64, x_third: f64) -> Result<f64> {
    let w = Wavefunction::new(state)?;
    Ok(jump_residual_with(&w, x_pair, x_third))
}

pub fn jump_residual_with(w: &Wavefunction, x_pair: f64, x_third: f64) -> f64 {
    let (x, lo, hi) = if x_pair <= x_third {
        ([x_pair, x_pair, x_third], 0, 1)
    } else {
        ([x_third, x_pair, x_pair], 1, 2)
    };
    let value = w.ordered(x);
    let lhs = w.ordered_derivative(x, hi) - w.ordered_derivative(x, lo);
    let rhs = w.c * value;
    (lhs - rhs).norm() / rhs.norm().max(1.0)
}

/// Mismatch of the periodic boundary conditions for the value and the derivative.
pub fn periodicity_residual(state: &StateSolution, x2: f64, x3: f64) -> Result<f64> {
    let w = Wavefunction::new(state)?;
    Ok(periodicity_residual_with(&w, x2, x3))
}

pub fn periodicity_residual_with(w: &Wavefunction, x2: f64, x3: f64) -> f64 {
    let left = [0.0, x2, x3];
    let right = [x2, x3, 1.0];
    let (a, b) = (w.ordered(left), w.ordered(right));
    let (da, db) = (w.ordered_derivative(left, 0), w.ordered_derivative(right, 2));
    let value = (a - b).norm() / a.norm().max(1.0);
    let slope = (da - db).norm() / da.norm().max(1.0);
    value.max(slope)
}

/// Relative weight of the cyclic (trimer) and transposition (dimer) terms,
/// measured by the summed amplitude magnitudes of each group.
pub fn dimer_trimer_weights(state: &StateSolution) -> Result<(f64, f64)> {
    if state.coords.is_real() {
        return Err(Error::ClassificationInapplicable);
    }
    let amps = amplitudes(&state.momenta, state.c)?;
    let trimer: f64 = CYCLIC_TERMS.iter().map(|&j| amps.a[j].norm()).sum();
    let dimer: f64 = TRANSPOSITION_TERMS.iter().map(|&j| amps.a[j].norm()).sum();
    let total = trimer + dimer;
    Ok((trimer / total, dimer / total))
}

/// `(2 alpha - c) / (2 alpha + c)`, the relative weight of the decaying
/// exponentials in the closed form of the `(0,0)` and `(1,1)` states.
pub fn dimer_prefactor(state: &StateSolution) -> Result<f64> {
    match state.coords {
        BranchCoords::ComplexK { alpha, .. } => {
            let c = state.c;
            Ok((2.0 * alpha - c) / (2.0 * alpha + c))
        }
        BranchCoords::RealK { .. } => Err(Error::ClassificationInapplicable),
    }
}
