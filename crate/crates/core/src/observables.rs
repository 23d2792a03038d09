//! Exact norm, potential-energy expectation and ternary density grids.
//!
//! Both integrals reduce to exponentials integrated over the ordered simplex
//! `0 <= x1 <= x2 <= x3 <= 1`. Writing the positions through the four gaps
//! `x1, x2 - x1, x3 - x2, 1 - x3` turns each term into the divided difference
//! of `exp` on the nodes `{0, 0, -i a1, i a3}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::StateSolution;
use crate::tolerance::EXPONENT_ZERO;
use crate::wavefunction::{Wavefunction, PERMUTATIONS};

/// Below this gap between the two nonzero nodes the divided difference is
/// evaluated at their midpoint.
const NEAR_DEGENERATE: f64 = 1e-4;
/// Node magnitude below which the power series is used.
const SERIES_RADIUS: f64 = 1.0;
const SERIES_TERMS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimplexCase {
    AllZero,
    /// One exponent vanishes, so the other two cancel.
    OnePairZero,
    AllNonzero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexIntegralKey {
    pub alphas: [Complex64; 3],
    pub case: SimplexCase,
}

impl SimplexIntegralKey {
    /// Builds a key from the first and last exponent; the middle one is fixed
    /// by the zero sum.
    pub fn new(a1: Complex64, a3: Complex64) -> Self {
        let alphas = [a1, -a1 - a3, a3];
        let zeros = alphas.iter().filter(|a| a.norm() < EXPONENT_ZERO).count();
        let case = match zeros {
            0 => SimplexCase::AllNonzero,
            1 => SimplexCase::OnePairZero,
            _ => SimplexCase::AllZero,
        };
        SimplexIntegralKey { alphas, case }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `phi_n(z) = sum_j z^j / (j + n)!`, so `phi_0 = exp` and
/// `phi_{n+1}(z) = (phi_n(z) - 1/n!) / z`.
pub fn phi(n: usize, z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        let mut term = Complex64::new(1.0 / factorial(n), 0.0);
        let mut sum = term;
        for j in 1..SERIES_TERMS {
            term *= z / (j + n) as f64;
            sum += term;
        }
        return sum;
    }
    let mut v = z.exp();
    for k in 0..n {
        v = (v - 1.0 / factorial(k)) / z;
    }
    v
}

/// Divided difference of `exp` on `{0, 0, a, b}`.
fn exp_divided_difference(a: Complex64, b: Complex64) -> Complex64 {
    if a.norm().max(b.norm()) < SERIES_RADIUS {
        // sum over n of h_n(a, b) / (n + 3)!, h_n the complete homogeneous polynomial
        let mut h = Complex64::new(1.0, 0.0);
        let mut a_pow = Complex64::new(1.0, 0.0);
        let mut sum = h / 6.0;
        let mut fact = 6.0;
        for n in 1..SERIES_TERMS {
            a_pow *= a;
            h = b * h + a_pow;
            fact *= (n + 3) as f64;
            sum += h / fact;
        }
        return sum;
    }
    let gap = b - a;
    if gap.norm() < NEAR_DEGENERATE {
        // midpoint derivative; the error is of order gap^2 / 24
        return phi2_derivative(0.5 * (a + b));
    }
    (phi(2, b) - phi(2, a)) / gap
}

/// `d/dz phi_2(z) = (phi_1(z) - 2 phi_2(z)) / z`, with `phi_3 + ...` near zero.
fn phi2_derivative(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        // sum_j (j + 1) z^j / (j + 3)!
        for j in 0..SERIES_TERMS {
            if j > 0 {
                term *= z;
            }
            sum += term * (j + 1) as f64 / factorial(j + 3);
        }
        return sum;
    }
    (phi(1, z) - 2.0 * phi(2, z)) / z
}

/// `∫ exp(i (a1 x1 + a2 x2 + a3 x3))` over the ordered simplex.
pub fn simplex_integral(key: &SimplexIntegralKey) -> Complex64 {
    let i = Complex64::i();
    let [a1, a2, a3] = key.alphas;
    match key.case {
        SimplexCase::AllZero => Complex64::new(1.0 / 6.0, 0.0),
        SimplexCase::OnePairZero => {
            if a3.norm() < EXPONENT_ZERO {
                phi(3, -i * a1)
            } else if a1.norm() < EXPONENT_ZERO {
                phi(3, i * a3)
            } else {
                debug_assert!(a2.norm() < EXPONENT_ZERO);
                phi2_derivative(i * a3)
            }
        }
        SimplexCase::AllNonzero => exp_divided_difference(-i * a1, i * a3),
    }
}

/// `∫∫ exp(i (b1 x1 + b3 x3))` over `0 <= x1 <= x3 <= 1` with `b1 + b3 = 0`.
pub fn coincidence_integral(b3: Complex64) -> Complex64 {
    phi(2, Complex64::i() * b3)
}

fn check_real(v: Complex64, what: &'static str) -> Result<f64> {
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Pole(what));
    }
    let rel = v.im.abs() / v.re.abs().max(f64::MIN_POSITIVE);
    if rel > 1e-9 {
        return Err(Error::ComplexResidual { imag: rel });
    }
    Ok(v.re)
}

/// `<psi|psi>` over the unit torus.
pub fn norm_squared(state: &StateSolution) -> Result<f64> {
    norm_squared_with(&Wavefunction::new(state)?)
}

pub fn norm_squared_with(w: &Wavefunction) -> Result<f64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (p, perm_p) in PERMUTATIONS.iter().enumerate() {
        for (q, perm_q) in PERMUTATIONS.iter().enumerate() {
            let ex = |s: usize| w.k[perm_p[s]] - w.k[perm_q[s]].conj();
            let key = SimplexIntegralKey::new(ex(0), ex(2));
            total += w.amps.a[p] * w.amps.a[q].conj() * simplex_integral(&key);
        }
    }
    let n = check_real(6.0 * total, "norm")?;
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidArgument(format!("norm is not positive: {n}")));
    }
    Ok(n)
}

/// Weighted integral of `|psi|^2` over the plane where the first two
/// particles meet, restricted to `x1 <= x3`.
pub fn coincidence_weight(w: &Wavefunction) -> Result<f64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (p, perm_p) in PERMUTATIONS.iter().enumerate() {
        for (q, perm_q) in PERMUTATIONS.iter().enumerate() {
            let b3 = w.k[perm_p[2]] - w.k[perm_q[2]].conj();
            total += w.amps.a[p] * w.amps.a[q].conj() * coincidence_integral(b3);
        }
    }
    check_real(total, "coincidence integral")
}

/// Expectation of the interaction energy, `c dE/dc`.
///
/// The coincidence integral covers half of one pair plane; three pairs and
/// the factor 2 of the coupling in the Hamiltonian give `12 c / <psi|psi>`.
pub fn potential_expectation(state: &StateSolution) -> Result<f64> {
    if state.c == 0.0 {
        return Ok(0.0);
    }
    let w = Wavefunction::new(state)?;
    let n = norm_squared_with(&w)?;
    Ok(12.0 * state.c * coincidence_weight(&w)? / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellKind {
    /// Touches a corner of the triangle: all three particles together.
    Vertex,
    /// Touches a side: one pair together.
    Edge,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TernaryCell {
    pub r12: f64,
    pub r23: f64,
    pub r31: f64,
    pub density: f64,
    pub kind: CellKind,
}

/// Density on the `resolution^2` triangular cells of the unit simplex
/// `r12 + r23 + r31 = 1`, sampled at cell centroids, rows of constant `r12`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TernaryGrid {
    pub resolution: usize,
    pub cells: Vec<TernaryCell>,
}

impl TernaryGrid {
    pub fn max_cell(&self) -> &TernaryCell {
        self.cells.iter().max_by(|a, b| a.density.total_cmp(&b.density)).expect("grid is nonempty")
    }

    pub fn mean_density(&self, kind: CellKind) -> f64 {
        let (s, n) = self
            .cells
            .iter()
            .filter(|c| c.kind == kind)
            .fold((0.0, 0usize), |(s, n), c| (s + c.density, n + 1));
        s / n as f64
    }

    /// Density at the cell whose `(r12, r23)` centroid is closest.
    pub fn nearest(&self, r12: f64, r23: f64) -> &TernaryCell {
        let d = |c: &TernaryCell| (c.r12 - r12).powi(2) + (c.r23 - r23).powi(2);
        self.cells.iter().min_by(|a, b| d(a).total_cmp(&d(b))).expect("grid is nonempty")
    }
}

fn lattice(n: usize) -> Vec<(f64, f64, CellKind)> {
    let nf = n as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n - i {
            let corner = (i == 0 && j == 0) || (i == n - 1 && j == 0) || (i == 0 && j == n - 1);
            let kind = if corner {
                CellKind::Vertex
            } else if i == 0 || j == 0 || i + j == n - 1 {
                CellKind::Edge
            } else {
                CellKind::Interior
            };
            out.push(((i as f64 + 1.0 / 3.0) / nf, (j as f64 + 1.0 / 3.0) / nf, kind));
            if i + j + 2 <= n {
                out.push(((i as f64 + 2.0 / 3.0) / nf, (j as f64 + 2.0 / 3.0) / nf, CellKind::Interior));
            }
        }
    }
    out
}

/// Normalized probability density on a ternary grid.
///
/// The density depends only on the gaps, so the configuration
/// `(0, r12, r12 + r23)` represents each cell.
pub fn density_grid(state: &StateSolution, resolution: usize) -> Result<TernaryGrid> {
    if resolution < 8 {
        return Err(Error::InvalidArgument(format!("grid resolution {resolution} is below 8")));
    }
    let w = Wavefunction::new(state)?;
    let norm = norm_squared_with(&w)?;
    let cells = lattice(resolution)
        .into_par_iter()
        .map(|(r12, r23, kind)| {
            let v = w.ordered([0.0, r12, r12 + r23]);
            TernaryCell { r12, r23, r31: 1.0 - r12 - r23, density: v.norm_sqr() / norm, kind }
        })
        .collect();
    Ok(TernaryGrid { resolution, cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simplex_cases_agree_with_their_neighbours() {
        assert_eq!(simplex_integral(&SimplexIntegralKey::new(c(0.0, 0.0), c(0.0, 0.0))), c(1.0 / 6.0, 0.0));
        // each exact case against the generic formula just off the degenerate set
        for (a1, a3) in [(c(3.0, 0.5), c(0.0, 0.0)), (c(0.0, 0.0), c(-2.0, 1.0)), (c(2.5, 0.2), c(-2.5, -0.2))] {
            let exact = simplex_integral(&SimplexIntegralKey::new(a1, a3));
            let nudged = SimplexIntegralKey::new(a1 + c(1e-7, 0.0), a3 - c(3e-7, 0.0));
            assert_eq!(nudged.case, SimplexCase::AllNonzero);
            assert!((simplex_integral(&nudged) - exact).norm() < 1e-6 * exact.norm());
        }
    }

    #[test]
    fn series_and_closed_form_match_at_the_switch() {
        let (a, b) = (c(0.6, 0.79), c(-0.2, 0.97));
        let inside = exp_divided_difference(a, b);
        let outside = (phi(2, b) - phi(2, a)) / (b - a);
        assert!((inside - outside).norm() < 1e-13);
        for z in [c(0.999, 0.0), c(0.0, -0.99)] {
            let s = phi(3, z);
            let direct = (z.exp() - 1.0 - z - 0.5 * z * z) / (z * z * z);
            assert!((s - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn midpoint_branch_is_continuous() {
        let a = c(0.3, 5.0);
        let b = a + c(0.0, 0.99 * NEAR_DEGENERATE);
        let direct = (phi(2, b) - phi(2, a)) / (b - a);
        let near = exp_divided_difference(a, b);
        assert!((near - direct).norm() < 1e-9 * near.norm());
    }

    #[test]
    fn lattice_counts() {
        let l = lattice(8);
        assert_eq!(l.len(), 64);
        assert_eq!(l.iter().filter(|c| c.2 == CellKind::Vertex).count(), 3);
        assert_eq!(l.iter().filter(|c| c.2 == CellKind::Edge).count(), 3 * 6);
        assert!(l.iter().all(|&(a, b, _)| a > 0.0 && b > 0.0 && a + b < 1.0));
    }
}
