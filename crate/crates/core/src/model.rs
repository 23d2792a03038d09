//! State labels, momenta and the two coordinate charts.
//!
//! On the real branch a state is described by the relative momenta
//! `delta1 = k2 - k1`, `delta2 = k3 - k2` and the total momentum `p`. Once two
//! momenta have collided and turned into a complex-conjugate pair, the chart
//! `(alpha, gamma, p)` with `k1,2 = ±i alpha + gamma + p/3`, `k3 = -2 gamma + p/3`
//! is used instead.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::{ENERGY_REL_TOL, IDENTITY_TOL};

const TWO_PI: f64 = 2.0 * PI;

/// Dimensionless coupling. Negative values are attractive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Coupling(f64);

impl Coupling {
    pub fn new(c: f64) -> Result<Self> {
        if c.is_finite() {
            Ok(Coupling(c))
        } else {
            Err(Error::InvalidArgument(format!("coupling must be finite, got {c}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_attractive(self) -> bool {
        self.0 < 0.0
    }
}

/// Total-momentum index in the central strip, from the free quantum numbers.
///
/// Returns 0, -1 or +1 as `n1 - n2` is congruent to 0, 1 or 2 modulo 3.
pub fn np_from_label(n1: i64, n2: i64) -> i64 {
    match (n1 - n2).rem_euclid(3) {
        0 => 0,
        1 => -1,
        _ => 1,
    }
}

/// How a label relates to its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelRelation {
    /// Same state, possibly written with the reversed-sign labelling.
    Same,
    /// The complex-conjugate, degenerate partner of the canonical state.
    Partner,
}

/// Free-particle quantum numbers `(n1, n2)` that identify a root at every `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumLabel {
    pub n1: i64,
    pub n2: i64,
    pub np: i64,
}

impl QuantumLabel {
    /// Both quantum numbers must share a sign; `(-n2, -n1)` relabels `(n1, n2)`.
    pub fn new(n1: i64, n2: i64) -> Result<Self> {
        if (n1 < 0 && n2 > 0) || (n1 > 0 && n2 < 0) {
            return Err(Error::InvalidLabel {
                n1,
                n2,
                reason: "quantum numbers of mixed sign do not order the momenta",
            });
        }
        Ok(QuantumLabel { n1, n2, np: np_from_label(n1, n2) })
    }

    /// Canonical representative with `n2 >= n1 >= 0`, and how `self` relates to it.
    pub fn canonical(self) -> (QuantumLabel, LabelRelation) {
        let (a, b) = if self.n1 <= 0 && self.n2 <= 0 {
            (-self.n2, -self.n1)
        } else {
            (self.n1, self.n2)
        };
        if a <= b {
            (QuantumLabel { n1: a, n2: b, np: np_from_label(a, b) }, LabelRelation::Same)
        } else {
            (QuantumLabel { n1: b, n2: a, np: np_from_label(b, a) }, LabelRelation::Partner)
        }
    }

    pub fn is_canonical(self) -> bool {
        self.n1 >= 0 && self.n2 >= self.n1
    }

    /// Label of the degenerate partner (itself when `n1 == n2`).
    pub fn partner(self) -> QuantumLabel {
        QuantumLabel { n1: self.n2, n2: self.n1, np: -self.np }
    }

    /// Total momentum `p = 2 pi np`.
    pub fn total_momentum(self) -> f64 {
        TWO_PI * self.np as f64
    }
}

impl std::fmt::Display for QuantumLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.n1, self.n2)
    }
}

impl std::str::FromStr for QuantumLabel {
    type Err = Error;

    /// Parses `"n1,n2"`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = t.split(',');
        let parse = |x: Option<&str>| -> Result<i64> {
            x.map(str::trim)
                .and_then(|v| v.parse::<i64>().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("label must look like n1,n2: {s:?}")))
        };
        let n1 = parse(parts.next())?;
        let n2 = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::InvalidArgument(format!("label must look like n1,n2: {s:?}")));
        }
        QuantumLabel::new(n1, n2)
    }
}

/// Three (possibly complex) wavenumbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Momenta {
    pub k: [Complex64; 3],
}

impl Momenta {
    pub fn new(k1: Complex64, k2: Complex64, k3: Complex64) -> Self {
        Momenta { k: [k1, k2, k3] }
    }

    pub fn real(k1: f64, k2: f64, k3: f64) -> Self {
        Momenta::new(k1.into(), k2.into(), k3.into())
    }

    pub fn sum(&self) -> Complex64 {
        self.k.iter().sum()
    }

    pub fn sum_of_squares(&self) -> Complex64 {
        self.k.iter().map(|k| k * k).sum()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.k.iter().all(|k| k.im.abs() <= tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.k.iter().map(|k| k.norm()).fold(0.0, f64::max)
    }

    /// Deterministic ordering: real sets ascend; a complex set stores the
    /// pair with positive imaginary part first and the real momentum last.
    pub fn canonicalized(&self) -> Momenta {
        let scale = self.max_abs().max(1.0);
        if self.is_real(IDENTITY_TOL * scale) {
            let mut re = [self.k[0].re, self.k[1].re, self.k[2].re];
            re.sort_by(f64::total_cmp);
            return Momenta::real(re[0], re[1], re[2]);
        }
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| self.k[b].im.total_cmp(&self.k[a].im));
        let (top, mid, bottom) = (self.k[idx[0]], self.k[idx[1]], self.k[idx[2]]);
        // the real member is the one with the smallest |Im|
        if mid.im.abs() <= top.im.abs().min(bottom.im.abs()) {
            Momenta::new(top, bottom, mid)
        } else if top.im.abs() < bottom.im.abs() {
            Momenta::new(mid, bottom, top)
        } else {
            Momenta::new(top, mid, bottom)
        }
    }
}

/// Coordinates on one of the two charts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch")]
pub enum BranchCoords {
    RealK { delta1: f64, delta2: f64, p: f64 },
    ComplexK { alpha: f64, gamma: f64, p: f64 },
}

impl BranchCoords {
    pub fn p(&self) -> f64 {
        match *self {
            BranchCoords::RealK { p, .. } | BranchCoords::ComplexK { p, .. } => p,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, BranchCoords::RealK { .. })
    }

    pub fn branch_name(&self) -> &'static str {
        match self {
            BranchCoords::RealK { .. } => "RealK",
            BranchCoords::ComplexK { .. } => "ComplexK",
        }
    }

    /// Relative momenta `(delta1, delta2)`, complex on the complex chart.
    pub fn deltas(&self) -> (Complex64, Complex64) {
        match *self {
            BranchCoords::RealK { delta1, delta2, .. } => (delta1.into(), delta2.into()),
            BranchCoords::ComplexK { alpha, gamma, .. } => (
                Complex64::new(0.0, -2.0 * alpha),
                Complex64::new(-3.0 * gamma, alpha),
            ),
        }
    }

    pub fn momenta(&self) -> Momenta {
        match *self {
            BranchCoords::RealK { delta1, delta2, p } => k_from_deltas(p, delta1, delta2),
            BranchCoords::ComplexK { alpha, gamma, p } => k_from_alpha_gamma(p, alpha, gamma),
        }
    }

    /// Energy from the chart's own quadratic form.
    pub fn chart_energy(&self) -> f64 {
        match *self {
            BranchCoords::RealK { delta1, delta2, p } => {
                (p * p + 2.0 * (delta1 * delta1 + delta2 * delta2 + delta1 * delta2)) / 3.0
            }
            BranchCoords::ComplexK { alpha, gamma, p } => {
                -2.0 * alpha * alpha + 6.0 * gamma * gamma + p * p / 3.0
            }
        }
    }
}

/// `k1 = (p - 2 d1 - d2)/3`, `k2 = (p + d1 - d2)/3`, `k3 = (p + d1 + 2 d2)/3`.
pub fn k_from_deltas(p: f64, d1: f64, d2: f64) -> Momenta {
    Momenta::real(
        (p - 2.0 * d1 - d2) / 3.0,
        (p + d1 - d2) / 3.0,
        (p + d1 + 2.0 * d2) / 3.0,
    )
}

/// Inverse of [`k_from_deltas`] for real, ascending momenta.
pub fn deltas_from_k(m: &Momenta) -> Result<(f64, f64, f64)> {
    let scale = m.max_abs().max(1.0);
    if !m.is_real(IDENTITY_TOL * scale) {
        return Err(Error::Unordered("momenta are complex".into()));
    }
    let [k1, k2, k3] = [m.k[0].re, m.k[1].re, m.k[2].re];
    if k1 > k2 || k2 > k3 {
        return Err(Error::Unordered(format!("({k1}, {k2}, {k3})")));
    }
    Ok((k1 + k2 + k3, k2 - k1, k3 - k2))
}

/// `k1 = i alpha + gamma + p/3`, `k2 = -i alpha + gamma + p/3`, `k3 = -2 gamma + p/3`.
pub fn k_from_alpha_gamma(p: f64, alpha: f64, gamma: f64) -> Momenta {
    let base = p / 3.0;
    Momenta::new(
        Complex64::new(gamma + base, alpha),
        Complex64::new(gamma + base, -alpha),
        Complex64::new(-2.0 * gamma + base, 0.0),
    )
}

/// Shifts every momentum by `2 pi n0`, moving the state `3 n0` strips over.
pub fn strip_shift(m: &Momenta, n0: i64) -> Momenta {
    let s = Complex64::new(TWO_PI * n0 as f64, 0.0);
    Momenta::new(m.k[0] + s, m.k[1] + s, m.k[2] + s)
}

/// A solved eigenstate at one coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSolution {
    pub label: QuantumLabel,
    pub c: f64,
    pub coords: BranchCoords,
    pub momenta: Momenta,
    pub energy: f64,
}

impl StateSolution {
    /// Builds the state from chart coordinates; momenta and energy follow.
    pub fn from_coords(label: QuantumLabel, c: f64, coords: BranchCoords) -> Self {
        let momenta = coords.momenta();
        StateSolution { label, c, coords, momenta, energy: coords.chart_energy() }
    }
}

/// Energy of a state, cross-checking `sum k^2` against the chart formula.
pub fn energy(s: &StateSolution) -> Result<f64> {
    let sum_sq = s.momenta.sum_of_squares();
    let chart = s.coords.chart_energy();
    let scale = s
        .momenta
        .k
        .iter()
        .map(|k| k.norm_sqr())
        .sum::<f64>()
        .max(chart.abs())
        .max(1.0);
    let gap = ((sum_sq.re - chart).abs()).max(sum_sq.im.abs()) / scale;
    if gap > ENERGY_REL_TOL {
        return Err(Error::EnergyMismatch { sum_sq: sum_sq.re, chart, gap });
    }
    Ok(sum_sq.re)
}

/// The degenerate partner obtained by complex conjugation of the eigenfunction.
///
/// Momenta are negated and re-canonicalized, `p` flips sign and on the real
/// chart `delta1` and `delta2` swap; on the complex chart `gamma` flips sign.
/// Diagonal labels map onto themselves.
pub fn partner_state(s: &StateSolution) -> StateSolution {
    if s.label.n1 == s.label.n2 {
        return *s;
    }
    let coords = match s.coords {
        BranchCoords::RealK { delta1, delta2, p } => BranchCoords::RealK {
            delta1: delta2,
            delta2: delta1,
            p: -p,
        },
        BranchCoords::ComplexK { alpha, gamma, p } => BranchCoords::ComplexK {
            alpha,
            gamma: -gamma,
            p: -p,
        },
    };
    let negated = Momenta::new(-s.momenta.k[0], -s.momenta.k[1], -s.momenta.k[2]);
    let momenta = match coords {
        BranchCoords::RealK { .. } => negated.canonicalized(),
        BranchCoords::ComplexK { .. } => coords.momenta(),
    };
    StateSolution {
        label: s.label.partner(),
        c: s.c,
        coords,
        momenta,
        energy: s.energy,
    }
}
