//! Conditions on the complex branch, where `k1` and `k2` form the conjugate
//! pair `gamma + p/3 ± i alpha` and `k3 = p/3 - 2 gamma` stays real.
//!
//! The modulus condition of the `k1` equation reads
//! `alpha = ln(2a - c) - ln|c + 2a| + ln h(c - a) - ln h(c + a)` with
//! `h(x) = sqrt(x^2 + 9 gamma^2)`; the phase condition fixes `gamma`.
//! Bound pairs and trimers approach `|c + 2 alpha| -> 0` or `c + alpha -> 0`
//! exponentially fast, so each family iterates on variables in which that gap
//! is an explicit exponential and never has to be formed by subtraction.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{ResidualPoint, TWO_PI};
use crate::error::{Error, Result};
use crate::model::QuantumLabel;

fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Integer offset of the phase condition for a canonical label.
pub fn phase_integer(label: QuantumLabel) -> Result<i64> {
    let (l, _) = label.canonical();
    let num = match l.n1 {
        1 => l.np - l.n2 - 2,
        0 => l.np - l.n2,
        _ => {
            return Err(Error::InvalidLabel {
                n1: label.n1,
                n2: label.n2,
                reason: "only labels with a zero or unit quantum number reach complex momenta",
            })
        }
    };
    debug_assert_eq!(num.rem_euclid(3), 0);
    Ok(num.div_euclid(3))
}

/// Solved quantities shared by the modulus and phase conditions.
#[derive(Debug, Clone, Copy)]
struct Pieces {
    alpha: f64,
    gamma: f64,
    /// `c - alpha` and `c + alpha`
    minus: f64,
    plus: f64,
    /// `ln(2 alpha - c)`, `ln|c + 2 alpha|`, `ln h(c - alpha)`, `ln h(c + alpha)`
    la: f64,
    lb: f64,
    lc: f64,
    ld: f64,
}

impl Pieces {
    fn modulus(&self) -> f64 {
        self.alpha - self.la + self.lb - self.lc + self.ld
    }

    fn phase(&self, p: f64, shift: f64, m: i64) -> f64 {
        // gamma = 0 is reached from below on the diagonal labels
        let g3 = if self.gamma == 0.0 { -0.0 } else { 3.0 * self.gamma };
        self.gamma + p / 3.0 + shift + g3.atan2(self.minus) - (-g3).atan2(self.plus)
            - TWO_PI * m as f64
    }
}

fn half_log_hyp(x: f64, g3: f64) -> f64 {
    x.hypot(g3).ln()
}

/// Parameterization of the complex branch used by a label family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `(1, n2)`, `n2 >= 2`: `alpha = (-c/2) s(t)` with the logistic `s`, unknowns `(t, gamma)`.
    DimerBelow,
    /// `(0, n2)`, `n2 >= 2`: `alpha = -c/2 + e^t`, unknowns `(t, gamma)`.
    DimerAbove,
    /// `(1, 1)`: `gamma = 0`, `alpha = (-c/2) s(t)`, unknown `t`.
    Pair,
    /// `(0, 0)`: `gamma = 0`, `alpha = -c + e^t`, unknown `t`.
    Ground,
    /// `(0, 1)`: `alpha = -c + r cos(phi)`, `3 gamma = -r sin(phi)`, unknowns `(ln r, phi)`.
    Trimer,
}

impl Family {
    pub fn for_label(label: QuantumLabel) -> Result<Family> {
        let (l, _) = label.canonical();
        match (l.n1, l.n2) {
            (1, 1) => Ok(Family::Pair),
            (1, _) => Ok(Family::DimerBelow),
            (0, 0) => Ok(Family::Ground),
            (0, 1) => Ok(Family::Trimer),
            (0, _) => Ok(Family::DimerAbove),
            _ => Err(Error::InvalidLabel {
                n1: label.n1,
                n2: label.n2,
                reason: "the momenta of this label stay real for every coupling",
            }),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Family::Pair | Family::Ground => 1,
            _ => 2,
        }
    }

    /// Whether `c + 2 alpha` is negative on this branch.
    pub fn pair_below(self) -> bool {
        matches!(self, Family::DimerBelow | Family::Pair)
    }

    fn pieces(self, x: &[f64], c: f64) -> Result<Pieces> {
        if c >= 0.0 {
            return Err(Error::ConstraintViolation(format!("complex branch needs c < 0, got {c}")));
        }
        let mc = -c;
        let p = match self {
            Family::DimerBelow | Family::Pair => {
                let t = x[0];
                let gamma = if self == Family::Pair { 0.0 } else { x[1] };
                let s = logistic(t);
                let alpha = 0.5 * mc * s;
                let g3 = 3.0 * gamma;
                Pieces {
                    alpha,
                    gamma,
                    minus: c - alpha,
                    plus: c + alpha,
                    la: mc.ln() + s.ln_1p(),
                    lb: mc.ln() - softplus(t),
                    lc: half_log_hyp(c - alpha, g3),
                    ld: half_log_hyp(c + alpha, g3),
                }
            }
            Family::DimerAbove => {
                let (t, gamma) = (x[0], x[1]);
                let e = t.exp();
                let alpha = 0.5 * mc + e;
                let g3 = 3.0 * gamma;
                Pieces {
                    alpha,
                    gamma,
                    minus: c - alpha,
                    plus: 0.5 * c + e,
                    la: (2.0 * mc + 2.0 * e).ln(),
                    lb: std::f64::consts::LN_2 + t,
                    lc: half_log_hyp(c - alpha, g3),
                    ld: half_log_hyp(0.5 * c + e, g3),
                }
            }
            Family::Ground => {
                let t = x[0];
                let e = t.exp();
                let alpha = mc + e;
                Pieces {
                    alpha,
                    gamma: 0.0,
                    minus: c - alpha,
                    plus: e,
                    la: (3.0 * mc + 2.0 * e).ln(),
                    lb: (mc + 2.0 * e).ln(),
                    lc: (2.0 * mc + e).ln(),
                    ld: t,
                }
            }
            Family::Trimer => {
                let (lr, phi) = (x[0], x[1]);
                if !(phi > 0.0 && phi < PI) {
                    return Err(Error::ConstraintViolation(format!("trimer angle {phi} outside (0, pi)")));
                }
                let r = lr.exp();
                let (sin, cos) = phi.sin_cos();
                let plus = r * cos;
                let alpha = mc + plus;
                let b = mc + 2.0 * plus;
                if alpha <= 0.0 || b <= 0.0 {
                    return Err(Error::ConstraintViolation("trimer left the bound region".into()));
                }
                let g3 = -r * sin;
                Pieces {
                    alpha,
                    gamma: g3 / 3.0,
                    minus: 2.0 * c - plus,
                    plus,
                    la: (3.0 * mc + 2.0 * plus).ln(),
                    lb: b.ln(),
                    lc: half_log_hyp(2.0 * c - plus, g3),
                    ld: lr,
                }
            }
        };
        if !(p.alpha > 0.0) || !p.la.is_finite() || !p.lb.is_finite() || !p.lc.is_finite() || !p.ld.is_finite() {
            return Err(Error::ConstraintViolation(format!("invalid complex-branch point {x:?} at c = {c}")));
        }
        Ok(p)
    }

    /// `(alpha, gamma)` from the family's unknowns.
    pub fn alpha_gamma(self, x: &[f64], c: f64) -> Result<(f64, f64)> {
        self.pieces(x, c).map(|p| (p.alpha, p.gamma))
    }

    /// The exponentially small gap that defines the family: `|c + 2 alpha|`
    /// for dimers, `c + alpha` for the trimers, with full relative accuracy.
    pub fn bound_gap(self, x: &[f64], c: f64) -> Result<f64> {
        let p = self.pieces(x, c)?;
        Ok(match self {
            Family::DimerBelow | Family::Pair | Family::DimerAbove => p.lb.exp(),
            Family::Ground | Family::Trimer => p.plus,
        })
    }

    /// Family unknowns from `(alpha, gamma)`.
    pub fn unknowns(self, alpha: f64, gamma: f64, c: f64) -> Result<Vec<f64>> {
        let bad = || Error::ConstraintViolation(format!("(alpha {alpha}, gamma {gamma}) at c = {c} is off the {self:?} branch"));
        if !(c < 0.0 && alpha > 0.0) {
            return Err(bad());
        }
        match self {
            Family::DimerBelow | Family::Pair => {
                let s = -2.0 * alpha / c;
                if s >= 1.0 {
                    return Err(bad());
                }
                let t = (s / (1.0 - s)).ln();
                Ok(if self == Family::Pair { vec![t] } else { vec![t, gamma] })
            }
            Family::DimerAbove => {
                let e = alpha + 0.5 * c;
                if e <= 0.0 {
                    return Err(bad());
                }
                Ok(vec![e.ln(), gamma])
            }
            Family::Ground => {
                let e = alpha + c;
                if e <= 0.0 {
                    return Err(bad());
                }
                Ok(vec![e.ln()])
            }
            Family::Trimer => {
                let (x, y) = (alpha + c, -3.0 * gamma);
                if y <= 0.0 {
                    return Err(bad());
                }
                Ok(vec![x.hypot(y).ln(), y.atan2(x)])
            }
        }
    }

    /// Residual in family unknowns. The modulus condition is divided by `alpha`
    /// on the families where `alpha = 0` solves it for every `gamma`.
    pub fn residual(self, x: &[f64], c: f64, p: f64, m: i64) -> Result<Vec<f64>> {
        let pc = self.pieces(x, c)?;
        let mut g1 = pc.modulus();
        if self.pair_below() {
            g1 /= pc.alpha;
        }
        let shift = if self.pair_below() { 0.0 } else { PI };
        Ok(match self.dim() {
            1 => vec![g1],
            _ => vec![g1, pc.phase(p, shift, m)],
        })
    }

    /// Both conditions at the family point, without deflation, for checks.
    pub fn full_residual(self, x: &[f64], c: f64, p: f64, m: i64) -> Result<[f64; 2]> {
        let pc = self.pieces(x, c)?;
        let shift = if self.pair_below() { 0.0 } else { PI };
        Ok([pc.modulus(), pc.phase(p, shift, m)])
    }
}

/// Residual of the complex-branch conditions in `(alpha, gamma)`.
///
/// The sign of `c + 2 alpha` selects the family (negative for `n1 = 1`,
/// positive for `n1 = 0`) and may not change; a point on the wrong side is a
/// constraint violation.
pub fn residual_complex(alpha: f64, gamma: f64, c: f64, label: QuantumLabel) -> Result<ResidualPoint> {
    let (l, _) = label.canonical();
    let m = phase_integer(label)?;
    if !(c < 0.0) {
        return Err(Error::ConstraintViolation(format!("complex branch needs c < 0, got {c}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::ConstraintViolation(format!("alpha must be positive, got {alpha}")));
    }
    let b = c + 2.0 * alpha;
    let below = l.n1 == 1;
    if (below && b >= 0.0) || (!below && b <= 0.0) {
        return Err(Error::ConstraintViolation(format!(
            "c + 2 alpha = {b} has the wrong sign for label {l}"
        )));
    }
    let g3 = 3.0 * gamma;
    let (minus, plus) = (c - alpha, c + alpha);
    if minus.hypot(g3) == 0.0 || plus.hypot(g3) == 0.0 {
        return Err(Error::ConstraintViolation("a momentum gap vanished".into()));
    }
    let pc = Pieces {
        alpha,
        gamma,
        minus,
        plus,
        la: (2.0 * alpha - c).ln(),
        lb: b.abs().ln(),
        lc: half_log_hyp(minus, g3),
        ld: half_log_hyp(plus, g3),
    };
    let shift = if below { 0.0 } else { PI };
    let p = label.total_momentum();
    let sign = if label == l { 1.0 } else { -1.0 };
    // a partner label is handled through its mirror gamma -> -gamma, p -> -p
    let pc = Pieces { gamma: sign * gamma, ..pc };
    Ok(ResidualPoint {
        unknowns: [alpha, gamma],
        residual: [pc.modulus(), pc.phase(sign * p, shift, m)],
        jacobian: None,
    })
}

/// `gamma^2` solved from the modulus condition at given `alpha`.
///
/// At `alpha = 0` this is the limit `c^2 (6 + c) / (-9 (4 + c))`.
pub fn gamma_squared_from_alpha(alpha: f64, c: f64) -> Result<f64> {
    if !(c < 0.0) || alpha < 0.0 {
        return Err(Error::InvalidArgument(format!("need c < 0 and alpha >= 0, got c = {c}, alpha = {alpha}")));
    }
    if alpha == 0.0 {
        let den = -9.0 * (4.0 + c);
        if den == 0.0 {
            return Err(Error::Pole("gamma^2 at alpha = 0, c = -4"));
        }
        return Ok(c * c * (6.0 + c) / den);
    }
    // R = e^{2 alpha} ((c + 2 alpha)/(2 alpha - c))^2 and gamma^2 (R - 1) 9 = (c-a)^2 - R (c+a)^2
    let x = 2.0 * alpha / -c;
    let log_ratio = if x < 1.0 {
        (-x).ln_1p() - x.ln_1p()
    } else {
        (c + 2.0 * alpha).abs().ln() - (2.0 * alpha - c).ln()
    };
    let r1 = (2.0 * alpha + 2.0 * log_ratio).exp_m1();
    if r1 == 0.0 || !r1.is_finite() {
        return Err(Error::Pole("gamma^2 from alpha"));
    }
    let plus2 = (c + alpha) * (c + alpha);
    Ok((-4.0 * c * alpha - r1 * plus2) / (9.0 * r1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(n1: i64, n2: i64) -> QuantumLabel {
        QuantumLabel::new(n1, n2).unwrap()
    }

    #[test]
    fn phase_integers() {
        assert_eq!(phase_integer(label(0, 0)).unwrap(), 0);
        assert_eq!(phase_integer(label(1, 1)).unwrap(), -1);
        assert_eq!(phase_integer(label(0, 1)).unwrap(), 0);
        assert_eq!(phase_integer(label(0, 2)).unwrap(), -1);
        assert_eq!(phase_integer(label(1, 2)).unwrap(), -1);
        assert!(phase_integer(label(2, 2)).is_err());
    }

    #[test]
    fn family_maps_round_trip() {
        let c = -7.0;
        let cases = [
            (Family::DimerBelow, 2.0, -1.7),
            (Family::Pair, 3.1, 0.0),
            (Family::DimerAbove, 4.0, -3.0),
            (Family::Ground, 7.5, 0.0),
            (Family::Trimer, 6.9, -0.2),
        ];
        for (f, a, g) in cases {
            let x = f.unknowns(a, g, c).unwrap();
            assert_eq!(x.len(), f.dim());
            let (a2, g2) = f.alpha_gamma(&x, c).unwrap();
            assert!((a - a2).abs() < 1e-13 && (g - g2).abs() < 1e-13, "{f:?}");
        }
    }

    #[test]
    fn map_residual_matches_direct_form() {
        let c = -5.5;
        let cases = [
            (label(1, 3), 1.3, -3.5),
            (label(0, 2), 3.4, -4.0),
            (label(0, 1), 5.9, -0.4),
            (label(0, 0), 6.2, 0.0),
            (label(1, 1), 2.0, 0.0),
        ];
        for (l, a, g) in cases {
            let f = Family::for_label(l).unwrap();
            let m = phase_integer(l).unwrap();
            let x = f.unknowns(a, g, c).unwrap();
            let direct = residual_complex(a, g, c, l).unwrap();
            let mapped = f.full_residual(&x, c, l.total_momentum(), m).unwrap();
            assert!((direct.residual[0] - mapped[0]).abs() < 1e-12, "{l}");
            assert!((direct.residual[1] - mapped[1]).abs() < 1e-12, "{l}");
        }
    }

    #[test]
    fn family_constraints() {
        assert!(residual_complex(3.0, -2.0, -5.0, label(1, 2)).is_err());
        assert!(residual_complex(2.0, -2.0, -5.0, label(0, 2)).is_err());
        assert!(residual_complex(1.0, -2.0, 0.5, label(1, 2)).is_err());
        assert!(Family::Trimer.alpha_gamma(&[0.0, -0.1], -3.0).is_err());
        assert!(Family::DimerBelow.unknowns(3.0, -1.0, -5.0).is_err());
    }

    #[test]
    fn gamma_squared_limits() {
        assert!((gamma_squared_from_alpha(0.0, -4.5).unwrap() - 6.75).abs() < 1e-13);
        assert_eq!(gamma_squared_from_alpha(0.0, -6.0).unwrap(), 0.0);
        assert!(gamma_squared_from_alpha(0.0, -4.0).is_err());
        // the alpha -> 0 limit is approached continuously
        let near = gamma_squared_from_alpha(1e-7, -4.5).unwrap();
        assert!((near - 6.75).abs() < 1e-4);
    }

    #[test]
    fn gamma_squared_solves_modulus_condition() {
        for &(a, c) in &[(0.3, -4.5), (1.0, -5.0), (2.4, -8.0), (10.0, -30.0)] {
            let g2 = gamma_squared_from_alpha(a, c).unwrap();
            if g2 > 0.0 {
                let g = -g2.sqrt();
                let r = residual_complex(a, g, c, label(1, 3)).unwrap();
                assert!(r.residual[0].abs() < 1e-10, "{a} {c} {r:?}");
            }
        }
    }
}
