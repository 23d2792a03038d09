//! Limiting forms of the roots: large `|c|`, small `c`, and bound pairs or
//! trimers deep in the attractive regime. Only the printed orders are used;
//! no resummation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::QuantumLabel;

const TWO_PI: f64 = 2.0 * PI;

/// Smallest `|c|` at which the first-order large-coupling gaps are quoted.
pub const LARGE_C_MIN: f64 = 20.0;
/// Largest `c` at which the bound-state forms are quoted.
pub const BOUND_C_MAX: f64 = -15.0;
/// Largest `|c|` for the small-coupling series.
pub const SMALL_C_MAX: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    LargePositiveC,
    LargeNegativeCReal,
    SmallC,
    Dimer,
    Trimer,
    EqualDeltaDimer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticRegime {
    pub regime: Regime,
    pub label: QuantumLabel,
}

impl AsymptoticRegime {
    pub fn new(regime: Regime, label: QuantumLabel) -> Result<Self> {
        let (l, _) = label.canonical();
        let ok = match regime {
            Regime::LargePositiveC | Regime::SmallC => true,
            Regime::LargeNegativeCReal => l.n1 >= 2,
            Regime::Dimer => l.n2 >= 2 && l.n1 <= 1,
            Regime::Trimer => l.n1 == 0 && l.n2 <= 1,
            Regime::EqualDeltaDimer => l.n1 == 1 && l.n2 == 1,
        };
        if ok {
            Ok(AsymptoticRegime { regime, label })
        } else {
            Err(Error::InvalidLabel { n1: label.n1, n2: label.n2, reason: "label not admissible in this regime" })
        }
    }
}

/// Which sign of the coupling a large-`|c|` expansion refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

/// First-order gap for quantum number `n` at large `|c|`.
pub fn delta_large_c(n: i64, c: f64, side: Side) -> Result<f64> {
    if c.abs() < LARGE_C_MIN {
        return Err(Error::InvalidArgument(format!("|c| = {} is below {LARGE_C_MIN}", c.abs())));
    }
    let n = n as f64;
    match side {
        Side::Positive => Ok(TWO_PI * (n + 1.0) * (1.0 - 6.0 / c.abs())),
        Side::Negative if n > 1.0 => Ok(TWO_PI * (n - 1.0) * (1.0 + 6.0 / c.abs())),
        Side::Negative => Err(Error::InvalidArgument("negative-coupling gap needs n > 1".into())),
    }
}

/// Bound-pair `alpha` for the labels `(1, n2)`, `(1, 1)` and `(0, n2 >= 2)`.
pub fn alpha_dimer(label: QuantumLabel, c: f64) -> Result<f64> {
    let (l, _) = label.canonical();
    let (h, e) = ((0.5 * c).exp(), c.exp());
    match (l.n1, l.n2) {
        (1, 1) => Ok(-0.5 * c + 3.0 * c * h),
        (1, _) => Ok(-0.5 * c + 3.0 * c * h - 9.0 * c * c * e),
        (0, n) if n >= 2 => Ok(-0.5 * c - 3.0 * c * h + 9.0 * c * c * e),
        _ => Err(Error::InvalidLabel { n1: label.n1, n2: label.n2, reason: "no dimer branch" }),
    }
}

/// Bound-pair `gamma` for `n1 = 1` or `n1 = 0` families.
pub fn gamma_dimer(n2: i64, c: f64, n1: i64) -> Result<f64> {
    let n = n2 as f64;
    let tail = 1.0 - 8.0 / c;
    match n1 {
        1 => Ok(-(TWO_PI / 3.0) * (n - 1.0) * tail),
        0 if n2 >= 2 => Ok(-((2.0 / 3.0) * n - 1.0) * PI * tail),
        _ => Err(Error::InvalidLabel { n1, n2, reason: "no dimer branch" }),
    }
}

/// `(alpha, gamma)` of the trimer labels `(0, 0)` and `(0, 1)` deep in the
/// attractive regime.
///
/// For `(0, 1)` the offset `alpha + c` and `gamma` sit on a ray of angle
/// `2 pi / 3`, with radius `-6 c e^c`.
pub fn alpha_trimer(label: QuantumLabel, c: f64) -> Result<(f64, f64)> {
    let (l, _) = label.canonical();
    match (l.n1, l.n2) {
        (0, 0) => {
            let eta = -6.0 * c * c.exp() - 36.0 * c * c * (2.0 * c).exp();
            Ok((-c + eta, 0.0))
        }
        (0, 1) => {
            let r = -6.0 * c * c.exp();
            let (s, co) = (2.0 * PI / 3.0).sin_cos();
            Ok((-c + r * co, -r * s / 3.0))
        }
        _ => Err(Error::InvalidLabel { n1: label.n1, n2: label.n2, reason: "no trimer branch" }),
    }
}

/// First-order slope of `delta1` at `c = 0` for labels with both numbers positive.
pub fn small_c_slope(n1: i64, n2: i64) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    (2.0 * a * b + 2.0 * b * b - a * a) / (a * b * (a + b) * PI)
}

fn positive_quadratic_root(a4: f64, a2: f64, c: f64) -> f64 {
    // a4 y^2 + a2 y - c = 0, the root continuous with y = c / a2
    let disc = a2 * a2 + 4.0 * a4 * c;
    2.0 * c / (a2 + disc.max(0.0).sqrt())
}

/// Small-coupling gaps `(delta1, delta2)` on the real branch.
///
/// Labels with a zero quantum number only have real gaps for `c >= 0`.
pub fn delta_small_c(label: QuantumLabel, c: f64) -> Result<(f64, f64)> {
    let (l, _) = label.canonical();
    let (n1, n2) = (l.n1, l.n2);
    if n1 >= 1 {
        let d1 = TWO_PI * n1 as f64 + small_c_slope(n1, n2) * c;
        let d2 = TWO_PI * n2 as f64 + small_c_slope(n2, n1) * c;
        return Ok((d1, d2));
    }
    if c < 0.0 {
        return Err(Error::InvalidArgument("real gaps of this label need c >= 0".into()));
    }
    if n2 == 0 {
        let d = positive_quadratic_root(1.0 / 108.0, 1.0 / 3.0, c).sqrt();
        return Ok((d, d));
    }
    let m = PI * n2 as f64;
    let d1 = positive_quadratic_root(1.0 / 192.0 + 1.0 / (32.0 * m * m), 0.25, c).sqrt();
    let d2 = 2.0 * m - 0.5 * d1 + 3.0 * d1 * d1 / (4.0 * m);
    Ok((d1, d2))
}

/// Small-coupling `(alpha, gamma)` for `c < 0` on labels with `n1 = 0`,
/// from the same series continued to imaginary `delta1`.
pub fn alpha_small_c(label: QuantumLabel, c: f64) -> Result<(f64, f64)> {
    let (l, _) = label.canonical();
    if l.n1 != 0 || c > 0.0 {
        return Err(Error::InvalidArgument("complex small-coupling series needs n1 = 0 and c <= 0".into()));
    }
    if l.n2 == 0 {
        // c = -a^2/3 + a^4/108
        let y = positive_quadratic_root(-1.0 / 108.0, 1.0 / 3.0, -c);
        return Ok((y.sqrt(), 0.0));
    }
    let m = PI * l.n2 as f64;
    // delta1 = -2 i alpha turns c = d^2/4 + a d^4 into c = -alpha^2 + 16 a alpha^4
    let a4 = 16.0 * (1.0 / 192.0 + 1.0 / (32.0 * m * m));
    let y = positive_quadratic_root(-a4, 1.0, -c);
    Ok((y.sqrt(), -2.0 * m / 3.0 + y / m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(n1: i64, n2: i64) -> QuantumLabel {
        QuantumLabel::new(n1, n2).unwrap()
    }

    #[test]
    fn large_coupling_values() {
        let v = delta_large_c(2, 1000.0, Side::Positive).unwrap();
        assert!((v - 6.0 * PI * 0.994).abs() < 1e-12);
        let v = delta_large_c(2, -1000.0, Side::Negative).unwrap();
        assert!((v - TWO_PI * 1.006).abs() < 1e-12);
        assert!(delta_large_c(1, -1000.0, Side::Negative).is_err());
        assert!(delta_large_c(3, 5.0, Side::Positive).is_err());
    }

    #[test]
    fn dimer_gammas() {
        assert!((gamma_dimer(2, -40.0, 1).unwrap() + TWO_PI * 0.4).abs() < 1e-12);
        assert!((gamma_dimer(3, -40.0, 0).unwrap() + PI * 1.2).abs() < 1e-12);
        assert!(gamma_dimer(1, -40.0, 0).is_err());
    }

    #[test]
    fn dimer_and_trimer_alphas() {
        let a = alpha_dimer(label(1, 1), -40.0).unwrap();
        assert!((a - (20.0 - 120.0 * (-20f64).exp())).abs() < 1e-12);
        let (a, g) = alpha_trimer(label(0, 0), -30.0).unwrap();
        assert!((a - 30.0 - 180.0 * (-30f64).exp()).abs() < 1e-12 && g == 0.0);
        let (a, g) = alpha_trimer(label(0, 1), -15.0).unwrap();
        let eta = a - 15.0;
        assert!(eta < 0.0 && g < 0.0);
        assert!((eta / (-3.0 * g) + 1.0 / 3f64.sqrt()).abs() < 1e-8);
        assert!(alpha_trimer(label(0, 2), -30.0).is_err());
    }

    #[test]
    fn small_coupling_series() {
        assert_eq!(delta_small_c(label(1, 1), 0.0).unwrap(), (TWO_PI, TWO_PI));
        let (d1, d2) = delta_small_c(label(0, 2), 0.01).unwrap();
        assert!((d1 - 0.2).abs() < 1e-3);
        assert!((d2 - (4.0 * PI - 0.1 + 3.0 * 0.04 / (8.0 * PI))).abs() < 1e-3);
        let (d, e) = delta_small_c(label(0, 0), 0.03).unwrap();
        assert_eq!(d, e);
        assert!((d * d / 3.0 + d.powi(4) / 108.0 - 0.03).abs() < 1e-15);
        let (a, _) = alpha_small_c(label(0, 0), -0.01).unwrap();
        assert!((a - 0.03f64.sqrt()).abs() < 1e-4);
        let (a, g) = alpha_small_c(label(0, 2), -0.01).unwrap();
        assert!((a - 0.1).abs() < 1e-4 && (g + 4.0 * PI / 3.0 - 0.01 / TWO_PI).abs() < 1e-5);
    }

    #[test]
    fn regimes() {
        assert!(AsymptoticRegime::new(Regime::Trimer, label(0, 1)).is_ok());
        assert!(AsymptoticRegime::new(Regime::Trimer, label(0, 2)).is_err());
        assert!(AsymptoticRegime::new(Regime::Dimer, label(1, 3)).is_ok());
        assert!(AsymptoticRegime::new(Regime::EqualDeltaDimer, label(1, 1)).is_ok());
        assert!(AsymptoticRegime::new(Regime::LargeNegativeCReal, label(1, 2)).is_err());
    }
}
