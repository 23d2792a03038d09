use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Identifies one tracked logarithm argument.
pub type LogKey = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Tracked {
    z: Complex64,
    value: Complex64,
    winding: i64,
}

/// Continuous logarithms for a family of arguments followed along a path.
///
/// Each key remembers the last argument and the last returned value. A new
/// value is the principal logarithm shifted by the multiple of `2 pi i` closest
/// to the previous value, so the winding count changes by one exactly when a
/// short segment of the path crosses the negative real axis.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WindingState {
    slots: Vec<Option<Tracked>>,
}

impl WindingState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Accumulated winding count of `key` (0 for an untouched key).
    pub fn winding(&self, key: LogKey) -> i64 {
        self.slots.get(key).copied().flatten().map_or(0, |t| t.winding)
    }

    /// Last argument recorded under `key`.
    pub fn last_argument(&self, key: LogKey) -> Option<Complex64> {
        self.slots.get(key).copied().flatten().map(|t| t.z)
    }

    /// The value `tracked_log` would return, without recording it.
    pub fn peek(&self, z: Complex64, key: LogKey) -> Result<(Complex64, i64)> {
        if z.norm() == 0.0 || !z.is_finite() {
            return Err(Error::SingularArgument { key: key_name(key) });
        }
        let principal = z.ln();
        let winding = match self.slots.get(key).copied().flatten() {
            None => 0,
            Some(prev) => ((prev.value.im - principal.im) / TWO_PI).round() as i64,
        };
        Ok((principal + Complex64::new(0.0, TWO_PI * winding as f64), winding))
    }

    fn commit(&mut self, z: Complex64, key: LogKey, value: Complex64, winding: i64) {
        if self.slots.len() <= key {
            self.slots.resize(key + 1, None);
        }
        self.slots[key] = Some(Tracked { z, value, winding });
    }
}

fn key_name(key: LogKey) -> &'static str {
    match key {
        0 => "first quantization argument",
        1 => "second quantization argument",
        _ => "tracked argument",
    }
}

/// Logarithm of `z` continued from the previous call with the same key.
pub fn tracked_log(z: Complex64, state: &mut WindingState, key: LogKey) -> Result<Complex64> {
    let (value, winding) = state.peek(z, key)?;
    state.commit(z, key, value, winding);
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_state_is_principal() {
        let mut w = WindingState::new();
        assert_eq!(tracked_log(Complex64::new(1.0, 0.0), &mut w, 0).unwrap(), Complex64::new(0.0, 0.0));
        let z = Complex64::new(-1.0, 1e-3);
        assert_eq!(tracked_log(z, &mut w, 3).unwrap(), z.ln());
        assert_eq!(w.winding(3), 0);
    }

    #[test]
    fn full_turn_accumulates() {
        let mut w = WindingState::new();
        let mut last = Complex64::new(0.0, 0.0);
        for j in 0..=8 {
            let phi = TWO_PI * j as f64 / 8.0;
            last = tracked_log(Complex64::from_polar(1.0, phi), &mut w, 0).unwrap();
        }
        assert!((last - Complex64::new(0.0, TWO_PI)).norm() < 1e-14);
        assert_eq!(w.winding(0), 1);
        // and back the other way twice
        for j in 0..=16 {
            let phi = TWO_PI * (1.0 - j as f64 / 8.0);
            last = tracked_log(Complex64::from_polar(1.0, phi), &mut w, 0).unwrap();
        }
        assert!((last - Complex64::new(0.0, -TWO_PI)).norm() < 1e-14);
        assert_eq!(w.winding(0), -1);
    }

    #[test]
    fn path_off_the_cut_matches_principal() {
        let mut w = WindingState::new();
        for j in 0..50 {
            let z = Complex64::new(0.5 + j as f64 * 0.1, (j as f64 * 0.3).sin());
            assert!((tracked_log(z, &mut w, 1).unwrap() - z.ln()).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_is_singular() {
        let mut w = WindingState::new();
        assert!(matches!(
            tracked_log(Complex64::new(0.0, 0.0), &mut w, 0),
            Err(Error::SingularArgument { .. })
        ));
    }

    #[test]
    fn peek_does_not_commit() {
        let mut w = WindingState::new();
        tracked_log(Complex64::from_polar(1.0, 3.0), &mut w, 0).unwrap();
        let (v, n) = w.peek(Complex64::from_polar(1.0, -3.0), 0).unwrap();
        assert_eq!(n, 1);
        assert!((v.im - (TWO_PI - 3.0)).abs() < 1e-14);
        assert_eq!(w.winding(0), 0);
    }
}
