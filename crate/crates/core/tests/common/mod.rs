//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use bethe3::continuation::{solve_state, TraceOptions};
use bethe3::model::{QuantumLabel, StateSolution};
use bethe3::wavefunction::Wavefunction;
use num_complex::Complex64;

pub fn label(n1: i64, n2: i64) -> QuantumLabel {
    QuantumLabel::new(n1, n2).unwrap()
}

pub fn solved(n1: i64, n2: i64, c: f64) -> StateSolution {
    solve_state(label(n1, n2), c, &TraceOptions::default())
        .unwrap_or_else(|e| panic!("({n1},{n2}) at c = {c}: {e}"))
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

/// Integral over `0 <= x1 <= x2 <= x3 <= 1` by a collapsed tensor rule.
pub fn simplex_quadrature<F: FnMut([f64; 3]) -> Complex64>(mut f: F, n: usize) -> Complex64 {
    let g = gauss_legendre(n);
    let mut s = Complex64::new(0.0, 0.0);
    for &(u, wu) in &g {
        for &(v, wv) in &g {
            for &(w, ww) in &g {
                let x3 = u;
                let x2 = u * v;
                let x1 = u * v * w;
                s += f([x1, x2, x3]) * (wu * wv * ww * u * u * v);
            }
        }
    }
    s
}

/// Integral over `0 <= x1 <= x3 <= 1`.
pub fn triangle_quadrature<F: FnMut(f64, f64) -> f64>(mut f: F, n: usize) -> f64 {
    let g = gauss_legendre(n);
    let mut s = 0.0;
    for &(u, wu) in &g {
        for &(v, wv) in &g {
            s += f(u * v, u) * wu * wv * u;
        }
    }
    s
}

pub fn quadrature_norm(state: &StateSolution, n: usize) -> f64 {
    let w = Wavefunction::new(state).unwrap();
    6.0 * simplex_quadrature(|x| Complex64::new(w.ordered(x).norm_sqr(), 0.0), n).re
}

pub fn quadrature_potential(state: &StateSolution, n: usize) -> f64 {
    let w = Wavefunction::new(state).unwrap();
    let plane = triangle_quadrature(|x1, x3| w.ordered([x1, x1, x3]).norm_sqr(), n);
    12.0 * state.c * plane / quadrature_norm(state, n)
}

/// Central difference of `f` at `x`.
pub fn derivative<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Plain bisection on a bracketing interval.
pub fn bisection<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no bracket on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
