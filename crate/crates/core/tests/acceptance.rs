//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use bethe3::continuation::{find_critical, trace_root};
use bethe3::model::{BranchCoords, StateSolution};
use bethe3::observables::{
    density_grid, norm_squared, potential_expectation, simplex_integral, CellKind, SimplexIntegralKey,
};
use bethe3::wavefunction::{dimer_prefactor, jump_residual, periodicity_residual};
use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_PI: f64 = 2.0 * PI;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn alpha_of(s: &StateSolution) -> f64 {
    match s.coords {
        BranchCoords::ComplexK { alpha, .. } => alpha,
        _ => panic!("{} at c = {} has real momenta", s.label, s.c),
    }
}

fn critical_couplings() -> Outcome {
    let c = |n2| find_critical(label(1, n2)).unwrap().c;
    let (c11, c12) = (c(1), c(2));
    let mut ok = (c11 + 6.0).abs() < 1e-8 && (c12 + 4.163).abs() < 5e-4;
    let mut prev = c12;
    for n2 in 3..=20 {
        let next = c(n2);
        ok &= next > prev && next > -6.0 && next < -4.0;
        prev = next;
    }
    check(ok, format!("C(1,1) = {c11}, C(1,2) = {c12:.6}, C(1,20) = {prev:.6}"))
}

/// Total-momentum index from integer momenta with the given free gaps.
fn np_oracle(n1: i64, n2: i64) -> i64 {
    // 3 m1 + 2 n1 + n2 + 3 = np with np in {-1, 0, 1}
    let r = (2 * n1 + n2).rem_euclid(3);
    if r == 2 {
        -1
    } else {
        r
    }
}

const LABELS: [(i64, i64); 12] =
    [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (2, 3), (3, 3), (0, 4)];

fn reference_values() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n1, n2) in LABELS {
        let t = trace_root(label(n1, n2), -1.0, 1.0, 0.25).unwrap();
        let s = t.at(0.0).unwrap();
        let (d1, d2) = s.coords.deltas();
        worst = worst.max((d1.re - TWO_PI * n1 as f64).abs()).max((d2.re - TWO_PI * n2 as f64).abs());
        if s.label.np != np_oracle(n1, n2) {
            return Err(format!("({n1},{n2}): np {} vs {}", s.label.np, np_oracle(n1, n2)));
        }
    }
    check(worst < 1e-12, format!("worst |delta(0) - 2 pi n| = {worst:e} over {} labels", LABELS.len()))
}

fn asymptotic_agreement() -> Outcome {
    let a11 = alpha_of(&solved(1, 1, -40.0));
    let e11 = (a11 - (20.0 + 3.0 * -40.0 * (-20f64).exp())).abs();
    let a00 = alpha_of(&solved(0, 0, -30.0));
    let e00 = (a00 - (30.0 + 180.0 * (-30f64).exp())).abs();
    let gap = |c: f64| solved(2, 2, c).coords.deltas().0.re;
    let e_pos = rel(gap(200.0), TWO_PI * 3.0 * (1.0 - 6.0 / 200.0));
    let e_neg = rel(gap(-200.0), TWO_PI * (1.0 + 6.0 / 200.0));
    let mut e_slope: f64 = 0.0;
    for (n1, n2) in [(1, 1), (1, 2), (2, 1), (1, 3), (2, 3), (3, 3)] {
        let (a, b) = (n1 as f64, n2 as f64);
        let slope = (2.0 * a * b + 2.0 * b * b - a * a) / (a * b * (a + b) * PI);
        for c in [-1e-3, 1e-3] {
            let d1 = solved(n1, n2, c).coords.deltas().0.re;
            e_slope = e_slope.max(rel((d1 - TWO_PI * a) / c, slope));
        }
    }
    check(
        e11 < 1e-6 && e00 < 1e-6 && e_pos < 5e-3 && e_neg < 5e-3 && e_slope < 0.02,
        format!(
            "(1,1) {e11:.1e}, (0,0) {e00:.1e}, (2,2) at +200 {e_pos:.1e} and -200 {e_neg:.1e}, slopes {e_slope:.1e}"
        ),
    )
}

const REPRESENTATIVE: [(i64, i64, f64); 10] = [
    (2, 2, 3.0),
    (2, 3, -4.0),
    (1, 3, 1.0),
    (3, 1, -2.0),
    (1, 2, -4.5),
    (0, 0, -9.0),
    (1, 1, -8.0),
    (0, 2, -9.0),
    (0, 1, -6.0),
    (1, 2, -7.0),
];

fn boundary_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut jump, mut period): (f64, f64) = (0.0, 0.0);
    let mut complex = 0;
    for (n1, n2, c) in REPRESENTATIVE {
        let s = solved(n1, n2, c);
        complex += usize::from(!s.coords.is_real());
        for _ in 0..50 {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let (lo, hi) = (a.min(b), a.max(b));
            jump = jump.max(jump_residual(&s, lo, hi).unwrap()).max(jump_residual(&s, hi, lo).unwrap());
            period = period.max(periodicity_residual(&s, lo, hi).unwrap());
        }
    }
    check(
        jump < 1e-9 && period < 1e-9 && complex > 0 && complex < REPRESENTATIVE.len(),
        format!("worst jump {jump:.1e}, periodicity {period:.1e}; {complex} of 10 states complex"),
    )
}

fn conservation_and_symmetry() -> Outcome {
    let mut sum_err: f64 = 0.0;
    for (n1, n2) in LABELS {
        for s in trace_root(label(n1, n2), -10.0, 10.0, 0.1).unwrap().samples {
            sum_err = sum_err.max((s.momenta.sum() - TWO_PI * np_oracle(n1, n2) as f64).norm());
        }
    }
    let mut partner: f64 = 0.0;
    for (n1, n2) in [(1, 2), (0, 2), (1, 3), (0, 1)] {
        for i in 0..20 {
            let c = -9.7 + 1.0 * i as f64;
            partner = partner.max((solved(n1, n2, c).energy - solved(n2, n1, c).energy).abs());
        }
    }
    let mut equal: f64 = 0.0;
    for n in 0..4 {
        for c in [-9.0, -5.0, -1.0, 0.5, 4.0] {
            equal = equal.max(match solved(n, n, c).coords {
                BranchCoords::RealK { delta1, delta2, .. } => (delta1 - delta2).abs(),
                BranchCoords::ComplexK { gamma, .. } => gamma.abs(),
            });
        }
    }
    check(
        sum_err < 1e-10 && partner < 1e-10 && equal < 1e-12,
        format!("momentum sum {sum_err:.1e}, partner energies {partner:.1e}, equal-label asymmetry {equal:.1e}"),
    )
}

fn energy_continuity() -> Outcome {
    let mut out = Vec::new();
    let mut ok = true;
    for n2 in 1..=4 {
        let cc = find_critical(label(1, n2)).unwrap().c;
        let jump = |eps: f64| (solved(1, n2, cc - eps).energy - solved(1, n2, cc + eps).energy).abs();
        let (k3, k4) = (jump(1e-3) / 1e-3, jump(1e-4) / 1e-4);
        let ratio = k3.max(k4) / k3.min(k4);
        ok &= k3.is_finite() && k4.is_finite() && ratio < 10.0;
        out.push(format!("(1,{n2}) K {k3:.3}/{k4:.3}"));
    }
    check(ok, out.join(", "))
}

fn random_key(rng: &mut ChaCha8Rng, case: usize) -> SimplexIntegralKey {
    let mut z = || Complex64::new(rng.gen_range(-15.0..15.0), rng.gen_range(-5.0..5.0));
    let zero = Complex64::new(0.0, 0.0);
    match case % 5 {
        0 | 1 => SimplexIntegralKey::new(z(), z()),
        2 => SimplexIntegralKey::new(z(), zero),
        3 => {
            let a = z();
            SimplexIntegralKey::new(a, -a)
        }
        _ if case % 10 == 4 => SimplexIntegralKey::new(zero, zero),
        _ => SimplexIntegralKey::new(zero, z()),
    }
}

fn appendix_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut simplex: f64 = 0.0;
    let mut seen = [0usize; 3];
    for i in 0..200 {
        let key = random_key(&mut rng, i);
        seen[key.case as usize] += 1;
        let [a1, a2, a3] = key.alphas;
        let q = simplex_quadrature(|x| (Complex64::i() * (a1 * x[0] + a2 * x[1] + a3 * x[2])).exp(), 48);
        simplex = simplex.max((simplex_integral(&key) - q).norm() / q.norm());
    }
    let (mut norm, mut pot): (f64, f64) = (0.0, 0.0);
    let mut sign_ok = true;
    for (n1, n2, c) in [(2, 2, -2.0), (1, 3, 1.5), (0, 0, -9.0), (1, 1, -8.0), (0, 2, -5.0), (1, 2, -7.0)] {
        let s = solved(n1, n2, c);
        norm = norm.max(rel(norm_squared(&s).unwrap(), quadrature_norm(&s, 64)));
        let v = potential_expectation(&s).unwrap();
        pot = pot.max(rel(v, quadrature_potential(&s, 64)));
        sign_ok &= v.signum() == c.signum();
    }
    let zero = LABELS.iter().all(|&(a, b)| potential_expectation(&solved(a, b, 0.0)).unwrap() == 0.0);
    let (v50, v8) =
        (potential_expectation(&solved(2, 2, -50.0)).unwrap(), potential_expectation(&solved(2, 2, -8.0)).unwrap());
    check(
        simplex < 1e-8 && seen.iter().all(|&n| n > 0) && norm < 1e-4 && pot < 1e-4 && sign_ok && zero && v50 > v8,
        format!(
            "simplex {simplex:.1e} (cases {seen:?}), norm {norm:.1e}, <V> {pot:.1e}, <V>(2,2): {v50:.4} at -50 vs {v8:.4} at -8"
        ),
    )
}

fn ternary_structure() -> Outcome {
    let trimer = density_grid(&solved(0, 0, -9.0), 32).unwrap();
    let vertex_max = trimer.max_cell().kind == CellKind::Vertex;
    let dimer = density_grid(&solved(0, 2, -9.0), 32).unwrap();
    let (edge, interior) = (dimer.mean_density(CellKind::Edge), dimer.mean_density(CellKind::Interior));
    let p00 = dimer_prefactor(&solved(0, 0, -40.0)).unwrap();
    let p11 = dimer_prefactor(&solved(1, 1, -40.0)).unwrap();
    check(
        vertex_max && edge > interior && (p00 - 3.0).abs() < 0.03 && p11.abs() > 100.0,
        format!(
            "(0,0) max at {:?} cell, (0,2) edge/interior {:.3}/{:.3}, prefactor (0,0) {p00:.5}, |(1,1)| {:.3e}",
            trimer.max_cell().kind,
            edge,
            interior,
            p11.abs()
        ),
    )
}

fn energy_curves() -> Outcome {
    let mut monotone = true;
    for n in [0, 1] {
        let t = trace_root(label(n, n), -10.0, 0.0, 0.05).unwrap();
        monotone &= t.samples.windows(2).all(|w| w[0].energy < w[1].energy);
    }
    let e = solved(0, 0, -10.0).energy;
    let bound = rel(e, -200.0);
    let mut drift: f64 = 0.0;
    let mut limits = Vec::new();
    for n in [2, 3] {
        for c in [200.0, -200.0] {
            let (far, near) = (solved(n, n, c).energy, solved(n, n, c * 0.95).energy);
            drift = drift.max(rel(near, far));
            limits.push(far);
        }
    }
    let distinct = limits.iter().enumerate().all(|(i, a)| limits[i + 1..].iter().all(|b| rel(*a, *b) > 1e-2));
    check(
        monotone && bound < 0.1 && drift < 0.01 && distinct,
        format!("E(0,0; -10) = {e:.3} ({bound:.1e} from -2c^2), drift over |c| in [190, 200] {drift:.1e}, limits {limits:.2?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("critical couplings", critical_couplings),
        ("reference values", reference_values),
        ("asymptotic agreement", asymptotic_agreement),
        ("boundary-condition identities", boundary_identities),
        ("conservation and symmetry", conservation_and_symmetry),
        ("energy continuity at folds", energy_continuity),
        ("appendix oracles", appendix_oracles),
        ("ternary structure", ternary_structure),
        ("energy curves", energy_curves),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag} {name}: {detail}", i + 1);
    }
    println!("acceptance: {} of 9 passed in {:.1} s", 9 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
