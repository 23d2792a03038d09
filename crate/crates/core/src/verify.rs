//! Invariant suites run by `bethe3 verify`.
//!
//! Each property solves a handful of states and checks an identity that
//! holds for every exact eigenstate. These are self-consistency checks; the
//! independent oracles live in the test suite.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{alpha_dimer, alpha_trimer, delta_large_c, small_c_slope, Side};
use crate::continuation::{find_critical, solve_state, trace_root_with, TraceOptions};
use crate::error::Error;
use crate::model::{energy, BranchCoords, QuantumLabel, StateSolution};
use crate::observables::{norm_squared, potential_expectation};
use crate::system::{real_phase_residual, residual_complex};
use crate::wavefunction::{jump_residual_with, periodicity_residual_with, ConfigurationPoint, Wavefunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Model,
    System,
    Continuation,
    Asymptotics,
    Wavefunction,
    Observables,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Model, Suite::System, Suite::Continuation, Suite::Asymptotics, Suite::Wavefunction, Suite::Observables];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Model => "model",
            Suite::System => "system",
            Suite::Continuation => "continuation",
            Suite::Asymptotics => "asymptotics",
            Suite::Wavefunction => "wavefunction",
            Suite::Observables => "observables",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Selection of suites: one of them or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteSelection(pub Option<Suite>);

impl SuiteSelection {
    pub fn suites(self) -> Vec<Suite> {
        self.0.map_or_else(|| Suite::ALL.to_vec(), |s| vec![s])
    }
}

impl FromStr for SuiteSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "all" {
            return Ok(SuiteSelection(None));
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .map(|x| SuiteSelection(Some(x)))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&TraceOptions) -> Result<String, String>;

fn properties(suite: Suite) -> &'static [(&'static str, Check)] {
    match suite {
        Suite::Model => &[
            ("momentum-sum", momentum_sum),
            ("energy-formulas", energy_formulas),
            ("partner-degeneracy", partner_degeneracy),
            ("equal-label-symmetry", equal_label_symmetry),
        ],
        Suite::System => &[("free-limit", free_limit), ("residual-at-roots", residual_at_roots)],
        Suite::Continuation => &[
            ("critical-couplings", critical_couplings),
            ("fold-continuity", fold_continuity),
            ("branch-flip", branch_flip),
        ],
        Suite::Asymptotics => &[
            ("bound-pair", bound_pair),
            ("bound-trimer", bound_trimer),
            ("large-coupling", large_coupling),
            ("small-coupling", small_coupling),
        ],
        Suite::Wavefunction => &[("boundary-conditions", boundary_conditions), ("symmetry", symmetry)],
        Suite::Observables => &[
            ("norm-positive", norm_positive),
            ("potential-sign", potential_sign),
            ("potential-derivative", potential_derivative),
        ],
    }
}

pub fn run_suite(suite: Suite, opts: &TraceOptions) -> Vec<PropertyResult> {
    properties(suite)
        .iter()
        .map(|&(name, check)| {
            let (passed, detail) = match check(opts) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            PropertyResult { suite, name, passed, detail }
        })
        .collect()
}

pub fn run_selection(sel: SuiteSelection, opts: &TraceOptions) -> Vec<PropertyResult> {
    sel.suites().into_iter().flat_map(|s| run_suite(s, opts)).collect()
}

fn label(n1: i64, n2: i64) -> QuantumLabel {
    QuantumLabel::new(n1, n2).expect("fixed labels are valid")
}

fn solve(n1: i64, n2: i64, c: f64, opts: &TraceOptions) -> Result<StateSolution, String> {
    solve_state(label(n1, n2), c, opts).map_err(|e| format!("({n1},{n2}) at c = {c}: {e}"))
}

const TRACED: [(i64, i64); 7] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2), (2, 3)];

fn traced_states(opts: &TraceOptions) -> Result<Vec<StateSolution>, String> {
    let mut out = Vec::new();
    for (n1, n2) in TRACED {
        let o = TraceOptions { step: 0.25, ..*opts };
        let t = trace_root_with(label(n1, n2), -10.0, 10.0, &o).map_err(|e| format!("({n1},{n2}): {e}"))?;
        out.extend(t.samples);
    }
    Ok(out)
}

fn worst<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn within(name: &str, value: f64, tol: f64) -> Result<String, String> {
    if value <= tol {
        Ok(format!("{name} {value:e} <= {tol:e}"))
    } else {
        Err(format!("{name} {value:e} > {tol:e}"))
    }
}

fn momentum_sum(opts: &TraceOptions) -> Result<String, String> {
    let states = traced_states(opts)?;
    let e = worst(states.iter().map(|s| (s.momenta.sum() - s.coords.p()).norm()));
    let p = worst(states.iter().map(|s| (s.coords.p() - s.label.total_momentum()).abs()));
    within("worst |sum k - p|", e.max(p), 1e-10)
}

fn energy_formulas(opts: &TraceOptions) -> Result<String, String> {
    for s in traced_states(opts)? {
        energy(&s).map_err(|e| format!("{} at c = {}: {e}", s.label, s.c))?;
    }
    Ok("sum of squares and chart formula agree on every traced state".into())
}

fn partner_degeneracy(opts: &TraceOptions) -> Result<String, String> {
    let mut gap: f64 = 0.0;
    for (n1, n2) in [(1, 2), (0, 2), (1, 3)] {
        for i in 0..20 {
            let c = -9.5 + i as f64;
            let (a, b) = (solve(n1, n2, c, opts)?, solve(n2, n1, c, opts)?);
            gap = gap.max((a.energy - b.energy).abs() / a.energy.abs().max(1.0));
        }
    }
    within("worst partner energy gap", gap, 1e-10)
}

fn equal_label_symmetry(opts: &TraceOptions) -> Result<String, String> {
    let mut gap: f64 = 0.0;
    for n in 0..4 {
        for c in [-9.0, -3.0, 2.0, 8.0] {
            let s = solve(n, n, c, opts)?;
            gap = gap.max(match s.coords {
                BranchCoords::RealK { delta1, delta2, .. } => (delta1 - delta2).abs(),
                BranchCoords::ComplexK { gamma, .. } => gamma.abs(),
            });
        }
    }
    within("worst asymmetry", gap, 1e-12)
}

fn free_limit(opts: &TraceOptions) -> Result<String, String> {
    let mut gap: f64 = 0.0;
    for (n1, n2) in TRACED {
        let s = solve(n1, n2, 0.0, opts)?;
        let (d1, d2) = s.coords.deltas();
        gap = gap.max((d1.re - 2.0 * PI * n1 as f64).abs()).max((d2.re - 2.0 * PI * n2 as f64).abs());
    }
    within("worst gap offset at c = 0", gap, 1e-12)
}

fn residual_at_roots(opts: &TraceOptions) -> Result<String, String> {
    let mut r: f64 = 0.0;
    for s in traced_states(opts)? {
        let l = s.label;
        let v = match s.coords {
            BranchCoords::RealK { delta1, delta2, .. } => {
                let f = real_phase_residual(delta1, delta2, s.c, l.n1, l.n2, false);
                f[0].abs().max(f[1].abs())
            }
            BranchCoords::ComplexK { alpha, gamma, .. } => {
                let p = residual_complex(alpha, gamma, s.c, s.label).map_err(|e| e.to_string())?;
                p.norm()
            }
        };
        r = r.max(v);
    }
    within("worst residual", r, 1e-9)
}

fn critical_couplings(_: &TraceOptions) -> Result<String, String> {
    let c = |n2| find_critical(label(1, n2)).map(|p| p.c).map_err(|e| e.to_string());
    let c11 = c(1)?;
    if (c11 + 6.0).abs() > 1e-8 {
        return Err(format!("C(1,1) = {c11}"));
    }
    let c12 = c(2)?;
    if (c12 + 4.163).abs() > 5e-4 {
        return Err(format!("C(1,2) = {c12}"));
    }
    let mut prev = c12;
    for n2 in 3..=10 {
        let next = c(n2)?;
        if !(next > prev && next > -6.0 && next < -4.0) {
            return Err(format!("C(1,{n2}) = {next} after {prev}"));
        }
        prev = next;
    }
    Ok(format!("C(1,1) = {c11}, C(1,2) = {c12}, increasing to {prev} at n2 = 10"))
}

fn fold_continuity(opts: &TraceOptions) -> Result<String, String> {
    let mut out = Vec::new();
    for n2 in 1..=3 {
        let cc = find_critical(label(1, n2)).map_err(|e| e.to_string())?.c;
        let jump = |eps: f64| -> Result<f64, String> {
            Ok((solve(1, n2, cc - eps, opts)?.energy - solve(1, n2, cc + eps, opts)?.energy).abs())
        };
        let (k1, k2) = (jump(1e-3)? / 1e-3, jump(1e-4)? / 1e-4);
        let ratio = k1.max(k2) / k1.min(k2).max(f64::MIN_POSITIVE);
        if !(k1.is_finite() && k2.is_finite() && ratio < 10.0) {
            return Err(format!("(1,{n2}): K = {k1} and {k2}"));
        }
        out.push(format!("(1,{n2}) K = {k2:.4}"));
    }
    Ok(out.join(", "))
}

fn branch_flip(opts: &TraceOptions) -> Result<String, String> {
    let t = trace_root_with(label(0, 0), -1.0, 1.0, &TraceOptions { step: 0.1, ..*opts }).map_err(|e| e.to_string())?;
    let bad = t.samples.iter().find(|s| s.coords.is_real() != (s.c >= 0.0));
    match bad {
        None => Ok(format!("{} samples, real exactly for c >= 0", t.samples.len())),
        Some(s) => Err(format!("branch {} at c = {}", s.coords.branch_name(), s.c)),
    }
}

fn complex_alpha(s: &StateSolution) -> Result<f64, String> {
    match s.coords {
        BranchCoords::ComplexK { alpha, .. } => Ok(alpha),
        _ => Err(format!("{} at c = {} is on the real branch", s.label, s.c)),
    }
}

fn bound_pair(opts: &TraceOptions) -> Result<String, String> {
    let a = complex_alpha(&solve(1, 1, -40.0, opts)?)?;
    let e = alpha_dimer(label(1, 1), -40.0).map_err(|e| e.to_string())?;
    within("|alpha - asymptote| for (1,1) at c = -40", (a - e).abs(), 1e-6)
}

fn bound_trimer(opts: &TraceOptions) -> Result<String, String> {
    let a = complex_alpha(&solve(0, 0, -30.0, opts)?)?;
    let (e, _) = alpha_trimer(label(0, 0), -30.0).map_err(|e| e.to_string())?;
    within("|alpha - asymptote| for (0,0) at c = -30", (a - e).abs(), 1e-6)
}

fn large_coupling(opts: &TraceOptions) -> Result<String, String> {
    let mut worst_rel: f64 = 0.0;
    for (c, side) in [(200.0, Side::Positive), (-200.0, Side::Negative)] {
        let s = solve(2, 2, c, opts)?;
        let (d, _) = s.coords.deltas();
        let e = delta_large_c(2, c, side).map_err(|e| e.to_string())?;
        worst_rel = worst_rel.max((d.re - e).abs() / e);
    }
    within("relative gap error for (2,2) at |c| = 200", worst_rel, 5e-3)
}

fn small_coupling(opts: &TraceOptions) -> Result<String, String> {
    let mut worst_rel: f64 = 0.0;
    for (n1, n2) in [(1, 1), (1, 2), (2, 3)] {
        for c in [-1e-3, 1e-3] {
            let s = solve(n1, n2, c, opts)?;
            let (d, _) = s.coords.deltas();
            let slope = (d.re - 2.0 * PI * n1 as f64) / c;
            let e = small_c_slope(n1, n2);
            worst_rel = worst_rel.max((slope - e).abs() / e.abs());
        }
    }
    within("relative slope error at |c| = 1e-3", worst_rel, 0.02)
}

const PROBE_STATES: [(i64, i64, f64); 6] =
    [(2, 2, 3.0), (1, 3, -2.0), (0, 0, -9.0), (1, 1, -8.0), (0, 2, -9.0), (1, 2, -5.0)];

fn boundary_conditions(opts: &TraceOptions) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut r: f64 = 0.0;
    for (n1, n2, c) in PROBE_STATES {
        let w = Wavefunction::new(&solve(n1, n2, c, opts)?).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let (lo, hi) = (a.min(b), a.max(b));
            r = r.max(jump_residual_with(&w, lo, hi)).max(jump_residual_with(&w, hi, lo));
            r = r.max(periodicity_residual_with(&w, lo, hi));
        }
    }
    within("worst boundary residual", r, 1e-9)
}

fn symmetry(opts: &TraceOptions) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut r: f64 = 0.0;
    for (n1, n2, c) in PROBE_STATES {
        let w = Wavefunction::new(&solve(n1, n2, c, opts)?).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let x: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            let base = w.eval(ConfigurationPoint::new(x[0], x[1], x[2]));
            let swapped = w.eval(ConfigurationPoint::new(x[2], x[0], x[1]));
            r = r.max((base - swapped).norm() / base.norm().max(1.0));
        }
    }
    within("worst permutation mismatch", r, 1e-12)
}

fn norm_positive(opts: &TraceOptions) -> Result<String, String> {
    for (n1, n2, c) in PROBE_STATES {
        let n = norm_squared(&solve(n1, n2, c, opts)?).map_err(|e| e.to_string())?;
        if !(n.is_finite() && n > 0.0) {
            return Err(format!("({n1},{n2}) at c = {c}: norm {n}"));
        }
    }
    Ok("finite and positive on every probe state".into())
}

fn potential_sign(opts: &TraceOptions) -> Result<String, String> {
    for (n1, n2, c) in PROBE_STATES.iter().copied().chain([(1, 2, 0.0), (0, 0, 0.0)]) {
        let v = potential_expectation(&solve(n1, n2, c, opts)?).map_err(|e| e.to_string())?;
        let ok = if c == 0.0 { v == 0.0 } else { v.signum() == c.signum() };
        if !ok {
            return Err(format!("({n1},{n2}) at c = {c}: <V> = {v}"));
        }
    }
    Ok("sign of <V> follows c, zero at c = 0".into())
}

fn potential_derivative(opts: &TraceOptions) -> Result<String, String> {
    let mut r: f64 = 0.0;
    for (n1, n2, c) in PROBE_STATES {
        let h = 1e-5;
        let de = (solve(n1, n2, c + h, opts)?.energy - solve(n1, n2, c - h, opts)?.energy) / (2.0 * h);
        let v = potential_expectation(&solve(n1, n2, c, opts)?).map_err(|e| e.to_string())?;
        r = r.max((v - c * de).abs() / v.abs());
    }
    within("worst relative gap between <V> and c dE/dc", r, 1e-5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_parsing() {
        assert_eq!("all".parse::<SuiteSelection>().unwrap().suites().len(), 6);
        assert_eq!("observables".parse::<SuiteSelection>().unwrap(), SuiteSelection(Some(Suite::Observables)));
        assert!("nope".parse::<SuiteSelection>().is_err());
    }

    #[test]
    fn critical_suite_passes() {
        let r = run_suite(Suite::Continuation, &TraceOptions::default());
        assert!(r.iter().all(|p| p.passed), "{r:?}");
    }
}
