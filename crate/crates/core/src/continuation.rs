//! Following a labelled root through the coupling.
//!
//! Every trajectory starts from the free solution at `c = 0` and is continued
//! outward with a secant predictor and a damped Newton corrector. Labels with
//! a unit quantum number lose two real momenta at a critical coupling in
//! `[-6, -4)`; labels with a zero quantum number do so at `c = 0`. Close to
//! those points the root behaves like a square root of the distance, so the
//! tracer does not march through them: inside a small window the corrector is
//! seeded from the local square-root model, and past it marching resumes on the
//! complex chart.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{alpha_small_c, delta_small_c};
use crate::error::{Error, Result};
use crate::model::{partner_state, BranchCoords, LabelRelation, QuantumLabel, StateSolution};
use crate::system::{
    local_branch_integers, newton::inf_norm, newton_solve, phase_integer, real_phase_residual,
    residual_equal_delta, residual_real_peek, tracked_log, Family, NewtonOptions, WindingState,
};
use crate::tolerance::{BASE_STEP, CRITICAL_WINDOW, MIN_STEP, NEWTON_MAX_ITER, ORIGIN_WINDOW, RESIDUAL_TOL};

const TWO_PI: f64 = 2.0 * PI;
/// Largest correction the corrector may apply to a predicted point.
const MAX_CORRECTION: f64 = 0.5;
/// Slack on the real-branch gap bounds.
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    /// Grid spacing, also the largest continuation step near `c = 0`.
    pub step: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub min_step: f64,
    pub critical_window: f64,
    pub origin_window: f64,
    /// Add degenerate partners to spectra.
    pub include_partners: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: BASE_STEP,
            tol: RESIDUAL_TOL,
            max_iter: NEWTON_MAX_ITER,
            min_step: MIN_STEP,
            critical_window: CRITICAL_WINDOW,
            origin_window: ORIGIN_WINDOW,
            include_partners: false,
        }
    }
}

impl TraceOptions {
    fn newton(&self) -> NewtonOptions {
        NewtonOptions { tol: self.tol, max_iter: self.max_iter, ..Default::default() }
    }
}

/// Where a label's momenta first become complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalClass {
    /// Smallest quantum number 0: the pair forms at `c = 0`.
    AtZero,
    /// Smallest quantum number 1: the pair forms at some `C` in `[-6, -4)`.
    Window,
    /// Both quantum numbers at least 2: momenta stay real.
    None,
}

pub fn critical_class(label: QuantumLabel) -> CriticalClass {
    let (l, _) = label.canonical();
    match l.n1 {
        0 => CriticalClass::AtZero,
        1 => CriticalClass::Window,
        _ => CriticalClass::None,
    }
}

/// Critical coupling and, for `n1 = 1`, the limiting ratio `u0 = delta2 / c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub c: f64,
    pub u0: Option<f64>,
}

/// `f(u) = -6 atan(u) + 2 pi (n2 - 1) + 4u + 2u/(1 + u^2)`; `f' = 4 (u^2/(1+u^2))^2 >= 0`.
fn critical_equation(u: f64, n2: i64) -> f64 {
    -6.0 * u.atan() + TWO_PI * (n2 - 1) as f64 + 4.0 * u + 2.0 * u / (1.0 + u * u)
}

/// Critical coupling of a label `(1, n2)`.
pub fn find_critical(label: QuantumLabel) -> Result<CriticalPoint> {
    let (l, _) = label.canonical();
    if l.n1 != 1 {
        return Err(Error::InvalidLabel {
            n1: label.n1,
            n2: label.n2,
            reason: "closed-form critical couplings exist for a unit quantum number only",
        });
    }
    if l.n2 == 1 {
        return Ok(CriticalPoint { c: -6.0, u0: Some(0.0) });
    }
    let lo = -(TWO_PI * (l.n2 - 1) as f64 + 3.0 * PI) / 4.0 - 1.0;
    let u0 = crate::system::newton::bisect(|u| critical_equation(u, l.n2), lo, 0.0, 1e-16)?;
    Ok(CriticalPoint { c: -4.0 - 2.0 / (1.0 + u0 * u0), u0: Some(u0) })
}

/// Coefficient `K` in `c - C = K (delta1 / c)^2` near the critical point.
fn fold_curvature(u0: f64) -> f64 {
    let s = u0 * u0;
    (21.0 + 24.0 * s + 8.0 * s * s) / (6.0 * (1.0 + s) * (1.0 + s))
}

/// Real-branch coordinates from the square-root model just above the critical point.
pub fn local_model_real(label: QuantumLabel, crit: CriticalPoint, c: f64) -> Result<BranchCoords> {
    let (l, _) = label.canonical();
    let eps = c - crit.c;
    if eps < 0.0 || l.n1 != 1 {
        return Err(Error::SeedFailure { c, reason: "real local model needs n1 = 1 and c >= C".into() });
    }
    let p = l.total_momentum();
    if l.n2 == 1 {
        let d = (6.0 * eps).sqrt();
        return Ok(BranchCoords::RealK { delta1: d, delta2: d, p });
    }
    let u0 = crit.u0.unwrap_or(0.0);
    let d1 = c.abs() * (eps / fold_curvature(u0)).sqrt();
    Ok(BranchCoords::RealK { delta1: d1, delta2: c * u0 - 0.5 * d1, p })
}

/// Complex-branch seed just below the critical point, from the same local model.
pub fn branch_switch(label: QuantumLabel, crit: CriticalPoint, c: f64) -> Result<BranchCoords> {
    let (l, _) = label.canonical();
    let eps = crit.c - c;
    if eps <= 0.0 {
        return Err(Error::SeedFailure { c, reason: "complex seed needs c below the critical coupling".into() });
    }
    let p = l.total_momentum();
    match (l.n1, l.n2) {
        (1, 1) => Ok(BranchCoords::ComplexK { alpha: (6.0 * eps).sqrt(), gamma: 0.0, p }),
        (1, _) => {
            let u0 = crit.u0.unwrap_or(0.0);
            let alpha = 0.5 * c.abs() * (eps / fold_curvature(u0)).sqrt();
            Ok(BranchCoords::ComplexK { alpha, gamma: -c * u0 / 3.0, p })
        }
        (0, _) => {
            let (alpha, gamma) = alpha_small_c(l, c)?;
            Ok(BranchCoords::ComplexK { alpha, gamma, p })
        }
        _ => Err(Error::SeedFailure { c, reason: "label has no complex branch".into() }),
    }
}

/// Local branch integers of the real-momentum equations at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingRecord {
    pub c: f64,
    pub branch_integers: [i64; 2],
}

/// A root followed over a grid of couplings, ordered by increasing `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub label: QuantumLabel,
    pub samples: Vec<StateSolution>,
    pub critical: Option<CriticalPoint>,
    pub windings: Vec<WindingRecord>,
}

impl Trajectory {
    pub fn at(&self, c: f64) -> Option<&StateSolution> {
        self.samples.iter().find(|s| s.c == c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart {
    Pair { deflate: bool },
    Equal { deflate: bool },
    Complex(Family),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    Anchor,
    Critical,
    RealSeeded,
    RealMarch,
    ComplexSeeded,
    ComplexMarch,
}

/// Follows one canonical label from `c = 0` in one direction.
struct Walker {
    label: QuantumLabel,
    opts: TraceOptions,
    dir: f64,
    class: CriticalClass,
    crit: Option<CriticalPoint>,
    region: Option<Region>,
    hist: Vec<(f64, Vec<f64>)>,
    winding: WindingState,
    /// Tracked-minus-phase-sum residual fixed at the start of a real march.
    winding_offset: [f64; 2],
    step: f64,
}

impl Walker {
    fn new(label: QuantumLabel, dir: f64, opts: TraceOptions) -> Result<Self> {
        let class = critical_class(label);
        let crit = match class {
            CriticalClass::Window => Some(find_critical(label)?),
            CriticalClass::AtZero => Some(CriticalPoint { c: 0.0, u0: None }),
            CriticalClass::None => None,
        };
        Ok(Walker {
            label,
            opts,
            dir,
            class,
            crit,
            region: None,
            hist: Vec::new(),
            winding: WindingState::new(),
            winding_offset: [0.0; 2],
            step: opts.step,
        })
    }

    fn region(&self, c: f64) -> Region {
        if c == 0.0 {
            return Region::Anchor;
        }
        match (self.class, self.crit) {
            (CriticalClass::Window, Some(cp)) if c < 0.0 => {
                let w = self.opts.critical_window;
                if c == cp.c {
                    Region::Critical
                } else if c > cp.c + w {
                    Region::RealMarch
                } else if c > cp.c {
                    Region::RealSeeded
                } else if c >= cp.c - w {
                    Region::ComplexSeeded
                } else {
                    Region::ComplexMarch
                }
            }
            (CriticalClass::AtZero, _) => {
                let w = self.opts.origin_window;
                match c {
                    c if c > w => Region::RealMarch,
                    c if c > 0.0 => Region::RealSeeded,
                    c if c >= -w => Region::ComplexSeeded,
                    _ => Region::ComplexMarch,
                }
            }
            _ => Region::RealMarch,
        }
    }

    fn real_chart(&self, c: f64) -> Chart {
        let deflate = self.label.n1 == 1 && c < 0.0;
        if self.label.n1 == self.label.n2 {
            Chart::Equal { deflate }
        } else {
            Chart::Pair { deflate }
        }
    }

    fn chart_for(&self, region: Region, c: f64) -> Result<Chart> {
        match region {
            Region::ComplexSeeded | Region::ComplexMarch => Ok(Chart::Complex(Family::for_label(self.label)?)),
            _ => Ok(self.real_chart(c)),
        }
    }

    fn residual(&self, chart: Chart, x: &[f64], c: f64) -> Result<Vec<f64>> {
        let l = self.label;
        match chart {
            Chart::Pair { deflate } => {
                if deflate && x[0] <= 0.0 {
                    return Err(Error::ConstraintViolation("gap left the positive axis".into()));
                }
                Ok(real_phase_residual(x[0], x[1], c, l.n1, l.n2, deflate).to_vec())
            }
            Chart::Equal { deflate } => {
                if deflate && x[0] <= 0.0 {
                    return Err(Error::ConstraintViolation("gap left the positive axis".into()));
                }
                let r = residual_equal_delta(x[0], c, l.n1);
                Ok(vec![if deflate { r / x[0] } else { r }])
            }
            Chart::Complex(f) => f.residual(x, c, l.total_momentum(), phase_integer(l)?),
        }
    }

    fn coords(&self, chart: Chart, x: &[f64], c: f64) -> Result<BranchCoords> {
        let p = self.label.total_momentum();
        Ok(match chart {
            Chart::Pair { .. } => BranchCoords::RealK { delta1: x[0], delta2: x[1], p },
            Chart::Equal { .. } => BranchCoords::RealK { delta1: x[0], delta2: x[0], p },
            Chart::Complex(f) => {
                let (alpha, gamma) = f.alpha_gamma(x, c)?;
                BranchCoords::ComplexK { alpha, gamma, p }
            }
        })
    }

    fn unknowns(&self, chart: Chart, coords: BranchCoords, c: f64) -> Result<Vec<f64>> {
        match (chart, coords) {
            (Chart::Pair { .. }, BranchCoords::RealK { delta1, delta2, .. }) => Ok(vec![delta1, delta2]),
            (Chart::Equal { .. }, BranchCoords::RealK { delta1, .. }) => Ok(vec![delta1]),
            (Chart::Complex(f), BranchCoords::ComplexK { alpha, gamma, .. }) => f.unknowns(alpha, gamma, c),
            _ => Err(Error::SeedFailure { c, reason: "seed on the wrong chart".into() }),
        }
    }

    /// Real-branch gap bounds; `n1 = 0` gaps may approach zero from above.
    fn check_bounds(&self, coords: BranchCoords, c: f64) -> Result<()> {
        let BranchCoords::RealK { delta1, delta2, .. } = coords else {
            return Ok(());
        };
        for (d, n) in [(delta1, self.label.n1), (delta2, self.label.n2)] {
            let n = n as f64;
            let ok = if c > 0.0 {
                d >= TWO_PI * n - PI - BOUND_SLACK && d <= TWO_PI * (n + 1.0) + BOUND_SLACK
            } else if c < 0.0 {
                d > TWO_PI * (n - 1.0) && d <= TWO_PI * n + PI + BOUND_SLACK
            } else {
                true
            };
            if !ok || d < 0.0 {
                return Err(Error::BoundsViolation {
                    c,
                    detail: format!("gaps ({delta1}, {delta2}) outside the allowed band for {}", self.label),
                });
            }
        }
        Ok(())
    }

    /// Complex-branch sheet conditions. The bound gap comes from the chart
    /// unknowns, since deep in the bound regime it is below the resolution of `alpha`.
    fn check_complex(&self, chart: Chart, x: &[f64], coords: BranchCoords, c: f64) -> Result<()> {
        let (Chart::Complex(f), BranchCoords::ComplexK { alpha, gamma, .. }) = (chart, coords) else {
            return Ok(());
        };
        let ok = alpha > 0.0
            && f.bound_gap(x, c).is_ok_and(|g| g != 0.0 || gamma != 0.0)
            && (self.label.n1 == self.label.n2 || gamma < 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::ConstraintViolation(format!("complex root (alpha {alpha}, gamma {gamma}) at c = {c} left its sheet")))
        }
    }

    fn solve(&self, chart: Chart, guess: &[f64], c: f64) -> Result<(Vec<f64>, BranchCoords)> {
        let report = newton_solve(|x| self.residual(chart, x, c), guess, &self.opts.newton())?;
        let coords = self.coords(chart, &report.x, c)?;
        self.check_bounds(coords, c)?;
        self.check_complex(chart, &report.x, coords, c)?;
        Ok((report.x, coords))
    }

    fn exact_at_zero(&self) -> BranchCoords {
        BranchCoords::RealK {
            delta1: TWO_PI * self.label.n1 as f64,
            delta2: TWO_PI * self.label.n2 as f64,
            p: self.label.total_momentum(),
        }
    }

    fn seed(&self, region: Region, c: f64) -> Result<BranchCoords> {
        let cp = self.crit.ok_or(Error::SeedFailure { c, reason: "no critical point".into() })?;
        match (region, self.class) {
            (Region::RealSeeded, CriticalClass::Window) => local_model_real(self.label, cp, c),
            (Region::RealSeeded, CriticalClass::AtZero) => {
                let (delta1, delta2) = delta_small_c(self.label, c)?;
                Ok(BranchCoords::RealK { delta1, delta2, p: self.label.total_momentum() })
            }
            (Region::ComplexSeeded, _) => branch_switch(self.label, cp, c),
            _ => Err(Error::SeedFailure { c, reason: "no seed model for this region".into() }),
        }
    }

    fn solve_seeded(&self, region: Region, c: f64) -> Result<(Vec<f64>, BranchCoords)> {
        let chart = self.chart_for(region, c)?;
        let seed = self.seed(region, c)?;
        let guess = self.unknowns(chart, seed, c)?;
        self.solve(chart, &guess, c).map_err(|e| Error::SeedFailure { c, reason: e.to_string() })
    }

    /// Entry point of a marching region and the coupling it sits at.
    fn entry(&mut self, region: Region) -> Result<()> {
        let w_c = self.opts.critical_window;
        let w_0 = self.opts.origin_window;
        let (c, x) = match (region, self.class) {
            (Region::RealMarch, CriticalClass::AtZero) => {
                let c = self.dir * w_0;
                (c, self.solve_seeded(Region::RealSeeded, c)?.0)
            }
            (Region::RealMarch, _) => {
                let chart = self.real_chart(0.0);
                (0.0, self.unknowns(chart, self.exact_at_zero(), 0.0)?)
            }
            (Region::ComplexMarch, CriticalClass::AtZero) => {
                let c = -w_0;
                (c, self.solve_seeded(Region::ComplexSeeded, c)?.0)
            }
            (Region::ComplexMarch, _) => {
                let c = self.crit.map(|cp| cp.c).unwrap_or(0.0) - w_c;
                (c, self.solve_seeded(Region::ComplexSeeded, c)?.0)
            }
            _ => unreachable!("entry requested for a seeded region"),
        };
        self.region = Some(region);
        self.hist = vec![(c, x)];
        self.step = self.opts.step;
        self.winding = WindingState::new();
        self.winding_offset = [0.0; 2];
        if region == Region::RealMarch {
            let coords = self.coords(self.real_chart(c), &self.hist[0].1, c)?;
            if let BranchCoords::RealK { delta1, delta2, .. } = coords {
                if let Ok((r, _)) = residual_real_peek(delta1, delta2, c, self.label, &self.winding) {
                    let f = real_phase_residual(delta1, delta2, c, self.label.n1, self.label.n2, false);
                    self.winding_offset = [r.residual[0] - f[0], r.residual[1] - f[1]];
                    self.commit_winding(delta1, delta2, c)?;
                }
            }
        }
        Ok(())
    }

    fn commit_winding(&mut self, d1: f64, d2: f64, c: f64) -> Result<()> {
        let args = crate::system::quantization_arguments(d1, d2, c)?;
        for (j, z) in args.into_iter().enumerate() {
            tracked_log(z, &mut self.winding, j)?;
        }
        Ok(())
    }

    /// Rejects a real-branch point whose tracked logarithms jumped a sheet.
    fn check_winding(&self, coords: BranchCoords, c: f64) -> Result<()> {
        let BranchCoords::RealK { delta1, delta2, .. } = coords else {
            return Ok(());
        };
        if self.winding.last_argument(0).is_none() {
            return Ok(());
        }
        let (r, _) = residual_real_peek(delta1, delta2, c, self.label, &self.winding)?;
        let f = real_phase_residual(delta1, delta2, c, self.label.n1, self.label.n2, false);
        for j in 0..2 {
            if (r.residual[j] - self.winding_offset[j] - f[j]).abs() > 1e-8 {
                return Err(Error::ConstraintViolation(format!("logarithm {j} changed sheet at c = {c}")));
            }
        }
        Ok(())
    }

    fn max_step(&self, c: f64) -> f64 {
        self.opts.step.max(0.05 * c.abs())
    }

    fn march_to(&mut self, target: f64) -> Result<(Vec<f64>, BranchCoords)> {
        let region = self.region.expect("march without entry");
        loop {
            let (c0, x0) = self.hist.last().cloned().expect("history");
            if c0 == target {
                let coords = self.coords(self.chart_for(region, c0)?, &x0, c0)?;
                return Ok((x0, coords));
            }
            let remaining = (target - c0).abs();
            let c1 = if remaining <= self.step { target } else { c0 + self.dir * self.step };
            let chart = self.chart_for(region, c1)?;
            let pred: Vec<f64> = match self.hist.as_slice() {
                [.., (ca, xa), (cb, xb)] => {
                    let s = (c1 - cb) / (cb - ca);
                    xb.iter().zip(xa).map(|(b, a)| b + s * (b - a)).collect()
                }
                _ => x0.clone(),
            };
            let attempt = self.solve(chart, &pred, c1).and_then(|(x1, coords)| {
                let jump: Vec<f64> = x1.iter().zip(&pred).map(|(a, b)| a - b).collect();
                if inf_norm(&jump) > MAX_CORRECTION {
                    return Err(Error::ConstraintViolation("corrector moved too far".into()));
                }
                self.check_winding(coords, c1)?;
                Ok((x1, coords))
            });
            match attempt {
                Ok((x1, coords)) => {
                    if let BranchCoords::RealK { delta1, delta2, .. } = coords {
                        if self.winding.last_argument(0).is_some() {
                            self.commit_winding(delta1, delta2, c1)?;
                        }
                    }
                    self.hist.push((c1, x1));
                    if self.hist.len() > 2 {
                        self.hist.remove(0);
                    }
                    self.step = (2.0 * self.step).min(self.max_step(c1));
                }
                Err(e) => {
                    self.step *= 0.5;
                    if self.step < self.opts.min_step {
                        return Err(match e {
                            Error::BoundsViolation { .. } => e,
                            other => Error::TraceFailed { last_good_c: c0, target_c: target, reason: other.to_string() },
                        });
                    }
                }
            }
        }
    }

    /// Root at `c`, which must not lie behind the last marched point.
    fn advance_to(&mut self, c: f64) -> Result<(StateSolution, Option<[i64; 2]>)> {
        let region = self.region(c);
        let coords = match region {
            Region::Anchor => self.exact_at_zero(),
            Region::Critical => {
                let cp = self.crit.expect("critical point");
                let p = self.label.total_momentum();
                let d2 = if self.label.n2 == 1 { 0.0 } else { c * cp.u0.unwrap_or(0.0) };
                BranchCoords::RealK { delta1: 0.0, delta2: d2, p }
            }
            Region::RealSeeded | Region::ComplexSeeded => self.solve_seeded(region, c)?.1,
            Region::RealMarch | Region::ComplexMarch => {
                if self.region != Some(region) || self.hist.is_empty() {
                    self.entry(region)?;
                }
                self.march_to(c)?.1
            }
        };
        let integers = match coords {
            BranchCoords::RealK { delta1, delta2, .. } if region == Region::RealMarch => {
                let w = residual_real_peek(delta1, delta2, c, self.label, &self.winding).map_or([0, 0], |r| r.1);
                Some(local_branch_integers(self.label, w))
            }
            BranchCoords::RealK { .. } if region == Region::Anchor => Some([self.label.n1, self.label.n2]),
            _ => None,
        };
        Ok((StateSolution::from_coords(self.label, c, coords), integers))
    }
}

fn relabel(state: StateSolution, requested: QuantumLabel, relation: LabelRelation) -> StateSolution {
    let mut s = match relation {
        LabelRelation::Same => state,
        LabelRelation::Partner => partner_state(&state),
    };
    s.label = requested;
    s
}

/// Root of `label` at a single coupling.
pub fn solve_state(label: QuantumLabel, c: f64, opts: &TraceOptions) -> Result<StateSolution> {
    if !c.is_finite() {
        return Err(Error::InvalidArgument(format!("coupling must be finite, got {c}")));
    }
    let (canon, relation) = label.canonical();
    let dir = if c < 0.0 { -1.0 } else { 1.0 };
    let mut walker = Walker::new(canon, dir, *opts)?;
    let (s, _) = walker.advance_to(c)?;
    Ok(relabel(s, label, relation))
}

/// Couplings `c_min, c_min + step, ..., c_max`, with values within rounding of zero snapped to it.
pub fn coupling_grid(c_min: f64, c_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(c_min.is_finite() && c_max.is_finite() && step.is_finite()) || step <= 0.0 || c_min > c_max {
        return Err(Error::InvalidArgument(format!("bad grid {c_min}..{c_max} step {step}")));
    }
    let n = ((c_max - c_min) / step - 1e-9).ceil().max(0.0) as usize;
    let mut grid: Vec<f64> = (0..=n)
        .map(|i| if i == n { c_max } else { c_min + i as f64 * step })
        .map(|c| if c.abs() < 1e-9 * step { 0.0 } else { c })
        .collect();
    grid.dedup();
    Ok(grid)
}

/// Follows `label` over `[c_min, c_max]` on a grid of spacing `step`.
pub fn trace_root(label: QuantumLabel, c_min: f64, c_max: f64, step: f64) -> Result<Trajectory> {
    let opts = TraceOptions { step, ..TraceOptions::default() };
    trace_root_with(label, c_min, c_max, &opts)
}

pub fn trace_root_with(label: QuantumLabel, c_min: f64, c_max: f64, opts: &TraceOptions) -> Result<Trajectory> {
    match trace_root_partial(label, c_min, c_max, opts) {
        (t, None) => Ok(t),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`trace_root_with`], but keeps the samples reached before a failure.
///
/// The walk runs outward from `c = 0` in both directions, so on failure the
/// trajectory holds a contiguous stretch around the origin.
pub fn trace_root_partial(
    label: QuantumLabel,
    c_min: f64,
    c_max: f64,
    opts: &TraceOptions,
) -> (Trajectory, Option<Error>) {
    let mut t = Trajectory { label, samples: Vec::new(), critical: None, windings: Vec::new() };
    let err = walk_grid(&mut t, c_min, c_max, opts).err();
    t.samples.sort_by(|a, b| a.c.total_cmp(&b.c));
    t.windings.sort_by(|a, b| a.c.total_cmp(&b.c));
    (t, err)
}

fn walk_grid(t: &mut Trajectory, c_min: f64, c_max: f64, opts: &TraceOptions) -> Result<()> {
    let grid = coupling_grid(c_min, c_max, opts.step)?;
    let (canon, relation) = t.label.canonical();
    if critical_class(canon) != CriticalClass::None {
        t.critical = Walker::new(canon, 1.0, *opts)?.crit;
    }
    let negative: Vec<f64> = grid.iter().copied().filter(|&c| c < 0.0).rev().collect();
    let positive: Vec<f64> = grid.iter().copied().filter(|&c| c >= 0.0).collect();
    for (dir, cs) in [(1.0, positive), (-1.0, negative)] {
        if cs.is_empty() {
            continue;
        }
        let mut walker = Walker::new(canon, dir, *opts)?;
        for c in cs {
            let (s, integers) = walker.advance_to(c)?;
            if let Some(branch_integers) = integers {
                t.windings.push(WindingRecord { c, branch_integers });
            }
            t.samples.push(relabel(s, t.label, relation));
        }
    }
    Ok(())
}

/// One line of a spectrum: a label and its root, or why it failed.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub label: QuantumLabel,
    pub outcome: Result<StateSolution>,
}

/// Roots of several labels at one coupling, sorted by energy; failures last.
pub fn spectrum(labels: &[QuantumLabel], c: f64, opts: &TraceOptions) -> Vec<SpectrumEntry> {
    let mut entries: Vec<SpectrumEntry> = labels
        .par_iter()
        .map(|&label| SpectrumEntry { label, outcome: solve_state(label, c, opts) })
        .collect();
    if opts.include_partners {
        let mut extra = Vec::new();
        for e in &entries {
            if let Ok(s) = &e.outcome {
                let partner = e.label.partner();
                let present = labels.iter().any(|l| l.canonical() == partner.canonical() && l.n1 == partner.n1);
                if e.label.n1 != e.label.n2 && !present {
                    extra.push(SpectrumEntry { label: partner, outcome: Ok(partner_state(s)) });
                }
            }
        }
        entries.extend(extra);
    }
    entries.sort_by(|a, b| match (&a.outcome, &b.outcome) {
        (Ok(x), Ok(y)) => x.energy.total_cmp(&y.energy).then(a.label.n1.cmp(&b.label.n1)),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        (Err(_), Err(_)) => std::cmp::Ordering::Equal,
    });
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::energy;

    fn label(n1: i64, n2: i64) -> QuantumLabel {
        QuantumLabel::new(n1, n2).unwrap()
    }

    #[test]
    fn classes() {
        assert_eq!(critical_class(label(2, 3)), CriticalClass::None);
        assert_eq!(critical_class(label(1, 5)), CriticalClass::Window);
        assert_eq!(critical_class(label(0, 2)), CriticalClass::AtZero);
        assert_eq!(critical_class(label(5, 1)), CriticalClass::Window);
    }

    #[test]
    fn critical_couplings() {
        assert_eq!(find_critical(label(1, 1)).unwrap().c, -6.0);
        let c12 = find_critical(label(1, 2)).unwrap();
        assert!((c12.c + 4.163).abs() < 5e-4);
        let mut prev = c12.c;
        for n2 in 3..10 {
            let c = find_critical(label(1, n2)).unwrap().c;
            assert!(c > prev && c < -4.0);
            prev = c;
        }
        assert!(find_critical(label(2, 2)).is_err());
    }

    #[test]
    fn grid_construction() {
        let g = coupling_grid(-0.1, 0.1, 0.05).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[2], 0.0);
        assert_eq!(*g.last().unwrap(), 0.1);
        assert_eq!(coupling_grid(1.0, 1.0, 0.1).unwrap(), vec![1.0]);
        assert!(coupling_grid(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn real_branch_both_ways() {
        let opts = TraceOptions::default();
        for &c in &[-3.0, 2.0, 40.0] {
            let s = solve_state(label(2, 3), c, &opts).unwrap();
            let BranchCoords::RealK { delta1, delta2, .. } = s.coords else { panic!() };
            let r = real_phase_residual(delta1, delta2, c, 2, 3, false);
            assert!(r[0].abs() < 1e-12 && r[1].abs() < 1e-12);
            energy(&s).unwrap();
        }
    }

    #[test]
    fn pair_branch_below_critical() {
        let opts = TraceOptions::default();
        let s = solve_state(label(1, 1), -9.0, &opts).unwrap();
        let BranchCoords::ComplexK { alpha, gamma, .. } = s.coords else { panic!("{s:?}") };
        assert_eq!(gamma, 0.0);
        assert!(alpha > 0.0 && alpha < 4.5);
        let s = solve_state(label(1, 2), -6.0, &opts).unwrap();
        assert!(!s.coords.is_real());
        let s = solve_state(label(1, 2), -4.0, &opts).unwrap();
        assert!(s.coords.is_real());
    }

    #[test]
    fn zero_family_switches_at_origin() {
        let opts = TraceOptions::default();
        for n2 in 0..4 {
            let up = solve_state(label(0, n2), 0.5, &opts).unwrap();
            assert!(up.coords.is_real());
            let down = solve_state(label(0, n2), -0.5, &opts).unwrap();
            assert!(!down.coords.is_real(), "{n2}");
        }
    }

    #[test]
    fn partner_labels_by_symmetry() {
        let opts = TraceOptions::default();
        let a = solve_state(label(0, 1), -2.0, &opts).unwrap();
        let b = solve_state(label(1, 0), -2.0, &opts).unwrap();
        assert_eq!(b.label, label(1, 0));
        assert!((a.energy - b.energy).abs() < 1e-12);
        let m = solve_state(label(-2, 0), 1.0, &opts).unwrap();
        let s = solve_state(label(0, 2), 1.0, &opts).unwrap();
        assert_eq!(m.energy, s.energy);
    }

    #[test]
    fn spectrum_at_zero() {
        let labels: Vec<_> = (0..4).map(|n| label(n, n)).rev().collect();
        let levels = spectrum(&labels, 0.0, &TraceOptions::default());
        let e: Vec<f64> = levels.iter().map(|s| s.outcome.as_ref().unwrap().energy).collect();
        for (n, v) in e.iter().enumerate() {
            let expect = 8.0 * PI * PI * (n * n) as f64;
            assert!((v - expect).abs() < 1e-10 * (1.0 + expect));
        }
    }
}
