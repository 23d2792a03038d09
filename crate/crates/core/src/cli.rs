//! Command-line front end: `trace`, `spectrum`, `critical`, `density` and
//! `verify`, writing json-lines or csv.
//!
//! Exit codes: 0 success, 2 solver failure, 3 verification failure, 64 usage
//! error. Records already computed when a failure occurs are written before a
//! trailing error record.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::continuation::{find_critical, spectrum, solve_state, trace_root_partial, TraceOptions};
use crate::error::Error;
use crate::model::{BranchCoords, QuantumLabel, StateSolution};
use crate::observables::{density_grid, norm_squared, potential_expectation, CellKind};
use crate::tolerance::{residual_tol_from_env, BASE_STEP};
use crate::verify::{run_selection, SuiteSelection};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    SolverFailure = 2,
    VerificationFailure = 3,
    Usage = 64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    JsonLines,
    Csv,
}

/// Closed coupling interval written `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRange {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for CouplingRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
        let lo: f64 = a.trim().parse().map_err(|_| format!("bad lower bound {a:?}"))?;
        let hi: f64 = b.trim().parse().map_err(|_| format!("bad upper bound {b:?}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(format!("empty or invalid range {s:?}"));
        }
        Ok(CouplingRange { lo, hi })
    }
}

/// Inclusive integer range `a..b`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for IndexRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad integer {t:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => (parse(s)?, parse(s)?),
        };
        if lo < 1 || lo > hi {
            return Err(format!("range {s:?} must be nonempty with values >= 1"));
        }
        Ok(IndexRange { lo, hi })
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "bethe3", version, about = "Eigenstates of three delta-interacting bosons on a ring")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::JsonLines, global = true)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Follow labels over a coupling range.
    Trace {
        /// Labels as n1,n2.
        #[arg(long = "label", visible_alias = "labels", num_args = 1.., required = true)]
        labels: Vec<QuantumLabel>,
        #[arg(long = "c-range", allow_hyphen_values = true)]
        c_range: CouplingRange,
        #[arg(long, default_value_t = BASE_STEP)]
        step: f64,
        /// Also report the norm and the interaction energy.
        #[arg(long)]
        observables: bool,
    },
    /// Energy-ordered levels at one coupling.
    Spectrum {
        #[arg(long = "labels", visible_alias = "label", num_args = 1.., required = true)]
        labels: Vec<QuantumLabel>,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        /// Add the degenerate partner of every unequal label.
        #[arg(long)]
        partners: bool,
    },
    /// Critical couplings of the labels (1, n2).
    Critical {
        #[arg(long)]
        n2: IndexRange,
    },
    /// Normalized density on a ternary grid.
    Density {
        #[arg(long, allow_hyphen_values = true)]
        label: QuantumLabel,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = 32)]
        resolution: usize,
    },
    /// Run invariant suites.
    Verify {
        /// all, model, system, continuation, asymptotics, wavefunction or observables.
        #[arg(long, default_value = "all")]
        suite: SuiteSelection,
    },
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        match &self.command {
            Command::Trace { step, .. } if !(step.is_finite() && *step > 0.0) => {
                Err(format!("step must be positive, got {step}"))
            }
            Command::Spectrum { c, .. } | Command::Density { c, .. } if !c.is_finite() => {
                Err(format!("coupling must be finite, got {c}"))
            }
            Command::Density { resolution, .. } if *resolution < 8 => {
                Err(format!("resolution must be at least 8, got {resolution}"))
            }
            _ => Ok(()),
        }
    }
}

/// Writes records in the selected format.
struct Sink {
    format: Format,
    out: Box<dyn Write>,
    header_written: bool,
}

fn num(v: f64) -> String {
    // shortest representation that reads back to the same double
    format!("{v:?}")
}

fn csv_line(fields: &[String]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    w.write_record(fields).expect("in-memory csv");
    w.into_inner().expect("in-memory csv")
}

impl Sink {
    fn json(&mut self, v: &Value) -> io::Result<()> {
        writeln!(self.out, "{v}")
    }

    fn csv(&mut self, header: &[&str], row: &[String]) -> io::Result<()> {
        if !self.header_written {
            let h: Vec<String> = header.iter().map(|s| s.to_string()).collect();
            self.out.write_all(&csv_line(&h))?;
            self.header_written = true;
        }
        self.out.write_all(&csv_line(row))
    }

    fn error(&mut self, code: Status, message: &str) -> io::Result<()> {
        match self.format {
            Format::JsonLines => self.json(&json!({"record": "error", "code": code as i32, "message": message})),
            Format::Csv => writeln!(self.out, "# error {}: {}", code as i32, message.replace('\n', " ")),
        }
    }
}

const STATE_HEADER: [&str; 16] = [
    "n1", "n2", "c", "branch", "delta1", "delta2", "alpha", "gamma", "p", "k1_re", "k1_im", "k2_re", "k2_im", "k3_re",
    "k3_im", "energy",
];

fn coords_json(coords: &BranchCoords) -> Value {
    match *coords {
        BranchCoords::RealK { delta1, delta2, p } => json!({"delta1": delta1, "delta2": delta2, "p": p}),
        BranchCoords::ComplexK { alpha, gamma, p } => json!({"alpha": alpha, "gamma": gamma, "p": p}),
    }
}

fn state_json(kind: &str, s: &StateSolution) -> serde_json::Map<String, Value> {
    let k: Vec<Value> = s.momenta.k.iter().map(|z| json!([z.re, z.im])).collect();
    let v = json!({
        "record": kind,
        "label": s.label.to_string(),
        "n1": s.label.n1,
        "n2": s.label.n2,
        "np": s.label.np,
        "c": s.c,
        "branch": s.coords.branch_name(),
        "coords": coords_json(&s.coords),
        "k": k,
        "E": s.energy,
    });
    match v {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

fn state_row(s: &StateSolution) -> Vec<String> {
    let blank = String::new;
    let (d1, d2, a, g) = match s.coords {
        BranchCoords::RealK { delta1, delta2, .. } => (num(delta1), num(delta2), blank(), blank()),
        BranchCoords::ComplexK { alpha, gamma, .. } => (blank(), blank(), num(alpha), num(gamma)),
    };
    let mut row = vec![s.label.n1.to_string(), s.label.n2.to_string(), num(s.c), s.coords.branch_name().into()];
    row.extend([d1, d2, a, g, num(s.coords.p())]);
    for z in s.momenta.k {
        row.extend([num(z.re), num(z.im)]);
    }
    row.push(num(s.energy));
    row
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn options() -> TraceOptions {
    TraceOptions { tol: residual_tol_from_env(), ..TraceOptions::default() }
}

fn sorted_labels(labels: &[QuantumLabel]) -> Vec<QuantumLabel> {
    let mut v = labels.to_vec();
    v.sort_by_key(|l| (l.n1, l.n2));
    v.dedup();
    v
}

fn run_trace(
    sink: &mut Sink,
    labels: &[QuantumLabel],
    range: CouplingRange,
    step: f64,
    observables: bool,
) -> io::Result<Status> {
    let opts = TraceOptions { step, ..options() };
    let labels = sorted_labels(labels);
    let traces: Vec<_> = labels.par_iter().map(|&l| trace_root_partial(l, range.lo, range.hi, &opts)).collect();
    let mut errors = Vec::new();
    for (t, err) in traces {
        for s in &t.samples {
            let extra = observables.then(|| (norm_squared(s).ok(), potential_expectation(s).ok()));
            match sink.format {
                Format::JsonLines => {
                    let mut m = state_json("state", s);
                    if let Some((n, v)) = extra {
                        m.insert("norm".into(), json!(n));
                        m.insert("V".into(), json!(v));
                    }
                    sink.json(&Value::Object(m))?;
                }
                Format::Csv => {
                    let mut header = STATE_HEADER.to_vec();
                    let mut row = state_row(s);
                    if let Some((n, v)) = extra {
                        header.extend(["norm", "V"]);
                        row.extend([opt_num(n), opt_num(v)]);
                    }
                    sink.csv(&header, &row)?;
                }
            }
        }
        if let Some(e) = err {
            errors.push(format!("{}: {e}", t.label));
        }
    }
    finish(sink, errors, Status::SolverFailure)
}

fn finish(sink: &mut Sink, errors: Vec<String>, code: Status) -> io::Result<Status> {
    if errors.is_empty() {
        return Ok(Status::Success);
    }
    for e in &errors {
        sink.error(code, e)?;
    }
    Ok(code)
}

fn run_spectrum(sink: &mut Sink, labels: &[QuantumLabel], c: f64, partners: bool) -> io::Result<Status> {
    let opts = TraceOptions { include_partners: partners, ..options() };
    let mut errors = Vec::new();
    let mut rank = 0usize;
    for entry in spectrum(&sorted_labels(labels), c, &opts) {
        match entry.outcome {
            Ok(s) => {
                match sink.format {
                    Format::JsonLines => {
                        let mut m = state_json("level", &s);
                        m.insert("rank".into(), json!(rank));
                        sink.json(&Value::Object(m))?;
                    }
                    Format::Csv => {
                        let mut header = vec!["rank"];
                        header.extend(STATE_HEADER);
                        let mut row = vec![rank.to_string()];
                        row.extend(state_row(&s));
                        sink.csv(&header, &row)?;
                    }
                }
                rank += 1;
            }
            Err(e) => errors.push(format!("{}: {e}", entry.label)),
        }
    }
    finish(sink, errors, Status::SolverFailure)
}

fn run_critical(sink: &mut Sink, n2: IndexRange) -> io::Result<Status> {
    let mut errors = Vec::new();
    for n in n2.lo..=n2.hi {
        let l = QuantumLabel::new(1, n).map_err(io::Error::other)?;
        match find_critical(l) {
            Ok(cp) => match sink.format {
                Format::JsonLines => {
                    sink.json(&json!({"record": "critical", "label": l.to_string(), "n2": n, "C": cp.c, "u0": cp.u0}))?
                }
                Format::Csv => sink.csv(&["n2", "C", "u0"], &[n.to_string(), num(cp.c), opt_num(cp.u0)])?,
            },
            Err(e) => errors.push(format!("{l}: {e}")),
        }
    }
    finish(sink, errors, Status::SolverFailure)
}

fn run_density(sink: &mut Sink, label: QuantumLabel, c: f64, resolution: usize) -> io::Result<Status> {
    let grid = solve_state(label, c, &options()).and_then(|s| Ok((density_grid(&s, resolution)?, s)));
    let (grid, s) = match grid {
        Ok(g) => g,
        Err(e) => return finish(sink, vec![format!("{label}: {e}")], Status::SolverFailure),
    };
    let kind = |k: CellKind| match k {
        CellKind::Vertex => "vertex",
        CellKind::Edge => "edge",
        CellKind::Interior => "interior",
    };
    match sink.format {
        Format::JsonLines => {
            let mut m = state_json("grid", &s);
            m.insert("resolution".into(), json!(resolution));
            sink.json(&Value::Object(m))?;
            for cell in &grid.cells {
                sink.json(&json!({
                    "record": "cell", "r12": cell.r12, "r23": cell.r23, "r31": cell.r31,
                    "density": cell.density, "kind": kind(cell.kind),
                }))?;
            }
        }
        Format::Csv => {
            for cell in &grid.cells {
                let row = [num(cell.r12), num(cell.r23), num(cell.r31), num(cell.density)];
                sink.csv(&["r12", "r23", "r31", "density"], &row)?;
            }
        }
    }
    Ok(Status::Success)
}

fn run_verify(sink: &mut Sink, suite: SuiteSelection) -> io::Result<Status> {
    let results = run_selection(suite, &options());
    for r in &results {
        match sink.format {
            Format::JsonLines => sink.json(&json!({
                "record": "property", "suite": r.suite.name(), "name": r.name, "passed": r.passed, "detail": r.detail,
            }))?,
            Format::Csv => sink.csv(
                &["suite", "property", "passed", "detail"],
                &[r.suite.name().into(), r.name.into(), r.passed.to_string(), r.detail.clone()],
            )?,
        }
    }
    let failed: Vec<String> =
        results.iter().filter(|r| !r.passed).map(|r| format!("{}/{}: {}", r.suite.name(), r.name, r.detail)).collect();
    if sink.format == Format::JsonLines {
        sink.json(&json!({"record": "summary", "passed": results.len() - failed.len(), "failed": failed.len()}))?;
    }
    finish(sink, failed, Status::VerificationFailure)
}

/// Executes a parsed configuration, writing to `--out` or standard output.
pub fn run(config: &RunConfig) -> Status {
    if let Err(msg) = config.validate() {
        eprintln!("error: {msg}");
        return Status::Usage;
    }
    let out: Box<dyn Write> = match &config.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return Status::Usage;
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut sink = Sink { format: config.format, out, header_written: false };
    let result = match &config.command {
        Command::Trace { labels, c_range, step, observables } => {
            run_trace(&mut sink, labels, *c_range, *step, *observables)
        }
        Command::Spectrum { labels, c, partners } => run_spectrum(&mut sink, labels, *c, *partners),
        Command::Critical { n2 } => run_critical(&mut sink, *n2),
        Command::Density { label, c, resolution } => run_density(&mut sink, *label, *c, *resolution),
        Command::Verify { suite } => run_verify(&mut sink, *suite),
    };
    let status = result.and_then(|s| sink.out.flush().map(|_| s));
    match status {
        Ok(s) => {
            if s != Status::Success {
                eprintln!("error: bethe3 finished with exit status {}", s as i32);
            }
            s
        }
        Err(e) => {
            eprintln!("error: {}", Error::from(e));
            Status::SolverFailure
        }
    }
}

/// Parses arguments and runs, mapping parse failures to the usage status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg) as i32,
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                Status::Usage as i32
            } else {
                0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r: CouplingRange = "-10..2".parse().unwrap();
        assert_eq!((r.lo, r.hi), (-10.0, 2.0));
        assert!("3..1".parse::<CouplingRange>().is_err());
        assert_eq!("1..6".parse::<IndexRange>().unwrap(), IndexRange { lo: 1, hi: 6 });
        assert_eq!("4".parse::<IndexRange>().unwrap(), IndexRange { lo: 4, hi: 4 });
        assert!("0..2".parse::<IndexRange>().is_err());
    }

    #[test]
    fn parses_negative_arguments() {
        let cfg = RunConfig::try_parse_from(["bethe3", "trace", "--label", "0,0", "--c-range", "-10..2", "--step", "0.05"])
            .unwrap();
        assert!(matches!(cfg.command, Command::Trace { c_range: CouplingRange { lo: -10.0, .. }, .. }));
        let cfg = RunConfig::try_parse_from(["bethe3", "density", "--label", "0,2", "--c", "-9", "--format", "csv"])
            .unwrap();
        assert_eq!(cfg.format, Format::Csv);
        let cfg =
            RunConfig::try_parse_from(["bethe3", "spectrum", "--labels", "0,0", "1,1", "2,2", "--c", "-1"]).unwrap();
        assert!(matches!(cfg.command, Command::Spectrum { ref labels, .. } if labels.len() == 3));
    }

    #[test]
    fn usage_errors_map_to_64() {
        assert_eq!(main_with_args(["bethe3", "trace", "--label", "x"]), 64);
        assert_eq!(main_with_args(["bethe3", "frobnicate"]), 64);
    }

    #[test]
    fn shortest_round_trip() {
        for v in [0.1, -4.163_0e-7, 1e300, std::f64::consts::PI] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }
}
