//! Run the built-in property suites and print one line per property.

use bethe3::prelude::*;
use bethe3::verify::{run_selection, SuiteSelection};

fn main() {
    let sel: SuiteSelection = std::env::args().nth(1).unwrap_or_else(|| "all".into()).parse().expect("suite name");
    let results = run_selection(sel, &TraceOptions::default());
    for r in &results {
        println!("{:<5} {:<13} {:<22} {}", if r.passed { "ok" } else { "FAIL" }, r.suite.name(), r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} properties, {failed} failed", results.len());
    std::process::exit(i32::from(failed > 0));
}
