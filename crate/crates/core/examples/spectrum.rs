//! Low-lying spectrum at a few couplings, degenerate partners included.

use bethe3::prelude::*;

fn main() -> bethe3::Result<()> {
    let mut labels = Vec::new();
    for n1 in 0..4 {
        for n2 in n1..4 {
            labels.push(QuantumLabel::new(n1, n2)?);
        }
    }
    let opts = TraceOptions { include_partners: true, ..TraceOptions::default() };
    for c in [-8.0, -2.0, 0.0, 5.0] {
        println!("c = {c}");
        for entry in spectrum(&labels, c, &opts) {
            match entry.outcome {
                Ok(s) => println!("  {:<8} {:>8} E = {:.8}", entry.label.to_string(), s.coords.branch_name(), s.energy),
                Err(e) => println!("  {:<8} failed: {e}", entry.label.to_string()),
            }
        }
    }
    Ok(())
}
