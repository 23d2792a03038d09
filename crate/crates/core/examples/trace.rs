//! Follow one state from repulsive to attractive coupling and watch the
//! momenta turn complex.
//!
//! cargo run --example trace -- 1 2

use bethe3::prelude::*;

fn main() -> bethe3::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n1, n2) = match args[..] {
        [a, b, ..] => (a, b),
        _ => (1, 2),
    };
    let label = QuantumLabel::new(n1, n2)?;
    let traj = trace_root(label, -10.0, 10.0, 0.5)?;
    if let Some(crit) = traj.critical {
        println!("{label}: momenta collide at c = {:.6}", crit.c);
    }
    println!("{:>7} {:>9} {:>14}  momenta", "c", "branch", "E");
    for s in &traj.samples {
        let k = s.momenta.canonicalized();
        println!(
            "{:>7.2} {:>9} {:>14.6}  {:.4} {:.4} {:.4}",
            s.c,
            s.coords.branch_name(),
            s.energy,
            k.k[0],
            k.k[1],
            k.k[2]
        );
    }
    Ok(())
}
