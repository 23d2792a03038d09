//! Norm and interaction energy along a coupling sweep, with the
//! Hellmann-Feynman check c dE/dc = <V>.

use bethe3::prelude::*;

fn main() -> bethe3::Result<()> {
    let opts = TraceOptions::default();
    for (n1, n2) in [(0, 0), (1, 1), (1, 3), (2, 2)] {
        let label = QuantumLabel::new(n1, n2)?;
        println!("{label}");
        for c in [-9.0, -4.0, -1.0, 0.0, 1.0, 4.0] {
            let s = solve_state(label, c, &opts)?;
            let v = potential_expectation(&s)?;
            let h = 1e-5;
            let de = (solve_state(label, c + h, &opts)?.energy - solve_state(label, c - h, &opts)?.energy) / (2.0 * h);
            println!(
                "  c = {c:>5}  norm {:<12.6e} <V> {v:>12.6}  c dE/dc {:>12.6}",
                norm_squared(&s)?,
                c * de
            );
        }
    }
    Ok(())
}
