//! Solved roots next to their limiting closed forms.

use bethe3::asymptotics::{alpha_dimer, alpha_trimer, delta_large_c, small_c_slope, Side};
use bethe3::prelude::*;

fn main() -> bethe3::Result<()> {
    let opts = TraceOptions::default();

    println!("large |c|, label (2,2): gap vs first-order form");
    for c in [-200.0, -50.0, 50.0, 200.0] {
        let s = solve_state(QuantumLabel::new(2, 2)?, c, &opts)?;
        let side = if c > 0.0 { Side::Positive } else { Side::Negative };
        println!("  c = {c:>6}  {:.8}  {:.8}", s.coords.deltas().0.re, delta_large_c(2, c, side)?);
    }

    println!("small c: slope of the first gap");
    for (n1, n2) in [(1, 1), (1, 2), (2, 3)] {
        let c = 1e-4;
        let s = solve_state(QuantumLabel::new(n1, n2)?, c, &opts)?;
        let fitted = (s.coords.deltas().0.re - 2.0 * std::f64::consts::PI * n1 as f64) / c;
        println!("  ({n1},{n2})  {fitted:.6}  {:.6}", small_c_slope(n1, n2));
    }

    println!("bound states: alpha vs closed form");
    for (n1, n2, c) in [(1, 1, -30.0), (1, 3, -30.0), (0, 2, -30.0), (0, 0, -25.0)] {
        let label = QuantumLabel::new(n1, n2)?;
        let s = solve_state(label, c, &opts)?;
        let BranchCoords::ComplexK { alpha, .. } = s.coords else { continue };
        let form = if n1 == 0 && n2 <= 1 { alpha_trimer(label, c)?.0 } else { alpha_dimer(label, c)? };
        println!("  {label} c = {c}  {alpha:.12}  {form:.12}");
    }
    Ok(())
}
