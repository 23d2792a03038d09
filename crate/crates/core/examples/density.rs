//! Probability density over the ternary diagram of pair separations, drawn
//! as a coarse character plot.
//!
//! cargo run --example density -- 0 2 -9

use bethe3::observables::CellKind;
use bethe3::prelude::*;

const SHADES: &[u8] = b" .:-=+*#%@";

fn main() -> bethe3::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n1, n2, c) = match args[..] {
        [a, b, c, ..] => (a as i64, b as i64, c),
        _ => (0, 2, -9.0),
    };
    let state = solve_state(QuantumLabel::new(n1, n2)?, c, &TraceOptions::default())?;
    let grid = density_grid(&state, 24)?;
    let peak = grid.max_cell().density;

    // rows run over r12 upwards, columns over r23
    for row in (0..24).rev() {
        let r12 = (row as f64 + 0.5) / 24.0;
        let line: String = (0..48)
            .map(|col| {
                let r23 = (col as f64 + 0.5) / 48.0;
                if r12 + r23 > 1.0 {
                    return ' ';
                }
                let d = grid.nearest(r12, r23).density / peak;
                SHADES[((d * (SHADES.len() - 1) as f64).round() as usize).min(SHADES.len() - 1)] as char
            })
            .collect();
        println!("{line}");
    }
    let max = grid.max_cell();
    println!("peak {:.4} at ({:.3}, {:.3}, {:.3}), {:?} cell", max.density, max.r12, max.r23, max.r31, max.kind);
    for kind in [CellKind::Vertex, CellKind::Edge, CellKind::Interior] {
        println!("mean over {kind:?} cells: {:.4}", grid.mean_density(kind));
    }
    Ok(())
}
