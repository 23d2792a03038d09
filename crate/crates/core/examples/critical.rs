//! Critical couplings of the (1, n2) family, where the two smallest momenta
//! meet and a bound pair appears.

use bethe3::prelude::*;

fn main() -> bethe3::Result<()> {
    for n2 in 1..=12 {
        let label = QuantumLabel::new(1, n2)?;
        let crit = find_critical(label)?;
        println!("(1,{n2:>2})  C = {:.10}  {:?}", crit.c, critical_class(label));
    }
    // labels with a zero quantum number bind as soon as c turns negative
    let zero = QuantumLabel::new(0, 3)?;
    println!("(0, 3)  {:?}", critical_class(zero));
    Ok(())
}
