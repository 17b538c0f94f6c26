//! Bundle moduli on W_k and Z_k: first-neighbourhood classes of O(-2j)
//! against the closed formulas.

use twochart::geometry::{Family, TwoChartSpace};
use twochart::moduli::generic_moduli_dim;

fn main() -> twochart::Result<()> {
    println!("{:<5} {:>2} {:>6} {:>9} {:>8}", "space", "j", "first", "quotient", "formula");
    for (family, k) in [(Family::W, 1), (Family::W, 2), (Family::W, 3), (Family::Z, 1), (Family::Z, 2), (Family::Z, 3)] {
        let space = TwoChartSpace::standard(family, k);
        for j in 1..=5 {
            let r = generic_moduli_dim(&space, j)?;
            let mark = if r.no_generic_part { "  no generic part" } else if r.agrees { "" } else { "  MISMATCH" };
            println!(
                "{:<5} {:>2} {:>6} {:>9} {:>8}{mark}",
                r.space, j, r.first_neighborhood_dim, r.quotient_convention_dim, r.formula_value
            );
        }
    }
    Ok(())
}
