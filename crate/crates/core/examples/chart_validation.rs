//! Two-chart spaces from names and from definition files, and what
//! happens when the gluing is wrong.

use twochart::config::{parse_space_file, resolve_space};

const DEFORMED_W2: &str = "
name = W2t
params = t1
forward = (z^-1, z^2*u1 + z*t1*u2, u2)
inverse = (xi^-1, xi^2*v1 - xi*t1*v2, v2)
";

fn main() -> twochart::Result<()> {
    for name in ["Z1", "Z(-1)", "W2", "W3"] {
        let s = resolve_space(name)?;
        println!("{:<6} forward ({})", s.name(), s.forward_strings().join(", "));
    }

    let s = parse_space_file(DEFORMED_W2)?;
    println!("{} with parameters {:?}: forward ({})", s.name(), s.param_names(), s.forward_strings().join(", "));
    println!("grading lattice rank {}", twochart::geometry::grading_lattice(&s).len());

    let broken = DEFORMED_W2.replace("- xi*t1*v2", "+ xi*t1*v2");
    match parse_space_file(&broken) {
        Err(e) => println!("sign error rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
