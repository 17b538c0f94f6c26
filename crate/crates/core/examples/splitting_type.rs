//! Splitting types on the zero section via Birkhoff factorization.

use twochart::bundle::tangent_bundle;
use twochart::config::parse_bundle;
use twochart::geometry::{Family, TwoChartSpace};
use twochart::moduli::birkhoff;

fn show(m: &twochart::bundle::PolyMatrix) -> String {
    let rows: Vec<String> = m.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")).collect();
    format!("[{}]", rows.join("; "))
}

fn main() -> twochart::Result<()> {
    for k in 1..=3 {
        let w = TwoChartSpace::standard(Family::W, k);
        let f = birkhoff(&tangent_bundle(&w)?.restrict_to_line())?;
        println!("T{} restricted: {:?}", w.name(), f.splitting);
    }

    let zm1 = TwoChartSpace::standard(Family::Z, -1);
    let e = parse_bundle(&zm1, "ext(-1, 1, z^-2*exp(u))", 6)?;
    let m = e.restrict_to_line();
    let f = birkhoff(&m)?;
    println!("\nextension restricted: {}", show(&m));
    println!("  = {} * {} * {}", show(&f.left), show(&f.diagonal), show(&f.right));
    println!("  splitting {:?}", f.splitting);
    f.check(&m)?;
    Ok(())
}
