//! Exact Laurent polynomials: arithmetic, substitution and truncated
//! exponentials.

use twochart::expr::parse_poly;
use twochart::geometry::{Family, TwoChartSpace};
use twochart::ring::{exp_trunc, Frame, LaurentPoly, Signature};

fn main() -> twochart::Result<()> {
    let u = Signature::new(1, 0, Frame::U);

    let a = parse_poly("z^-1 + u", &u, 0)?;
    let z = LaurentPoly::base_power(&u, 1);
    println!("(z^-1 + u) * z = {}", &a * &z);

    let e = exp_trunc(&LaurentPoly::fiber_var(&u, 0), 2)?;
    println!("z^-2 * exp(u) to degree 2 = {}", e.shift_base(-2));

    // the same class seen from the other chart
    for k in [-1, 1] {
        let space = TwoChartSpace::standard(Family::Z, k);
        let p = parse_poly("z^-2*u", space.u_signature(), 0)?;
        println!("on {}: z^-2*u = {}", space.name(), space.pull_to_v(&p)?);
    }

    // frames do not mix
    let v = Signature::new(1, 0, Frame::V);
    let xi = LaurentPoly::base_power(&v, 1);
    println!("z + xi: {}", z.checked_add(&xi).unwrap_err());
    Ok(())
}
