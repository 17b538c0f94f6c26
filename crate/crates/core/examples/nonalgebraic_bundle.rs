//! The extension of O(1) by O(-1) with class z^-2 e^u: not algebraic on
//! Z_{-1}, split on Z_1, and still not algebraic after pulling back to W_3.

use twochart::bundle::{extension_bundle, pullback_bundle};
use twochart::cech::{is_coboundary, DegreeBox};
use twochart::geometry::{Family, TwoChartSpace};
use twochart::moduli::{extension_verdict, extension_verdict_for};
use twochart::ring::{exp_trunc, LaurentPoly};

const CUTOFF: u32 = 10;

fn class(space: &TwoChartSpace) -> twochart::Result<LaurentPoly> {
    Ok(exp_trunc(&LaurentPoly::fiber_var(space.u_signature(), 0), CUTOFF)?.shift_base(-2))
}

fn main() -> twochart::Result<()> {
    let zm1 = TwoChartSpace::standard(Family::Z, -1);
    let v = extension_verdict(&zm1, -1, 1, &class(&zm1)?, CUTOFF)?;
    println!("Z(-1): {} (nonzero in fiber degrees {:?})", v.verdict, v.nonzero_degrees);

    let z1 = TwoChartSpace::standard(Family::Z, 1);
    let v = extension_verdict(&z1, -1, 1, &class(&z1)?, CUTOFF)?;
    println!("Z1: {}", v.verdict);
    let m = is_coboundary(&v.line_bundle, &v.class, &DegreeBox::with_fiber_max(CUTOFF))?;
    let w = m.witness.expect("split extension has a witness");
    println!("  beta = {}", w.beta[0]);
    println!("  re-validated: {}", w.verify(&v.line_bundle, &v.class)?);

    let w3 = TwoChartSpace::standard(Family::W, 3);
    let e = extension_bundle(&zm1, -1, 1, &class(&zm1)?)?;
    let pb = pullback_bundle(&e, &w3, &[1])?;
    println!("pullback to W3: {}", extension_verdict_for(&pb, CUTOFF)?.verdict);
    Ok(())
}
