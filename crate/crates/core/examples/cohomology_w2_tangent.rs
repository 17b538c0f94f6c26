//! H^1 of the tangent bundle of W_1 and W_2, certified per grading slice,
//! and the same computation in box mode.

use twochart::bundle::tangent_bundle;
use twochart::cech::{h1, h1_with_mode, CertMode, DegreeBox};
use twochart::geometry::{Family, TwoChartSpace};
use twochart::ring::{rat, LaurentPoly};

fn main() -> twochart::Result<()> {
    let bx = DegreeBox::with_fiber_max(8);
    for k in [1, 2] {
        let space = TwoChartSpace::standard(Family::W, k);
        let t = tangent_bundle(&space)?;
        let res = h1(&t, &bx)?;
        println!("H^1({}, T): {} classes, {:?}, {} slices", space.name(), res.dim(), res.certification, res.slices);
        for g in &res.generators {
            let m = LaurentPoly::monomial(space.u_signature(), g.exponent.clone(), rat(1));
            println!("  component {}: {m}", g.component + 1);
        }
    }

    let w2 = TwoChartSpace::standard(Family::W, 2);
    let small = DegreeBox::new(-6, -1, 3)?;
    let boxed = h1_with_mode(&tangent_bundle(&w2)?, &small, CertMode::BoxOnly)?;
    println!("box mode on the small window: {} classes, {:?}", boxed.dim(), boxed.certification);
    Ok(())
}
