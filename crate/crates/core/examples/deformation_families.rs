//! Families glued from tangent cocycles, symbolic in the parameters.

use twochart::bundle::tangent_bundle;
use twochart::cech::CechClass;
use twochart::deform::{build_family, ParamAssignment};
use twochart::geometry::{Family, TwoChartSpace};
use twochart::ring::{rat, Exponent};

fn main() -> twochart::Result<()> {
    let w2 = TwoChartSpace::standard(Family::W, 2);
    let t = tangent_bundle(&w2)?;
    let cocycles = (0..=3)
        .map(|j| CechClass::monomial(&t, 1, Exponent::new(-1, vec![0, j], vec![])))
        .collect::<twochart::Result<Vec<_>>>()?;
    let fam = build_family(&w2, &cocycles, &ParamAssignment::Symbolic)?;
    println!("W2 family\n  forward ({})\n  inverse ({})", fam.symbolic.forward_strings().join(", "), fam.symbolic.inverse_strings().join(", "));
    println!("  first order {}, base at t = 0 {}", fam.first_order_check()?, fam.at_zero()?.forward_strings() == w2.forward_strings());

    let w3 = TwoChartSpace::standard(Family::W, 3);
    let t3 = tangent_bundle(&w3)?;
    let s = |l| CechClass::monomial(&t3, 1, Exponent::new(l, vec![0, 0], vec![]));
    let fam = build_family(&w3, &[s(-2)?, s(-1)?], &ParamAssignment::Symbolic)?;
    println!("W3 family: ({})", fam.symbolic.forward_strings().join(", "));

    for k in 2..=4 {
        let zk = TwoChartSpace::standard(Family::Z, k);
        let tk = tangent_bundle(&zk)?;
        let cs = (1..k)
            .map(|s| CechClass::monomial(&tk, 1, Exponent::new(s - k, vec![0], vec![])))
            .collect::<twochart::Result<Vec<_>>>()?;
        let ones = vec![rat(1); cs.len()];
        let fam = build_family(&zk, &cs, &ParamAssignment::Numeric(ones))?;
        println!("Z{k} at t = 1: ({})", fam.perturbed.forward_strings().join(", "));
    }
    Ok(())
}
