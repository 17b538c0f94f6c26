//! Deformed W_2 carries a nonzero class in H^1(O(-4)); deformed Z_2 shows no
//! obstruction, and every window class comes with a coboundary witness.

use twochart::bundle::tangent_bundle;
use twochart::cech::{CechClass, CertMode, DegreeBox};
use twochart::deform::{affineness_probe, build_family, AffinenessVerdict, ParamAssignment};
use twochart::geometry::{Family, TwoChartSpace};
use twochart::ring::{rat, Exponent};

fn deformed(family: Family, k: i64, fibers: Vec<u32>) -> twochart::Result<TwoChartSpace> {
    let base = TwoChartSpace::standard(family, k);
    let t = tangent_bundle(&base)?;
    let sigma = CechClass::monomial(&t, 1, Exponent::new(-1, fibers, vec![]))?;
    Ok(build_family(&base, &[sigma], &ParamAssignment::Numeric(vec![rat(1)]))?.perturbed)
}

fn main() -> twochart::Result<()> {
    let w2 = deformed(Family::W, 2, vec![0, 1])?;
    let rep = affineness_probe(&w2, &[-4], &DegreeBox::with_fiber_max(3), CertMode::BoxOnly)?;
    match rep.verdict {
        AffinenessVerdict::NotAffine { class, certification, .. } => {
            println!("{}: not affine, {class} survives ({certification:?})", w2.name())
        }
        AffinenessVerdict::NoObstructionFound => println!("{}: no obstruction", w2.name()),
    }

    let z2 = deformed(Family::Z, 2, vec![0])?;
    let rep = affineness_probe(&z2, &[-1, -2, -3], &DegreeBox::new(-4, -1, 3)?, CertMode::Auto)?;
    println!("{}: {:?}", z2.name(), rep.verdict);
    for p in &rep.probes {
        let (c, w) = p.witnesses.iter().find(|(c, _)| c.to_string() == "(z^-1)").expect("z^-1 is probed");
        println!("  O({}): {} witnesses, e.g. {c} = {} + Minv*({})", p.degree, p.witnesses.len(), w.alpha[0], w.beta[0]);
    }
    Ok(())
}
