use super::*;
use crate::bundle::{line_bundle, tangent_bundle};
use crate::geometry::{Family, TwoChartSpace};
use crate::ring::LaurentPoly;

fn ex(base: i64, fibers: &[u32]) -> Exponent {
    Exponent::new(base, fibers.to_vec(), vec![])
}

#[test]
fn w1_is_rigid() {
    let w1 = TwoChartSpace::standard(Family::W, 1);
    let res = h1(&tangent_bundle(&w1).unwrap(), &DegreeBox::with_fiber_max(6)).unwrap();
    assert!(res.generators.is_empty(), "{:?}", res.generators);
    assert_eq!(res.certification, Certification::Exact);
}

#[test]
fn w2_tangent_classes() {
    let w2 = TwoChartSpace::standard(Family::W, 2);
    let res = h1(&tangent_bundle(&w2).unwrap(), &DegreeBox::with_fiber_max(8)).unwrap();
    let expect: Vec<(usize, Exponent)> = (0..=8).map(|j| (1, ex(-1, &[0, j]))).collect();
    let got: Vec<(usize, Exponent)> = res.generators.iter().map(|g| (g.component, g.exponent.clone())).collect();
    assert_eq!(got, expect);
}

#[test]
fn z1_line_bundle() {
    let z1 = TwoChartSpace::standard(Family::Z, 1);
    let res = h1(&line_bundle(&z1, -2), &DegreeBox::with_fiber_max(8)).unwrap();
    let got: Vec<String> = res.generators.iter().map(|g| format!("{:?}", g.exponent)).collect();
    assert_eq!(res.dim(), 1, "{got:?}");
    assert!(res.contains(0, &ex(-1, &[0])));
}

fn u(sig: &crate::ring::Signature, k: usize) -> LaurentPoly {
    LaurentPoly::fiber_var(sig, k)
}

#[test]
fn zminus1_window() {
    let zm1 = TwoChartSpace::standard(Family::Z, -1);
    let res = h1(&line_bundle(&zm1, -2), &DegreeBox::new(-12, -1, 6).unwrap()).unwrap();
    for g in &res.generators {
        let i = g.exponent.fibers[0] as i64;
        assert!(-1 - i <= g.exponent.base && g.exponent.base <= -1, "{g:?}");
    }
    let count: usize = (0..=6).map(|i| i + 1).sum();
    assert_eq!(res.dim(), count);
    assert_eq!(res.pattern, DimPattern::Arithmetic { first: 1, step: 1 });
}

#[test]
fn w3_pullback_classes_survive() {
    let w3 = TwoChartSpace::standard(Family::W, 3);
    let b = line_bundle(&w3, -2);
    let bx = DegreeBox::with_fiber_max(6);
    for m in 1..=6 {
        let class = CechClass::monomial(&b, 0, ex(-2, &[0, m])).unwrap();
        let red = reduce_class(&b, &class, &bx).unwrap();
        assert_eq!(red.representative, class);
        assert!(!is_coboundary(&b, &class, &bx).unwrap().is_coboundary);
    }
}

#[test]
fn z1_exponential_is_a_coboundary() {
    let z1 = TwoChartSpace::standard(Family::Z, 1);
    let b = line_bundle(&z1, -2);
    let sig = z1.u_signature();
    let p = crate::ring::exp_trunc(&u(sig, 0), 8).unwrap().shift_base(-2);
    let class = CechClass::single(&b, 0, p).unwrap();
    let m = is_coboundary(&b, &class, &DegreeBox::with_fiber_max(8)).unwrap();
    assert!(m.is_coboundary);
    assert_eq!(m.certification, Certification::WitnessFound);
    let w = m.witness.unwrap();
    assert!(w.verify(&b, &class).unwrap());
    assert_eq!(w.beta[0].to_string(), "1 + xi*v + 1/2*xi^2*v^2 + 1/6*xi^3*v^3 + 1/24*xi^4*v^4 + 1/120*xi^5*v^5 + 1/720*xi^6*v^6 + 1/5040*xi^7*v^7 + 1/40320*xi^8*v^8");
}

fn deformed_z2() -> TwoChartSpace {
    crate::geometry::symbolic_zk_family(2).unwrap().specialize(&[crate::ring::rat(1)]).unwrap()
}

fn deformed_w2() -> TwoChartSpace {
    let map = crate::geometry::tests::deformed_w2_map();
    TwoChartSpace::new("W2(t)", map, vec![]).unwrap()
}

#[test]
fn deformed_z2_witness() {
    let z2 = deformed_z2();
    let b = line_bundle(&z2, -2);
    let class = CechClass::monomial(&b, 0, ex(-1, &[0])).unwrap();
    let m = is_coboundary(&b, &class, &DegreeBox::with_fiber_max(4)).unwrap();
    assert!(m.is_coboundary);
    let w = m.witness.unwrap();
    assert_eq!(w.alpha[0].to_string(), "-u");
    assert_eq!(w.beta[0].to_string(), "v");
}

#[test]
fn deformed_w2_is_not_affine_both_modes() {
    let w2 = deformed_w2();
    let b = line_bundle(&w2, -4);
    let class = CechClass::monomial(&b, 0, ex(-1, &[0, 0])).unwrap();
    let bx = DegreeBox::with_fiber_max(4);
    let m = is_coboundary(&b, &class, &bx).unwrap();
    assert!(!m.is_coboundary);
    assert_eq!(m.certification, Certification::Exact);
    let m = is_coboundary_with_mode(&b, &class, &bx, CertMode::BoxOnly).unwrap();
    assert!(!m.is_coboundary);
    assert!(matches!(m.certification, Certification::StableInBox { rounds: 2, .. }));
}

#[test]
fn box_and_graded_agree_on_w2_tangent() {
    let w2 = TwoChartSpace::standard(Family::W, 2);
    let t = tangent_bundle(&w2).unwrap();
    let bx = DegreeBox::new(-6, -1, 3).unwrap();
    let a = h1(&t, &bx).unwrap();
    let b = h1_with_mode(&t, &bx, CertMode::BoxOnly).unwrap();
    assert_eq!(a.generators, b.generators);
}

#[test]
fn reduce_exp_class_on_zminus1() {
    let zm1 = TwoChartSpace::standard(Family::Z, -1);
    let b = line_bundle(&zm1, -2);
    let sig = zm1.u_signature();
    let p = crate::ring::exp_trunc(&u(sig, 0), 6).unwrap().shift_base(-2);
    let class = CechClass::single(&b, 0, p).unwrap();
    let bx = DegreeBox::new(-10, -1, 6).unwrap();
    let red = reduce_class(&b, &class, &bx).unwrap();
    let rep = red.representative.components()[0].to_string();
    assert!(rep.starts_with("z^-2*u + 1/2*z^-2*u^2"), "{rep}");
    let again = reduce_class(&b, &red.representative, &bx).unwrap();
    assert_eq!(again.representative, red.representative);
}

#[test]
fn generators_are_not_coboundaries() {
    let w2 = TwoChartSpace::standard(Family::W, 2);
    let b = line_bundle(&w2, -4);
    let bx = DegreeBox::new(-5, -1, 2).unwrap();
    let res = h1(&b, &bx).unwrap();
    assert!(!res.generators.is_empty());
    for c in generator_classes(&b, &res).unwrap() {
        assert!(!is_coboundary(&b, &c, &bx).unwrap().is_coboundary);
    }
}

#[test]
fn coboundary_generator_images() {
    let zm1 = TwoChartSpace::standard(Family::Z, -1);
    let b = line_bundle(&zm1, -2);
    let gens = coboundary_generators(&b, &DegreeBox::new(-4, 0, 1).unwrap()).unwrap();
    let s: Vec<String> = gens.iter().map(ToString::to_string).collect();
    assert!(s.contains(&"(z^-3*u)".to_string()), "{s:?}");
    let z1 = TwoChartSpace::standard(Family::Z, 1);
    let b = line_bundle(&z1, -2);
    let gens = coboundary_generators(&b, &DegreeBox::new(-4, 0, 1).unwrap()).unwrap();
    let s: Vec<String> = gens.iter().map(ToString::to_string).collect();
    assert!(s.contains(&"(z^-1*u)".to_string()), "{s:?}");
    assert!(s.contains(&"(1)".to_string()), "{s:?}");
}
