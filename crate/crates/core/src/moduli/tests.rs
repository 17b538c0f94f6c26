use super::*;
use crate::bundle::{extension_bundle, pullback_bundle, PolyMatrix};
use crate::geometry::Family;
use crate::ring::{exp_trunc, Frame, Signature};

fn line_sig() -> Signature {
    Signature::new(0, 0, Frame::U)
}

fn zp(e: i64) -> LaurentPoly {
    LaurentPoly::base_power(&line_sig(), e)
}

fn exp_class(space: &TwoChartSpace, fiber: usize, cutoff: u32) -> LaurentPoly {
    let sig = space.u_signature();
    exp_trunc(&LaurentPoly::fiber_var(sig, fiber), cutoff).unwrap().shift_base(-2)
}

#[test]
fn diagonal_splitting() {
    let m: PolyMatrix = vec![vec![zp(-3), LaurentPoly::zero(&line_sig())], vec![LaurentPoly::zero(&line_sig()), zp(1)]];
    assert_eq!(splitting_type(&m).unwrap(), vec![-1, 3]);
}

#[test]
fn restricted_extension_splits_as_minus_one_one() {
    let m: PolyMatrix = vec![vec![zp(1), zp(-1)], vec![LaurentPoly::zero(&line_sig()), zp(-1)]];
    let f = birkhoff(&m).unwrap();
    assert_eq!(f.splitting, vec![-1, 1]);
    f.check(&m).unwrap();
}

#[test]
fn nontrivial_extension_on_line() {
    // class z^-1 in H^1(O(-2)) glues O(-1) and O(1) into O + O
    let m: PolyMatrix = vec![vec![zp(1), LaurentPoly::one(&line_sig())], vec![LaurentPoly::zero(&line_sig()), zp(-1)]];
    assert_eq!(splitting_type(&m).unwrap(), vec![0, 0]);
}

#[test]
fn non_unit_determinant() {
    let one = LaurentPoly::one(&line_sig());
    let m: PolyMatrix = vec![vec![one.clone(), zp(2)], vec![one.clone(), &one + &zp(1)]];
    assert!(matches!(splitting_type(&m), Err(Error::NonUnitDeterminant(_))));
}

#[test]
fn verdicts() {
    let zm1 = TwoChartSpace::standard(Family::Z, -1);
    let v = extension_verdict(&zm1, -1, 1, &exp_class(&zm1, 0, 10), 10).unwrap();
    assert_eq!(v.verdict, Verdict::NonPolynomialUpTo { cutoff: 10 });
    let z1 = TwoChartSpace::standard(Family::Z, 1);
    let v = extension_verdict(&z1, -1, 1, &exp_class(&z1, 0, 10), 10).unwrap();
    assert_eq!(v.verdict, Verdict::SplitZero);
    let zero = LaurentPoly::zero(z1.u_signature());
    assert_eq!(extension_verdict(&z1, 3, -2, &zero, 4).unwrap().verdict, Verdict::SplitZero);
    let e = extension_bundle(&zm1, -1, 1, &exp_class(&zm1, 0, 10)).unwrap();
    let w3 = TwoChartSpace::standard(Family::W, 3);
    let pb = pullback_bundle(&e, &w3, &[1]).unwrap();
    assert_eq!(extension_verdict_for(&pb, 10).unwrap().verdict, Verdict::NonPolynomialUpTo { cutoff: 10 });
}

#[test]
fn polynomial_class() {
    let zm1 = TwoChartSpace::standard(Family::Z, -1);
    let sig = zm1.u_signature();
    let p = LaurentPoly::fiber_var(sig, 0).pow(2).shift_base(-2);
    let v = extension_verdict(&zm1, -1, 1, &p, 5).unwrap();
    assert_eq!(v.verdict, Verdict::PolynomialClass { max_fiber_degree: 2 });
}

#[test]
fn first_neighborhood_counts() {
    let w2 = TwoChartSpace::standard(Family::W, 2);
    assert_eq!(first_neighborhood_dim(&w2, 2).unwrap(), 7);
    let z3 = TwoChartSpace::standard(Family::Z, 3);
    assert_eq!(first_neighborhood_dim(&z3, 2).unwrap(), 3);
    let w1 = TwoChartSpace::standard(Family::W, 1);
    assert_eq!(first_neighborhood_dim(&w1, 1).unwrap(), 1);
    let z2 = TwoChartSpace::standard(Family::Z, 2);
    assert_eq!(first_neighborhood_dim(&z2, 3).unwrap(), 8);
}

#[test]
fn moduli_reports() {
    let w2 = TwoChartSpace::standard(Family::W, 2);
    let r = generic_moduli_dim(&w2, 2).unwrap();
    assert_eq!((r.quotient_convention_dim, r.formula_value, r.agrees), (3, 3, true));
    let z2 = TwoChartSpace::standard(Family::Z, 2);
    let r = generic_moduli_dim(&z2, 3).unwrap();
    assert_eq!((r.quotient_convention_dim, r.formula_value), (2, 2));
    let w3 = TwoChartSpace::standard(Family::W, 3);
    let r = generic_moduli_dim(&w3, 1).unwrap();
    assert_eq!(r.formula_value, -1);
    assert!(r.no_generic_part);
}
