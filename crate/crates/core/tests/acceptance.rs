//! One line per acceptance criterion. The run fails when the set of failing
//! criteria differs from `KNOWN_FAILURES`.

mod common;

use std::collections::BTreeSet;

use common::Oracle;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use twochart::bundle::{identity_matrix, line_bundle, matrix_mul, PolyMatrix};
use twochart::cech::DegreeBox;
use twochart::claims::find;
use twochart::geometry::{Family, TwoChartSpace};
use twochart::linalg::{nullspace, rank, QMatrix};
use twochart::moduli::{birkhoff, first_neighborhood_dim};
use twochart::report::{Record, Status};
use twochart::ring::{ratio, Exponent, Frame, LaurentPoly, Signature};

/// Criterion 6 asks for classes that the engine proves to be coboundaries
/// (explicit witnesses, re-validated by substitution).
const KNOWN_FAILURES: &[usize] = &[6];

fn claim(id: &str) -> Record {
    find(id).unwrap_or_else(|| panic!("no claim {id}")).run()
}

fn status_is(r: &Record, ok: &[Status]) -> bool {
    r.status.is_some_and(|s| ok.contains(&s))
}

fn summary(r: &Record) -> String {
    format!("{} [{}]", r.notes.first().cloned().unwrap_or_default(), r.status.map(Status::label).unwrap_or("-"))
}

fn c1() -> (bool, String) {
    let r = claim("W1-rigidity");
    (status_is(&r, &[Status::Verified]), summary(&r))
}

fn c2() -> (bool, String) {
    let r = claim("W2-tangent-basis");
    (status_is(&r, &[Status::Verified]), summary(&r))
}

fn c3() -> (bool, String) {
    let w = claim("W3-tangent-window");
    let s = claim("W3-sigma-cocycles");
    let ok = status_is(&w, &[Status::Verified, Status::DiscrepancyFlagged]) && status_is(&s, &[Status::Verified]);
    (ok, format!("{}; {}", summary(&w), summary(&s)))
}

fn c4() -> (bool, String) {
    let r = claim("Zminus1-classes");
    let z = TwoChartSpace::standard(Family::Z, -1);
    let bx = DegreeBox::new(-12, -1, 8).unwrap();
    let oracle = Oracle::new(&line_bundle(&z, -2), &bx, 16, 10).h1_count();
    let ok = status_is(&r, &[Status::Verified, Status::DiscrepancyFlagged]) && oracle == r.generators.len();
    (ok, format!("{}; dense oracle {oracle}", summary(&r)))
}

fn c5() -> (bool, String) {
    let rs = [claim("Nonalgebraic-eu"), claim("Z1-extension-splits"), claim("W3-pullback-nonalgebraic")];
    let ok = rs.iter().all(|r| status_is(r, &[Status::Verified]));
    (ok, rs.iter().map(summary).collect::<Vec<_>>().join("; "))
}

fn c6() -> (bool, String) {
    let r = claim("W2-End-infinite");
    let revalidated = r.witnesses.iter().all(|w| w["revalidated"] == true);
    let detail = format!("{}; {} witnesses, all re-validated: {revalidated}", summary(&r), r.witnesses.len());
    (status_is(&r, &[Status::Verified]), detail)
}

fn c7() -> (bool, String) {
    let mut mismatches = Vec::new();
    for k in 1..=3 {
        for (family, js) in [(Family::W, 2..=6u32), (Family::Z, 1..=6u32)] {
            let space = TwoChartSpace::standard(family, k);
            for j in js {
                let n = -2 * j as i64;
                let bx = DegreeBox::new(n - 10, -1, 1).unwrap();
                let oracle = Oracle::new(&line_bundle(&space, n), &bx, (12 - n) as u32, 1)
                    .restrict_window(|(_, e)| e.fiber_degree() <= 1)
                    .h1_count();
                if first_neighborhood_dim(&space, j).unwrap() != oracle {
                    mismatches.push(format!("{} j={j}", space.name()));
                }
            }
        }
    }
    let r = claim("Moduli-dimensions");
    let ok = mismatches.is_empty() && status_is(&r, &[Status::Verified]);
    (ok, format!("{}; first-neighbourhood counts match the dense oracle: {}", summary(&r), mismatches.is_empty()))
}

fn c8() -> (bool, String) {
    let r = claim("NonAffine-W2-deformed");
    (status_is(&r, &[Status::Verified]), summary(&r))
}

fn c9() -> (bool, String) {
    let r = claim("Affine-Zk-deformed");
    (status_is(&r, &[Status::Verified]), summary(&r))
}

fn c10() -> (bool, String) {
    let r = claim("Families-glue");
    (status_is(&r, &[Status::Verified]), summary(&r))
}

fn c11() -> (bool, String) {
    let r = claim("Hirzebruch-identities");
    (status_is(&r, &[Status::Verified]), summary(&r))
}

fn small_poly(sig: Signature) -> impl Strategy<Value = LaurentPoly> {
    let f = sig.fibers;
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..=2u32, f), -5i64..=5, 1i64..=3), 0..=5).prop_map(move |ts| {
        LaurentPoly::from_terms(&sig, ts.into_iter().map(|(b, fs, n, d)| (Exponent::new(b, fs, vec![]), ratio(n, d))))
    })
}

fn c12() -> (bool, String) {
    let r = claim("CY-determinant");
    let runner = || TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    let sig = Signature::new(2, 0, Frame::U);
    let axioms = runner().run(&(small_poly(sig.clone()), small_poly(sig.clone()), small_poly(sig)), |(a, b, c)| {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        Ok(())
    });
    let rn = runner().run(&prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..6), |rows| {
        let m = QMatrix::from_i64(&rows).unwrap();
        prop_assert_eq!(rank(&m) + nullspace(&m).len(), m.cols());
        Ok(())
    });
    let line = Signature::new(0, 0, Frame::U);
    let fact = runner().run(&(prop::collection::vec(-4i64..=4, 2), -3i64..=3, 0i64..=3, -3i64..=3, 0i64..=3), |(a, c1, d1, c2, d2)| {
        let mut lower = identity_matrix(&line, 2);
        lower[0][1] = LaurentPoly::base_power(&line, -d1).scale(&ratio(c1, 1));
        let mut upper = identity_matrix(&line, 2);
        upper[1][0] = LaurentPoly::base_power(&line, d2).scale(&ratio(c2, 1));
        let diag: PolyMatrix = vec![
            vec![LaurentPoly::base_power(&line, -a[0]), LaurentPoly::zero(&line)],
            vec![LaurentPoly::zero(&line), LaurentPoly::base_power(&line, -a[1])],
        ];
        let m = matrix_mul(&matrix_mul(&lower, &diag).unwrap(), &upper).unwrap();
        let f = birkhoff(&m).unwrap();
        prop_assert!(f.check(&m).is_ok());
        let mut sorted = a.clone();
        sorted.sort();
        prop_assert_eq!(f.splitting, sorted);
        Ok(())
    });
    let props = [("ring axioms", axioms.is_ok()), ("rank-nullity", rn.is_ok()), ("factorization", fact.is_ok())];
    let ok = status_is(&r, &[Status::Verified]) && props.iter().all(|p| p.1);
    let detail = props.iter().map(|(n, ok)| format!("{n} {}", if *ok { "1000/1000" } else { "failed" })).collect::<Vec<_>>().join(", ");
    (ok, format!("{}; {detail}", summary(&r)))
}

type Criterion = fn() -> (bool, String);

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("W1-rigidity", c1),
        ("W2-tangent-basis", c2),
        ("W3-tangent-window", c3),
        ("Zminus1-classes", c4),
        ("Nonalgebraic-eu", c5),
        ("W2-End-infinite", c6),
        ("Moduli-dimensions", c7),
        ("NonAffine-W2-deformed", c8),
        ("Affine-Zk-deformed", c9),
        ("Families-glue", c10),
        ("Hirzebruch-identities", c11),
        ("CY-determinant", c12),
    ];
    let mut failing = BTreeSet::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = std::time::Instant::now();
        let (ok, detail) = run();
        println!("criterion {:>2} {:<22} {}  {detail} ({:.1}s)", i + 1, name, if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
        if !ok {
            failing.insert(i + 1);
        }
    }
    let known: BTreeSet<usize> = KNOWN_FAILURES.iter().copied().collect();
    println!("\n{} of 12 criteria pass; failing {:?}, documented {:?}", 12 - failing.len(), failing, known);
    if failing != known {
        eprintln!("failing criteria differ from the documented set");
        std::process::exit(1);
    }
}
