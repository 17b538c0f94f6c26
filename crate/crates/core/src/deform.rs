//! Deformation families glued from tangent cocycles, and the affineness probe.

use crate::bundle::{line_bundle, tangent_bundle};
use crate::cech::{h1_with_mode, reduce_many, CechClass, CertMode, Certification, CoboundaryWitness, DegreeBox, H1Result};
use crate::error::{Error, Result};
use crate::geometry::{ChartMap, TwoChartSpace};
use crate::ring::{Exponent, LaurentPoly, Rational, Signature};

#[derive(Clone, Debug)]
pub enum ParamAssignment {
    Symbolic,
    Numeric(Vec<Rational>),
}

#[derive(Clone, Debug)]
pub struct DeformationFamily {
    pub base: TwoChartSpace,
    pub cocycles: Vec<CechClass>,
    /// The family with symbolic parameters `t1, t2, ..`; parameter `s`
    /// multiplies cocycle `s`.
    pub symbolic: TwoChartSpace,
    /// `symbolic`, or its specialisation when numeric values were given.
    pub perturbed: TwoChartSpace,
}

/// Perturbs a monomial model `v_i = c_i z^d_i x_i` to
/// `v_i = c_i z^d_i (x_i + sum_s t_s sigma_s[i])` and inverts it by
/// back-substitution over the fiber coordinates.
pub fn build_family(space: &TwoChartSpace, cocycles: &[CechClass], params: &ParamAssignment) -> Result<DeformationFamily> {
    let degrees = space
        .monomial_model_degrees()
        .ok_or_else(|| Error::Input(format!("{} is not a monomial model", space.name())))?;
    let f = space.fibers();
    let np = cocycles.len();
    let tangent = tangent_bundle(space)?;
    for (s, c) in cocycles.iter().enumerate() {
        if c.components().len() != f + 1 || c.components()[0].signature() != space.u_signature() {
            return Err(Error::Input(format!("cocycle {} is not a tangent cochain of {}", s + 1, space.name())));
        }
        CechClass::new(&tangent, c.components().to_vec())?;
        if !c.components()[0].is_zero() {
            return Err(Error::NonInvertiblePerturbation(format!(
                "cocycle {} moves the base coordinate",
                s + 1
            )));
        }
    }
    let u = Signature::new(f, np, crate::ring::Frame::U);
    let v = Signature::new(f, np, crate::ring::Frame::V);
    let coeff = |i: usize| -> Rational {
        space.transition().forward[i].terms().next().map(|(_, c)| c.clone()).expect("monomial")
    };
    // perturbation of fiber i as a U-frame function
    let mut pert: Vec<LaurentPoly> = vec![LaurentPoly::zero(&u); f + 1];
    for (s, c) in cocycles.iter().enumerate() {
        let t = LaurentPoly::param_var(&u, s);
        for (i, p) in pert.iter_mut().enumerate().skip(1) {
            let lifted = c.components()[i].with_param_count(np)?;
            *p = &*p + &(&t * &lifted);
        }
    }
    let mut forward = vec![LaurentPoly::base_power(&u, -1)];
    for i in 1..=f {
        let x = LaurentPoly::fiber_var(&u, i - 1);
        forward.push((&x + &pert[i]).shift_base(degrees[i]).scale(&coeff(i)));
    }
    // back-substitution: solve the fibers whose perturbation only involves
    // fibers already solved
    let mut inverse: Vec<Option<LaurentPoly>> = vec![None; f + 1];
    inverse[0] = Some(LaurentPoly::base_power(&v, -1));
    while inverse.iter().any(Option::is_none) {
        let solved: Vec<bool> = inverse.iter().map(Option::is_some).collect();
        let next = (1..=f).find(|&i| {
            !solved[i] && pert[i].terms().all(|(e, _)| e.fibers.iter().enumerate().all(|(k, &d)| d == 0 || solved[k + 1]))
        });
        let Some(i) = next else {
            return Err(Error::NonInvertiblePerturbation(format!(
                "perturbations of {} are not triangular",
                space.name()
            )));
        };
        let known = partial_inverse(&v, &inverse)?;
        let xv = LaurentPoly::fiber_var(&v, i - 1).shift_base(degrees[i]).scale(&coeff(i).recip());
        // x_i = c^-1 xi^(d_i) v_i - pert_i(z = xi^-1, known x); z^d = xi^-d
        inverse[i] = Some(&xv - &known.apply(&pert[i])?);
    }
    let inverse: Vec<LaurentPoly> = inverse.into_iter().map(|p| p.expect("solved")).collect();
    let names = (1..=np).map(|s| format!("t{s}")).collect();
    let symbolic = TwoChartSpace::new(format!("{}(t)", space.name()), ChartMap { forward, inverse }, names)?;
    let perturbed = match params {
        ParamAssignment::Symbolic => symbolic.clone(),
        ParamAssignment::Numeric(vals) => symbolic.specialize(vals)?.renamed(format!(
            "{}({})",
            space.name(),
            vals.iter().enumerate().map(|(s, x)| format!("t{}={x}", s + 1)).collect::<Vec<_>>().join(",")
        )),
    };
    Ok(DeformationFamily { base: space.clone(), cocycles: cocycles.to_vec(), symbolic, perturbed })
}

fn partial_inverse(v: &Signature, known: &[Option<LaurentPoly>]) -> Result<crate::ring::Substitution> {
    let fibers = known[1..].iter().map(|k| k.clone().unwrap_or_else(|| LaurentPoly::zero(v))).collect();
    crate::ring::Substitution::keep_params(LaurentPoly::base_power(v, -1), fibers)
}

impl DeformationFamily {
    /// The family at `t = 0`.
    pub fn at_zero(&self) -> Result<TwoChartSpace> {
        let zeros = vec![Rational::default(); self.cocycles.len()];
        self.symbolic.specialize(&zeros)
    }

    /// The `t`-linear part of the forward map equals the monomial model
    /// applied to the cocycles.
    pub fn first_order_check(&self) -> Result<bool> {
        let base = self.base.transition();
        let sig = self.symbolic.u_signature();
        for (i, img) in self.symbolic.transition().forward.iter().enumerate().skip(1) {
            let (e0, c0) = base.forward[i].terms().next().expect("monomial");
            for (s, cocycle) in self.cocycles.iter().enumerate() {
                let linear = img.filter(|e| e.param_degree() == 1 && e.params[s] == 1);
                let mut unit = vec![0u32; self.cocycles.len()];
                unit[s] = 1;
                let expect = cocycle.components()[i]
                    .with_param_count(self.cocycles.len())?
                    .shift_base(e0.base)
                    .scale(c0);
                let t = LaurentPoly::monomial(sig, Exponent::new(0, vec![0; sig.fibers], unit), Rational::from_integer(1.into()));
                if linear != &t * &expect {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub struct DegreeProbe {
    pub degree: i64,
    pub h1: H1Result,
    /// Window monomials shown to be coboundaries, with their witnesses.
    pub witnesses: Vec<(CechClass, CoboundaryWitness)>,
    /// Window monomials that are not generators but reduce to a nonzero
    /// combination of them.
    pub nontrivial: Vec<(CechClass, CechClass)>,
}

#[derive(Clone, Debug)]
pub enum AffinenessVerdict {
    NotAffine { degree: i64, class: CechClass, certification: Certification },
    NoObstructionFound,
}

#[derive(Clone, Debug)]
pub struct AffinenessReport {
    pub space: String,
    pub probes: Vec<DegreeProbe>,
    pub verdict: AffinenessVerdict,
}

/// Computes `H^1(O(n))` in the box for each degree and a coboundary witness
/// for every window monomial that dies.
pub fn affineness_probe(space: &TwoChartSpace, degrees: &[i64], bx: &DegreeBox, mode: CertMode) -> Result<AffinenessReport> {
    let mut probes = Vec::new();
    let mut verdict = AffinenessVerdict::NoObstructionFound;
    for &n in degrees {
        let b = line_bundle(space, n);
        let res = h1_with_mode(&b, bx, mode)?;
        let classes = bx
            .window_monomials(1, space.fibers())
            .into_iter()
            .filter(|(c, e)| !res.contains(*c, e))
            .map(|(c, e)| CechClass::monomial(&b, c, e))
            .collect::<Result<Vec<_>>>()?;
        let reductions = reduce_many(&b, &classes, bx, mode)?;
        let mut witnesses = Vec::new();
        let mut nontrivial = Vec::new();
        for (c, r) in classes.into_iter().zip(reductions) {
            let r = r?;
            if r.representative.is_zero() {
                witnesses.push((c, r.witness));
            } else {
                nontrivial.push((c, r.representative));
            }
        }
        if let (AffinenessVerdict::NoObstructionFound, Some(g)) = (&verdict, res.generators.first()) {
            verdict = AffinenessVerdict::NotAffine {
                degree: n,
                class: CechClass::monomial(&b, g.component, g.exponent.clone())?,
                certification: res.certification.clone(),
            };
        }
        probes.push(DegreeProbe { degree: n, h1: res, witnesses, nontrivial });
    }
    Ok(AffinenessReport { space: space.name().to_string(), probes, verdict })
}
