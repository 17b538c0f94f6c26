use std::collections::BTreeMap;

use crate::bundle::TransitionBundle;
use crate::error::{Error, Result};
use crate::ring::{LaurentPoly, Rational};

use super::engine::{Engine, Key};
use super::CechClass;

/// `target = alpha + Minv * (beta o forward)` with `alpha` holomorphic on U
/// and `beta` holomorphic on V.
#[derive(Clone, Debug, PartialEq)]
pub struct CoboundaryWitness {
    pub alpha: Vec<LaurentPoly>,
    pub beta: Vec<LaurentPoly>,
}

impl CoboundaryWitness {
    /// Recomputes the decomposition by substitution.
    pub fn verify(&self, bundle: &TransitionBundle, target: &CechClass) -> Result<bool> {
        let space = bundle.space();
        let r = bundle.rank();
        if self.alpha.len() != r || self.beta.len() != r {
            return Ok(false);
        }
        let holo = |p: &LaurentPoly| p.min_base_exponent().is_none_or(|m| m >= 0);
        if !self.alpha.iter().all(holo) || !self.beta.iter().all(holo) {
            return Ok(false);
        }
        if self.beta.iter().any(|b| b.signature() != space.v_signature())
            || self.alpha.iter().any(|a| a.signature() != space.u_signature())
        {
            return Ok(false);
        }
        Ok(image(bundle, &self.alpha, &self.beta)? == target.components())
    }
}

fn image(bundle: &TransitionBundle, alpha: &[LaurentPoly], beta: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
    let pulled = beta.iter().map(|b| bundle.space().pull_to_u(b)).collect::<Result<Vec<_>>>()?;
    let minv = bundle.inverse_transition();
    let mut out = alpha.to_vec();
    for (i, o) in out.iter_mut().enumerate() {
        for (c, p) in pulled.iter().enumerate() {
            if !p.is_zero() && !minv[i][c].is_zero() {
                *o = o.checked_add(&minv[i][c].checked_mul(p)?)?;
            }
        }
    }
    Ok(out)
}

/// Builds and re-checks the witness for `class - rep` from the V-monomial
/// coefficients found by elimination.
pub(crate) fn assemble(
    _engine: &Engine,
    bundle: &TransitionBundle,
    class: &CechClass,
    rep: &BTreeMap<Key, Rational>,
    beta: &BTreeMap<Key, Rational>,
) -> Result<CoboundaryWitness> {
    let space = bundle.space();
    let (usig, vsig) = (space.u_signature(), space.v_signature());
    let r = bundle.rank();
    let mut bterms = vec![Vec::new(); r];
    for ((c, e), x) in beta {
        bterms[*c].push((e.clone(), x.clone()));
    }
    let beta: Vec<LaurentPoly> = bterms.into_iter().map(|t| LaurentPoly::from_terms(vsig, t)).collect();
    let rep_class = CechClass::from_keys(bundle, rep);
    let zero = vec![LaurentPoly::zero(usig); r];
    let img = image(bundle, &zero, &beta)?;
    let alpha: Vec<LaurentPoly> = class
        .components()
        .iter()
        .zip(rep_class.components())
        .zip(&img)
        .map(|((s, g), b)| s - g - b.clone())
        .collect();
    let target = CechClass {
        components: class.components().iter().zip(rep_class.components()).map(|(s, g)| s - g).collect(),
    };
    let w = CoboundaryWitness { alpha, beta };
    if !w.verify(bundle, &target)? {
        return Err(Error::Input(format!("coboundary witness for {class} failed re-verification")));
    }
    Ok(w)
}
