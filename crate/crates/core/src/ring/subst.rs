use std::collections::HashMap;

use super::{LaurentPoly, Signature};
use crate::error::{Error, Result};

/// A ring homomorphism given by the images of the base, fiber and parameter
/// variables. The base image must be a unit monomial because negative powers
/// of it are needed.
#[derive(Clone, Debug)]
pub struct Substitution {
    target: Signature,
    base: LaurentPoly,
    base_inv: LaurentPoly,
    fibers: Vec<LaurentPoly>,
    params: Vec<LaurentPoly>,
}

impl Substitution {
    pub fn new(
        base: LaurentPoly,
        fibers: Vec<LaurentPoly>,
        params: Vec<LaurentPoly>,
    ) -> Result<Self> {
        let target = base.signature().clone();
        for img in fibers.iter().chain(params.iter()) {
            if img.signature() != &target {
                return Err(Error::Signature(format!(
                    "substitution images live in different rings: {:?} vs {:?}",
                    img.signature(),
                    target
                )));
            }
        }
        let base_inv = base
            .unit_inverse()
            .ok_or_else(|| Error::NonUnitSubstitution(base.to_string()))?;
        Ok(Substitution { target, base, base_inv, fibers, params })
    }

    /// Substitution with identity parameter images (same parameter count in
    /// source and target).
    pub fn keep_params(base: LaurentPoly, fibers: Vec<LaurentPoly>) -> Result<Self> {
        let sig = base.signature().clone();
        let params = (0..sig.params).map(|k| LaurentPoly::param_var(&sig, k)).collect();
        Self::new(base, fibers, params)
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn apply(&self, poly: &LaurentPoly) -> Result<LaurentPoly> {
        let src = poly.signature();
        if src.fibers != self.fibers.len() || src.params != self.params.len() {
            return Err(Error::Signature(format!(
                "substitution expects {} fibers and {} params, polynomial has {:?}",
                self.fibers.len(),
                self.params.len(),
                src
            )));
        }
        let mut cache = PowerCache::default();
        let mut out = LaurentPoly::zero(&self.target);
        for (e, c) in poly.terms() {
            let mut term = cache.base_pow(self, e.base);
            for (k, &d) in e.fibers.iter().enumerate() {
                if d > 0 {
                    term = &term * &cache.pow(&self.fibers[k], (0, k), d);
                }
            }
            for (k, &d) in e.params.iter().enumerate() {
                if d > 0 {
                    term = &term * &cache.pow(&self.params[k], (1, k), d);
                }
            }
            out = &out + &term.scale(c);
        }
        Ok(out)
    }
}

#[derive(Default)]
struct PowerCache {
    powers: HashMap<((u8, usize), u32), LaurentPoly>,
}

impl PowerCache {
    fn base_pow(&mut self, s: &Substitution, e: i64) -> LaurentPoly {
        if e >= 0 {
            self.pow(&s.base, (2, 0), e as u32)
        } else {
            self.pow(&s.base_inv, (3, 0), (-e) as u32)
        }
    }

    fn pow(&mut self, p: &LaurentPoly, key: (u8, usize), d: u32) -> LaurentPoly {
        if let Some(v) = self.powers.get(&(key, d)) {
            return v.clone();
        }
        let v = if d == 0 {
            LaurentPoly::one(p.signature())
        } else {
            &self.pow(p, key, d - 1) * p
        };
        self.powers.insert((key, d), v.clone());
        v
    }
}
