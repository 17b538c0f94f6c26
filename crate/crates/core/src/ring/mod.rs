//! Exact multivariate Laurent polynomials over the rationals.
//!
//! A ring is fixed by a [`Signature`]: one base variable (`z` in the U frame,
//! `xi` in the V frame) that may carry any integer exponent, `fibers` fiber
//! variables and `params` deformation parameters, both with nonnegative
//! exponents. Polynomials from different frames never mix.

mod display;
mod series;
mod subst;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use series::exp_trunc;
pub use subst::Substitution;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    U,
    V,
}

impl Frame {
    pub fn other(self) -> Frame {
        match self {
            Frame::U => Frame::V,
            Frame::V => Frame::U,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub fibers: usize,
    pub params: usize,
    pub frame: Frame,
}

impl Signature {
    pub fn new(fibers: usize, params: usize, frame: Frame) -> Self {
        Signature { fibers, params, frame }
    }

    pub fn with_frame(&self, frame: Frame) -> Self {
        Signature { frame, ..self.clone() }
    }

    pub fn with_params(&self, params: usize) -> Self {
        Signature { params, ..self.clone() }
    }

    pub fn base_name(&self) -> &'static str {
        match self.frame {
            Frame::U => "z",
            Frame::V => "xi",
        }
    }

    pub fn fiber_name(&self, k: usize) -> String {
        let stem = match self.frame {
            Frame::U => "u",
            Frame::V => "v",
        };
        if self.fibers == 1 {
            stem.to_string()
        } else {
            format!("{stem}{}", k + 1)
        }
    }

    pub fn param_name(&self, k: usize) -> String {
        format!("t{}", k + 1)
    }

    fn check(&self, other: &Signature) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Signature(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Exponents of one monomial. The derived order is lexicographic on
/// (base, fibers, params), which is the canonical monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    pub base: i64,
    pub fibers: Vec<u32>,
    pub params: Vec<u32>,
}

impl Exponent {
    pub fn zero(sig: &Signature) -> Self {
        Exponent { base: 0, fibers: vec![0; sig.fibers], params: vec![0; sig.params] }
    }

    pub fn new(base: i64, fibers: Vec<u32>, params: Vec<u32>) -> Self {
        Exponent { base, fibers, params }
    }

    pub fn fiber_degree(&self) -> u32 {
        self.fibers.iter().sum()
    }

    pub fn param_degree(&self) -> u32 {
        self.params.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.base == 0 && self.fiber_degree() == 0 && self.param_degree() == 0
    }

    fn add(&self, other: &Exponent) -> Exponent {
        Exponent {
            base: self.base + other.base,
            fibers: self.fibers.iter().zip(&other.fibers).map(|(a, b)| a + b).collect(),
            params: self.params.iter().zip(&other.params).map(|(a, b)| a + b).collect(),
        }
    }

    fn fits(&self, sig: &Signature) -> bool {
        self.fibers.len() == sig.fibers && self.params.len() == sig.params
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    sig: Signature,
    terms: BTreeMap<Exponent, Rational>,
}

impl LaurentPoly {
    pub fn zero(sig: &Signature) -> Self {
        LaurentPoly { sig: sig.clone(), terms: BTreeMap::new() }
    }

    pub fn one(sig: &Signature) -> Self {
        Self::constant(sig, Rational::one())
    }

    pub fn constant(sig: &Signature, c: Rational) -> Self {
        Self::monomial(sig, Exponent::zero(sig), c)
    }

    pub fn monomial(sig: &Signature, exp: Exponent, c: Rational) -> Self {
        assert!(exp.fits(sig), "exponent shape does not match signature");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { sig: sig.clone(), terms }
    }

    /// `base^e` (so `z^e` or `xi^e`).
    pub fn base_power(sig: &Signature, e: i64) -> Self {
        let mut exp = Exponent::zero(sig);
        exp.base = e;
        Self::monomial(sig, exp, Rational::one())
    }

    pub fn fiber_var(sig: &Signature, k: usize) -> Self {
        assert!(k < sig.fibers);
        let mut exp = Exponent::zero(sig);
        exp.fibers[k] = 1;
        Self::monomial(sig, exp, Rational::one())
    }

    pub fn param_var(sig: &Signature, k: usize) -> Self {
        assert!(k < sig.params);
        let mut exp = Exponent::zero(sig);
        exp.params[k] = 1;
        Self::monomial(sig, exp, Rational::one())
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(sig: &Signature, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut p = Self::zero(sig);
        for (e, c) in terms {
            assert!(e.fits(sig), "exponent shape does not match signature");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn frame(&self) -> Frame {
        self.sig.frame
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exponent, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Exponent::zero(&self.sig))
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.sig.check(&other.sig)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.sig.check(&other.sig)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.sig.check(&other.sig)?;
        let mut out = Self::zero(&self.sig);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(&self.sig);
        }
        LaurentPoly {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by `base^shift`.
    pub fn shift_base(&self, shift: i64) -> LaurentPoly {
        LaurentPoly {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.base += shift;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = Self::one(&self.sig);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Returns `(c, e)` when the polynomial is exactly `c * base^e` with `c != 0`.
    pub fn as_unit_monomial(&self) -> Option<(Rational, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if e.fiber_degree() == 0 && e.param_degree() == 0 {
            Some((c.clone(), e.base))
        } else {
            None
        }
    }

    /// Inverse of a unit monomial.
    pub fn unit_inverse(&self) -> Option<LaurentPoly> {
        let (c, e) = self.as_unit_monomial()?;
        Some(Self::base_power(&self.sig, -e).scale(&c.recip()))
    }

    pub fn max_fiber_degree(&self) -> u32 {
        self.terms.keys().map(Exponent::fiber_degree).max().unwrap_or(0)
    }

    pub fn min_base_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.base).min()
    }

    pub fn max_base_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.base).max()
    }

    pub fn max_abs_base_exponent(&self) -> i64 {
        self.terms.keys().map(|e| e.base.abs()).max().unwrap_or(0)
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter<F: Fn(&Exponent) -> bool>(&self, keep: F) -> LaurentPoly {
        LaurentPoly {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate_fiber_degree(&self, max: u32) -> LaurentPoly {
        self.filter(|e| e.fiber_degree() <= max)
    }

    /// Part of total fiber degree exactly `d`.
    pub fn fiber_degree_part(&self, d: u32) -> LaurentPoly {
        self.filter(|e| e.fiber_degree() == d)
    }

    /// Sets every fiber variable to zero and drops them from the signature.
    pub fn restrict_to_line(&self) -> LaurentPoly {
        let sig = Signature::new(0, self.sig.params, self.sig.frame);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.fiber_degree() == 0)
            .map(|(e, c)| (Exponent::new(e.base, vec![], e.params.clone()), c.clone()));
        Self::from_terms(&sig, terms)
    }

    /// Moves the polynomial into another ring with the same variables but a
    /// different parameter count, padding or dropping parameter slots. Dropping
    /// is only allowed when the dropped parameters do not occur.
    pub fn with_param_count(&self, params: usize) -> Result<LaurentPoly> {
        let sig = self.sig.with_params(params);
        let mut out = Self::zero(&sig);
        for (e, c) in &self.terms {
            if e.params.iter().skip(params).any(|&p| p > 0) {
                return Err(Error::Signature(format!(
                    "cannot drop parameters from {self}"
                )));
            }
            let mut ps = e.params.clone();
            ps.resize(params, 0);
            out.add_term(Exponent::new(e.base, e.fibers.clone(), ps), c.clone());
        }
        Ok(out)
    }

    /// Reinterprets the variables of this polynomial in the other frame. Only
    /// used where the identification is explicit (e.g. building coordinate
    /// names), never for arithmetic.
    pub fn relabel_frame(&self, frame: Frame) -> LaurentPoly {
        LaurentPoly { sig: self.sig.with_frame(frame), terms: self.terms.clone() }
    }

    /// Partial derivative with respect to variable `var`: 0 is the base
    /// variable, `1..=fibers` the fiber variables.
    pub fn derivative(&self, var: usize) -> LaurentPoly {
        let mut out = Self::zero(&self.sig);
        for (e, c) in &self.terms {
            if var == 0 {
                if e.base != 0 {
                    let mut e2 = e.clone();
                    e2.base -= 1;
                    out.add_term(e2, c * rat(e.base));
                }
            } else {
                let k = var - 1;
                let d = e.fibers[k];
                if d > 0 {
                    let mut e2 = e.clone();
                    e2.fibers[k] -= 1;
                    out.add_term(e2, c * rat(d as i64));
                }
            }
        }
        out
    }

    /// Total number of variables (base + fibers).
    pub fn var_count(&self) -> usize {
        1 + self.sig.fibers
    }

    pub fn has_params(&self) -> bool {
        self.terms.keys().any(|e| e.param_degree() > 0)
    }

    /// Largest absolute coefficient numerator/denominator size, used only for
    /// diagnostics.
    pub fn height(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{:?}]({})", self.sig.frame, self)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            /// Panics on mismatched signatures; use the `checked_*` form when
            /// the operands come from different sources.
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("laurent arithmetic on mismatched signatures")
            }
        }
        impl std::ops::$trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}

impl std::ops::Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Factorial as an exact rational.
pub(crate) fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u1() -> Signature {
        Signature::new(1, 0, Frame::U)
    }

    #[test]
    fn times_z_clears_negative_power() {
        let s = u1();
        let z = LaurentPoly::base_power(&s, 1);
        let a = LaurentPoly::base_power(&s, -1) + LaurentPoly::fiber_var(&s, 0);
        let got = &a * &z;
        let want = LaurentPoly::one(&s) + &z * &LaurentPoly::fiber_var(&s, 0);
        assert_eq!(got, want);
        assert_eq!(got.to_string(), "1 + z*u");
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let s = u1();
        let u = LaurentPoly::fiber_var(&s, 0);
        let d = &u - &u;
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn mismatched_frames_are_rejected() {
        let a = LaurentPoly::one(&u1());
        let b = LaurentPoly::one(&u1().with_frame(Frame::V));
        assert!(matches!(a.checked_add(&b), Err(Error::Signature(_))));
        assert!(matches!(a.checked_mul(&b), Err(Error::Signature(_))));
    }

    #[test]
    fn derivative_of_laurent_monomial() {
        let s = Signature::new(2, 0, Frame::U);
        let p = LaurentPoly::base_power(&s, 2) * LaurentPoly::fiber_var(&s, 0);
        assert_eq!(p.derivative(0).to_string(), "2*z*u1");
        assert_eq!(p.derivative(1).to_string(), "z^2");
        assert!(p.derivative(2).is_zero());
        let q = LaurentPoly::base_power(&s, -1);
        assert_eq!(q.derivative(0).to_string(), "-z^-2");
    }

    #[test]
    fn unit_monomial_detection() {
        let s = u1();
        let p = LaurentPoly::base_power(&s, -3).scale(&rat(2));
        assert_eq!(p.as_unit_monomial(), Some((rat(2), -3)));
        assert_eq!(p.unit_inverse().unwrap().to_string(), "1/2*z^3");
        assert!(LaurentPoly::fiber_var(&s, 0).as_unit_monomial().is_none());
        assert!(LaurentPoly::zero(&s).as_unit_monomial().is_none());
    }

    #[test]
    fn restriction_drops_fiber_terms() {
        let s = Signature::new(2, 0, Frame::U);
        let p = LaurentPoly::base_power(&s, 2) * LaurentPoly::fiber_var(&s, 0)
            + LaurentPoly::base_power(&s, -2);
        let r = p.restrict_to_line();
        assert_eq!(r.signature().fibers, 0);
        assert_eq!(r.to_string(), "z^-2");
    }
}
