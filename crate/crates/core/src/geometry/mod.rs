//! Two-chart spaces: total spaces of (sums of) line bundles over the
//! projective line and their deformations, glued along `C* x C^f`.
//!
//! The U chart has coordinates `(z, u1, .., uf)`, the V chart
//! `(xi, v1, .., vf)`. A [`ChartMap`] stores both directions of the gluing;
//! the base coordinate always transforms as `xi = z^-1`.

mod grading;
mod hirzebruch;

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Frame, LaurentPoly, Rational, Signature, Substitution};

pub use grading::{grading_lattice, relation_vectors, GradingVector};
pub(crate) use grading::{v_monomial_in_u_weights, variable_part};
pub use hirzebruch::{
    hirzebruch_images, hirzebruch_verify, hirzebruch_verify_images, symbolic_zk_family, ChartImage,
    HirzebruchCheck, HirzebruchImages,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `Z_k = Tot(O(-k))`, one fiber coordinate.
    Z,
    /// `W_k = Tot(O(-k) + O(k-2))`, two fiber coordinates.
    W,
}

/// Both directions of the gluing. `forward[i]` is the i-th V coordinate as a
/// U-frame function; `inverse[i]` is the i-th U coordinate as a V-frame
/// function.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartMap {
    pub forward: Vec<LaurentPoly>,
    pub inverse: Vec<LaurentPoly>,
}

impl ChartMap {
    pub fn u_signature(&self) -> &Signature {
        self.forward[0].signature()
    }

    pub fn v_signature(&self) -> &Signature {
        self.inverse[0].signature()
    }

    pub fn fibers(&self) -> usize {
        self.forward.len() - 1
    }

    /// Pulls V-frame functions back to U-frame functions.
    pub fn forward_substitution(&self) -> Result<Substitution> {
        Substitution::keep_params(self.forward[0].clone(), self.forward[1..].to_vec())
    }

    /// Pulls U-frame functions back to V-frame functions.
    pub fn inverse_substitution(&self) -> Result<Substitution> {
        Substitution::keep_params(self.inverse[0].clone(), self.inverse[1..].to_vec())
    }
}

fn coordinates(sig: &Signature) -> Vec<LaurentPoly> {
    std::iter::once(LaurentPoly::base_power(sig, 1))
        .chain((0..sig.fibers).map(|k| LaurentPoly::fiber_var(sig, k)))
        .collect()
}

fn coordinate_name(sig: &Signature, i: usize) -> String {
    if i == 0 {
        sig.base_name().to_string()
    } else {
        sig.fiber_name(i - 1)
    }
}

/// Checks that both composites of the gluing are the identity, exactly.
pub fn validate_transition(map: &ChartMap) -> Result<()> {
    let f = map.fibers();
    if map.inverse.len() != f + 1 {
        return Err(Error::DimensionMismatch(format!(
            "forward has {} coordinates, inverse {}",
            f + 1,
            map.inverse.len()
        )));
    }
    let u = map.u_signature().clone();
    let v = map.v_signature().clone();
    if u.frame != Frame::U || v.frame != Frame::V || u.fibers != f || v.fibers != f {
        return Err(Error::Signature(format!("chart map rings {u:?} / {v:?}")));
    }
    if u.params != v.params {
        return Err(Error::Signature("charts disagree on parameter count".into()));
    }
    if map.forward.iter().any(|p| p.signature() != &u)
        || map.inverse.iter().any(|p| p.signature() != &v)
    {
        return Err(Error::Signature("chart coordinates live in mixed rings".into()));
    }
    if map.forward[0] != LaurentPoly::base_power(&u, -1) {
        return Err(Error::IncompatibleTransition(format!(
            "base coordinate must map as xi = z^-1, got {}",
            map.forward[0]
        )));
    }
    if map.inverse[0] != LaurentPoly::base_power(&v, -1) {
        return Err(Error::IncompatibleTransition(format!(
            "base coordinate must map as z = xi^-1, got {}",
            map.inverse[0]
        )));
    }
    let fwd = map.forward_substitution()?;
    let inv = map.inverse_substitution()?;
    // inverse o forward: substitute the forward images into the inverse.
    for (i, (img, want)) in map.inverse.iter().zip(coordinates(&u)).enumerate() {
        let got = fwd.apply(img)?;
        let residual = got.checked_sub(&want)?;
        if !residual.is_zero() {
            return Err(Error::Composition {
                coordinate: coordinate_name(&u, i),
                residual: Box::new(residual),
            });
        }
    }
    for (i, (img, want)) in map.forward.iter().zip(coordinates(&v)).enumerate() {
        let got = inv.apply(img)?;
        let residual = got.checked_sub(&want)?;
        if !residual.is_zero() {
            return Err(Error::Composition {
                coordinate: coordinate_name(&v, i),
                residual: Box::new(residual),
            });
        }
    }
    Ok(())
}

/// A validated two-chart space. Parameters, when present, are symbolic ring
/// variables `t1..tp`; [`TwoChartSpace::specialize`] substitutes numbers.
#[derive(Clone)]
pub struct TwoChartSpace {
    name: String,
    map: ChartMap,
    param_names: Vec<String>,
    param_values: Option<Vec<Rational>>,
    forward_sub: Substitution,
    inverse_sub: Substitution,
}

impl fmt::Debug for TwoChartSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoChartSpace")
            .field("name", &self.name)
            .field("forward", &self.forward_strings())
            .field("params", &self.param_names)
            .finish()
    }
}

impl TwoChartSpace {
    pub fn new(name: impl Into<String>, map: ChartMap, param_names: Vec<String>) -> Result<Self> {
        validate_transition(&map)?;
        if param_names.len() != map.u_signature().params {
            return Err(Error::Input(format!(
                "{} parameter names for a ring with {} parameters",
                param_names.len(),
                map.u_signature().params
            )));
        }
        let forward_sub = map.forward_substitution()?;
        let inverse_sub = map.inverse_substitution()?;
        Ok(TwoChartSpace {
            name: name.into(),
            map,
            param_names,
            param_values: None,
            forward_sub,
            inverse_sub,
        })
    }

    /// `Z_k` with `(xi, v) = (z^-1, z^k u)`, or `W_k` with
    /// `(xi, v1, v2) = (z^-1, z^k u1, z^(2-k) u2)`.
    pub fn standard(family: Family, k: i64) -> Self {
        let (fibers, degrees, name) = match family {
            Family::Z => {
                let name = if k < 0 { format!("Z({k})") } else { format!("Z{k}") };
                (1, vec![k], name)
            }
            Family::W => (2, vec![k, 2 - k], format!("W{k}")),
        };
        let u = Signature::new(fibers, 0, Frame::U);
        let v = Signature::new(fibers, 0, Frame::V);
        let mut forward = vec![LaurentPoly::base_power(&u, -1)];
        let mut inverse = vec![LaurentPoly::base_power(&v, -1)];
        for (k, &d) in degrees.iter().enumerate() {
            forward.push(LaurentPoly::base_power(&u, d) * LaurentPoly::fiber_var(&u, k));
            inverse.push(LaurentPoly::base_power(&v, d) * LaurentPoly::fiber_var(&v, k));
        }
        Self::new(name, ChartMap { forward, inverse }, vec![])
            .expect("standard charts always validate")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn fibers(&self) -> usize {
        self.map.fibers()
    }

    pub fn transition(&self) -> &ChartMap {
        &self.map
    }

    pub fn u_signature(&self) -> &Signature {
        self.map.u_signature()
    }

    pub fn v_signature(&self) -> &Signature {
        self.map.v_signature()
    }

    pub fn param_names(&self) -> &[String] {
        &self.param_names
    }

    pub fn param_values(&self) -> Option<&[Rational]> {
        self.param_values.as_deref()
    }

    pub fn is_numeric(&self) -> bool {
        self.param_names.is_empty()
    }

    pub fn require_numeric(&self) -> Result<()> {
        if self.is_numeric() {
            Ok(())
        } else {
            Err(Error::SymbolicParameters(format!(
                "{} has parameters {:?}",
                self.name, self.param_names
            )))
        }
    }

    /// V-frame function as a U-frame function on the overlap.
    pub fn pull_to_u(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        if p.signature() != self.v_signature() {
            return Err(Error::Signature(format!("{p} is not a V-frame function of {}", self.name)));
        }
        self.forward_sub.apply(p)
    }

    /// U-frame function as a V-frame function on the overlap.
    pub fn pull_to_v(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        if p.signature() != self.u_signature() {
            return Err(Error::Signature(format!("{p} is not a U-frame function of {}", self.name)));
        }
        self.inverse_sub.apply(p)
    }

    pub fn forward_substitution(&self) -> &Substitution {
        &self.forward_sub
    }

    pub fn inverse_substitution(&self) -> &Substitution {
        &self.inverse_sub
    }

    /// Substitutes numeric values for every parameter.
    pub fn specialize(&self, values: &[Rational]) -> Result<TwoChartSpace> {
        if values.len() != self.param_names.len() {
            return Err(Error::Input(format!(
                "{} values for parameters {:?}",
                values.len(),
                self.param_names
            )));
        }
        let specialise = |p: &LaurentPoly| -> Result<LaurentPoly> {
            let target = p.signature().with_params(0);
            let sub = Substitution::new(
                LaurentPoly::base_power(&target, 1),
                (0..target.fibers).map(|k| LaurentPoly::fiber_var(&target, k)).collect(),
                values.iter().map(|c| LaurentPoly::constant(&target, c.clone())).collect(),
            )?;
            sub.apply(p)
        };
        let map = ChartMap {
            forward: self.map.forward.iter().map(specialise).collect::<Result<_>>()?,
            inverse: self.map.inverse.iter().map(specialise).collect::<Result<_>>()?,
        };
        let mut out = TwoChartSpace::new(self.name.clone(), map, vec![])?;
        out.param_values = Some(values.to_vec());
        Ok(out)
    }

    pub fn forward_strings(&self) -> Vec<String> {
        self.map.forward.iter().map(ToString::to_string).collect()
    }

    pub fn inverse_strings(&self) -> Vec<String> {
        self.map.inverse.iter().map(ToString::to_string).collect()
    }

    /// When every forward coordinate is a single monomial `c z^d x_i` (the
    /// undeformed total spaces), returns the base exponents `d_i`.
    pub fn monomial_model_degrees(&self) -> Option<Vec<i64>> {
        let u = self.u_signature();
        let coords = coordinates(u);
        self.map
            .forward
            .iter()
            .zip(&coords)
            .map(|(img, x)| {
                if img.len() != 1 {
                    return None;
                }
                let (e, c) = img.terms().next()?;
                let (xe, _) = x.terms().next()?;
                let d = e.base - xe.base;
                let shifted = x.shift_base(d).scale(c);
                (shifted == *img).then_some(d)
            })
            .collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ring::rat;

    fn u2() -> Signature {
        Signature::new(2, 0, Frame::U)
    }
    fn v2() -> Signature {
        Signature::new(2, 0, Frame::V)
    }

    #[test]
    fn standard_forward_maps() {
        let w3 = TwoChartSpace::standard(Family::W, 3);
        assert_eq!(w3.forward_strings(), vec!["z^-1", "z^3*u1", "z^-1*u2"]);
        let zm1 = TwoChartSpace::standard(Family::Z, -1);
        assert_eq!(zm1.forward_strings(), vec!["z^-1", "z^-1*u"]);
        assert_eq!(zm1.name(), "Z(-1)");
        let w1 = TwoChartSpace::standard(Family::W, 1);
        assert_eq!(w1.forward_strings(), vec!["z^-1", "z*u1", "z*u2"]);
        assert_eq!(w3.monomial_model_degrees(), Some(vec![-2, 3, -1]));
    }

    #[test]
    fn standard_spaces_validate_for_many_k() {
        for k in -5..=5 {
            validate_transition(TwoChartSpace::standard(Family::W, k).transition()).unwrap();
            validate_transition(TwoChartSpace::standard(Family::Z, k).transition()).unwrap();
        }
    }

    pub(crate) fn deformed_w2_map() -> ChartMap {
        let (u, v) = (u2(), v2());
        let z = |e| LaurentPoly::base_power(&u, e);
        let xi = |e| LaurentPoly::base_power(&v, e);
        ChartMap {
            forward: vec![
                z(-1),
                z(2) * LaurentPoly::fiber_var(&u, 0) + z(1) * LaurentPoly::fiber_var(&u, 1),
                LaurentPoly::fiber_var(&u, 1),
            ],
            inverse: vec![
                xi(-1),
                xi(2) * LaurentPoly::fiber_var(&v, 0) - xi(1) * LaurentPoly::fiber_var(&v, 1),
                LaurentPoly::fiber_var(&v, 1),
            ],
        }
    }

    #[test]
    fn deformed_w2_validates() {
        validate_transition(&deformed_w2_map()).unwrap();
    }

    #[test]
    fn wrong_inverse_reports_residual() {
        let u = Signature::new(1, 0, Frame::U);
        let v = Signature::new(1, 0, Frame::V);
        let map = ChartMap {
            forward: vec![
                LaurentPoly::base_power(&u, -1),
                LaurentPoly::base_power(&u, 2) * LaurentPoly::fiber_var(&u, 0),
            ],
            inverse: vec![
                LaurentPoly::base_power(&v, -1),
                LaurentPoly::base_power(&v, 1) * LaurentPoly::fiber_var(&v, 0),
            ],
        };
        match validate_transition(&map) {
            Err(Error::Composition { coordinate, residual }) => {
                assert_eq!(coordinate, "u");
                assert_eq!(residual.to_string(), "-u + z*u");
            }
            other => panic!("expected composition error, got {other:?}"),
        }
    }

    #[test]
    fn specialize_substitutes_parameters() {
        let u = Signature::new(1, 1, Frame::U);
        let v = Signature::new(1, 1, Frame::V);
        // Z2 family: v = z^2 u + t1 z, u = xi^2 v - t1 xi
        let map = ChartMap {
            forward: vec![
                LaurentPoly::base_power(&u, -1),
                LaurentPoly::base_power(&u, 2) * LaurentPoly::fiber_var(&u, 0)
                    + LaurentPoly::base_power(&u, 1) * LaurentPoly::param_var(&u, 0),
            ],
            inverse: vec![
                LaurentPoly::base_power(&v, -1),
                LaurentPoly::base_power(&v, 2) * LaurentPoly::fiber_var(&v, 0)
                    - LaurentPoly::base_power(&v, 1) * LaurentPoly::param_var(&v, 0),
            ],
        };
        let fam = TwoChartSpace::new("Z2t", map, vec!["t1".into()]).unwrap();
        assert!(fam.require_numeric().is_err());
        let s = fam.specialize(&[rat(1)]).unwrap();
        assert_eq!(s.forward_strings(), vec!["z^-1", "z + z^2*u"]);
        let s0 = fam.specialize(&[rat(0)]).unwrap();
        assert_eq!(s0.forward_strings(), TwoChartSpace::standard(Family::Z, 2).forward_strings());
    }
}
