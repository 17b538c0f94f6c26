//! Splitting types, extension classes and moduli dimension counts.

mod birkhoff;

use serde::Serialize;

use crate::bundle::{extension_bundle, line_bundle, TransitionBundle};
use crate::cech::{h1, reduce_class, CechClass, DegreeBox, Reduction};
use crate::error::{Error, Result};
use crate::geometry::TwoChartSpace;
use crate::ring::LaurentPoly;

pub use birkhoff::{birkhoff, splitting_type, Birkhoff};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    SplitZero,
    PolynomialClass { max_fiber_degree: u32 },
    NonPolynomialUpTo { cutoff: u32 },
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::SplitZero => write!(f, "SplitZero"),
            Verdict::PolynomialClass { max_fiber_degree } => write!(f, "PolynomialClass({max_fiber_degree})"),
            Verdict::NonPolynomialUpTo { cutoff } => write!(f, "NonPolynomialUpTo({cutoff})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionVerdict {
    pub verdict: Verdict,
    /// Fiber degrees at which the reduced class is nonzero.
    pub nonzero_degrees: Vec<u32>,
    /// The class in `H^1(O(b - a))` and its reduction.
    pub line_bundle: TransitionBundle,
    pub class: CechClass,
    pub reduction: Reduction,
}

/// Reads `(b, a, p)` off `[[z^-b, z^-b p], [0, z^-a]]`.
pub fn extension_data(bundle: &TransitionBundle) -> Result<(i64, i64, LaurentPoly)> {
    let m = bundle.transition();
    let bad = || Error::Input(format!("{} is not an upper triangular extension of line bundles", bundle.name()));
    if m.len() != 2 || !m[1][0].is_zero() {
        return Err(bad());
    }
    let (_, eb) = m[0][0].as_unit_monomial().ok_or_else(bad)?;
    let (_, ea) = m[1][1].as_unit_monomial().ok_or_else(bad)?;
    let inv = m[0][0].unit_inverse().ok_or_else(bad)?;
    Ok((-eb, -ea, &m[0][1] * &inv))
}

pub fn extension_verdict(space: &TwoChartSpace, b: i64, a: i64, p: &LaurentPoly, cutoff: u32) -> Result<ExtensionVerdict> {
    let bundle = extension_bundle(space, b, a, p)?;
    extension_verdict_for(&bundle, cutoff)
}

/// Verdict for the extension class of an upper triangular rank-2 bundle,
/// reduced degree by degree up to `cutoff`.
pub fn extension_verdict_for(bundle: &TransitionBundle, cutoff: u32) -> Result<ExtensionVerdict> {
    let (b, a, p) = extension_data(bundle)?;
    let space = bundle.space();
    let line = line_bundle(space, b - a);
    let p = p.truncate_fiber_degree(cutoff);
    let class = CechClass::single(&line, 0, p.clone())?;
    let lo = p.min_base_exponent().unwrap_or(-1).min(-1);
    let bx = DegreeBox::new(lo - 2, -1, cutoff)?;
    let reduction = reduce_class(&line, &class, &bx)?;
    let rep = &reduction.representative.components()[0];
    let nonzero_degrees: Vec<u32> = (0..=cutoff).filter(|&d| !rep.fiber_degree_part(d).is_zero()).collect();
    let verdict = if nonzero_degrees.is_empty() {
        Verdict::SplitZero
    } else if cutoff >= 1 && (1..=cutoff).all(|d| nonzero_degrees.contains(&d)) {
        Verdict::NonPolynomialUpTo { cutoff }
    } else {
        Verdict::PolynomialClass { max_fiber_degree: *nonzero_degrees.last().expect("nonempty") }
    };
    Ok(ExtensionVerdict { verdict, nonzero_degrees, line_bundle: line, class, reduction })
}

fn base_reach(space: &TwoChartSpace) -> i64 {
    space.transition().forward.iter().map(LaurentPoly::max_abs_base_exponent).max().unwrap_or(0)
}

/// Number of classes of `H^1(O(-2j))` with total fiber degree at most one.
pub fn first_neighborhood_dim(space: &TwoChartSpace, j: u32) -> Result<usize> {
    if j == 0 {
        return Err(Error::Input("j must be at least 1".into()));
    }
    let lo = -(2 * j as i64) - 2 * base_reach(space) - 4;
    let bx = DegreeBox::new(lo, -1, 1)?;
    let res = h1(&line_bundle(space, -2 * j as i64), &bx)?;
    Ok(res.generators.iter().filter(|g| g.exponent.fiber_degree() <= 1).count())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModuliDimReport {
    pub space: String,
    pub j: u32,
    pub first_neighborhood_dim: usize,
    pub quotient_convention_dim: i64,
    pub formula_value: i64,
    pub formula: String,
    pub agrees: bool,
    pub no_generic_part: bool,
}

/// First-neighbourhood count minus `2j`, next to the closed formula for the
/// family (`4j - 5` for threefolds `W_k`, `2j - k - 2` for surfaces `Z_k`).
pub fn generic_moduli_dim(space: &TwoChartSpace, j: u32) -> Result<ModuliDimReport> {
    let degrees = space
        .monomial_model_degrees()
        .ok_or_else(|| Error::Input(format!("{} is not a monomial model", space.name())))?;
    let (formula_value, formula) = match space.fibers() {
        1 => (2 * j as i64 - degrees[1] - 2, "2j-k-2".to_string()),
        2 => (4 * j as i64 - 5, "4j-5".to_string()),
        f => return Err(Error::Input(format!("no dimension formula for {f} fibers"))),
    };
    let fnd = first_neighborhood_dim(space, j)?;
    let q = fnd as i64 - 2 * j as i64;
    Ok(ModuliDimReport {
        space: space.name().to_string(),
        j,
        first_neighborhood_dim: fnd,
        quotient_convention_dim: q,
        formula_value,
        formula,
        agrees: q == formula_value,
        no_generic_part: formula_value < 0 || q < 0,
    })
}

#[cfg(test)]
mod tests;
