//! First Čech cohomology of a bundle for the two-chart cover.
//!
//! A cochain is an r-tuple of U-frame functions on the overlap. Coboundaries
//! are `alpha + Minv * (beta o forward)` with `alpha` holomorphic on U and
//! `beta` holomorphic on V. Generators are monomial classes inside a
//! [`DegreeBox`] window.

mod engine;
mod witness;

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use crate::bundle::TransitionBundle;
use crate::error::{Error, Result};
use crate::ring::{Exponent, LaurentPoly, Rational};

use engine::{Engine, Key, Source};
pub use witness::CoboundaryWitness;

/// Window of candidate generators: base exponents in `[l_lo, l_hi]` (only
/// negative ones matter) and every fiber exponent at most `fiber_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeBox {
    pub l_lo: i64,
    pub l_hi: i64,
    pub fiber_max: u32,
    pub step: u32,
    pub rounds: u32,
}

impl DegreeBox {
    pub fn new(l_lo: i64, l_hi: i64, fiber_max: u32) -> Result<Self> {
        if l_lo > l_hi {
            return Err(Error::Input(format!("empty base range [{l_lo}, {l_hi}]")));
        }
        Ok(DegreeBox { l_lo, l_hi, fiber_max, step: 4, rounds: 2 })
    }

    /// Default base range `[-(2 fiber_max + 4), -1]`.
    pub fn with_fiber_max(fiber_max: u32) -> Self {
        DegreeBox { l_lo: -2 * fiber_max as i64 - 4, l_hi: -1, fiber_max, step: 4, rounds: 2 }
    }

    fn window(&self, rank: usize, fibers: usize) -> Vec<Key> {
        let mut out = Vec::new();
        for c in 0..rank {
            for l in self.l_lo..=self.l_hi.min(-1) {
                let mut fib = vec![0u32; fibers];
                loop {
                    out.push((c, Exponent::new(l, fib.clone(), vec![])));
                    if !engine::next_multi_index(&mut fib, self.fiber_max) {
                        break;
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Every `(component, exponent)` of the window, component 0-based.
    pub fn window_monomials(&self, rank: usize, fibers: usize) -> Vec<(usize, Exponent)> {
        self.window(rank, fibers)
    }

    fn contains(&self, k: &Key) -> bool {
        k.1.base >= self.l_lo && k.1.base <= self.l_hi && k.1.fibers.iter().all(|&d| d <= self.fiber_max)
    }
}

/// Caps on the V-monomials `xi^p v^J` used in box mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VBox {
    pub xi_max: u32,
    pub v_max: u32,
}

impl VBox {
    fn enlarged(self, step: u32) -> VBox {
        VBox { xi_max: self.xi_max + step, v_max: self.v_max + step }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CertMode {
    /// Graded mode whenever a positive grading exists, box mode otherwise.
    #[default]
    Auto,
    BoxOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all_fields = "camelCase")]
pub enum Certification {
    /// Every slice is finite; no truncation.
    Exact,
    /// Unchanged over `rounds` successive enlargements ending at `v_box`.
    StableInBox { v_box: VBox, rounds: u32 },
    /// An explicit coboundary decomposition was found and re-checked.
    WitnessFound,
}

impl Certification {
    pub fn label(&self) -> &'static str {
        match self {
            Certification::Exact => "Exact",
            Certification::StableInBox { .. } => "StableInBox",
            Certification::WitnessFound => "WitnessFound",
        }
    }
}

/// A cochain: one U-frame Laurent polynomial per bundle component.
#[derive(Clone, Debug, PartialEq)]
pub struct CechClass {
    components: Vec<LaurentPoly>,
}

impl CechClass {
    pub fn new(bundle: &TransitionBundle, components: Vec<LaurentPoly>) -> Result<Self> {
        if components.len() != bundle.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} components for a rank {} bundle",
                components.len(),
                bundle.rank()
            )));
        }
        let sig = bundle.space().u_signature();
        if let Some(p) = components.iter().find(|p| p.signature() != sig) {
            return Err(Error::Signature(format!("{p} is not a U-frame function")));
        }
        Ok(CechClass { components })
    }

    /// `poly` in component `component` (0-based), zero elsewhere.
    pub fn single(bundle: &TransitionBundle, component: usize, poly: LaurentPoly) -> Result<Self> {
        let sig = bundle.space().u_signature();
        if component >= bundle.rank() {
            return Err(Error::DimensionMismatch(format!("component {component} of rank {}", bundle.rank())));
        }
        let mut comps = vec![LaurentPoly::zero(sig); bundle.rank()];
        comps[component] = poly;
        Self::new(bundle, comps)
    }

    pub fn monomial(bundle: &TransitionBundle, component: usize, exponent: Exponent) -> Result<Self> {
        let sig = bundle.space().u_signature();
        Self::single(bundle, component, LaurentPoly::monomial(sig, exponent, Rational::one()))
    }

    pub fn zero(bundle: &TransitionBundle) -> Self {
        let sig = bundle.space().u_signature();
        CechClass { components: vec![LaurentPoly::zero(sig); bundle.rank()] }
    }

    pub fn components(&self) -> &[LaurentPoly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(LaurentPoly::is_zero)
    }

    fn from_keys(bundle: &TransitionBundle, v: &BTreeMap<Key, Rational>) -> Self {
        let sig = bundle.space().u_signature();
        let mut comps: Vec<Vec<(Exponent, Rational)>> = vec![vec![]; bundle.rank()];
        for ((c, e), x) in v {
            comps[*c].push((e.clone(), x.clone()));
        }
        CechClass { components: comps.into_iter().map(|t| LaurentPoly::from_terms(sig, t)).collect() }
    }

    fn keys(&self) -> BTreeMap<Key, Rational> {
        engine::negative_part(&self.components)
    }
}

impl std::fmt::Display for CechClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A generator of `H^1`: `coeff * monomial` in one component (0-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Generator {
    pub component: usize,
    pub exponent: Exponent,
    pub coeff: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum DimPattern {
    Constant { value: usize },
    Arithmetic { first: usize, step: i64 },
    Irregular,
}

impl DimPattern {
    pub fn detect(values: &[usize]) -> DimPattern {
        if values.is_empty() {
            return DimPattern::Irregular;
        }
        if values.iter().all(|&v| v == values[0]) {
            return DimPattern::Constant { value: values[0] };
        }
        let step = values[1] as i64 - values[0] as i64;
        if values.windows(2).all(|w| w[1] as i64 - w[0] as i64 == step) {
            DimPattern::Arithmetic { first: values[0], step }
        } else {
            DimPattern::Irregular
        }
    }
}

impl std::fmt::Display for DimPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DimPattern::Constant { value } => write!(f, "{value} classes per fiber degree"),
            DimPattern::Arithmetic { first, step } => write!(f, "{first} classes in degree 0, {step:+} per degree"),
            DimPattern::Irregular => write!(f, "no simple pattern"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct H1Result {
    pub generators: Vec<Generator>,
    /// `(total fiber degree, number of generators)` for every degree in the window.
    pub dims: Vec<(u32, usize)>,
    /// Pattern of `dims` over degrees `0..=fiber_max`.
    pub pattern: DimPattern,
    pub certification: Certification,
    pub degree_box: DegreeBox,
    pub slices: usize,
    pub v_monomials: usize,
}

impl H1Result {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn contains(&self, component: usize, exponent: &Exponent) -> bool {
        self.generators.iter().any(|g| g.component == component && &g.exponent == exponent)
    }
}

#[derive(Clone, Debug)]
pub struct Membership {
    pub is_coboundary: bool,
    pub certification: Certification,
    pub witness: Option<CoboundaryWitness>,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub representative: CechClass,
    /// Decomposition of `class - representative`.
    pub witness: CoboundaryWitness,
    pub certification: Certification,
}

const MAX_ENLARGEMENTS: u32 = 12;

/// Box-mode driver: re-runs with growing V-boxes until `key` is unchanged
/// over `rounds` enlargements, or `done` says a later box cannot change the
/// answer.
fn escalate<T: PartialEq>(
    start: VBox,
    bx: &DegreeBox,
    mut run: impl FnMut(VBox) -> Result<T>,
    done: impl Fn(&T) -> bool,
) -> Result<(T, VBox, u32)> {
    let mut vb = start;
    let mut prev: Option<T> = None;
    let mut same = 0;
    for _ in 0..=MAX_ENLARGEMENTS {
        let cur = run(vb)?;
        if done(&cur) {
            return Ok((cur, vb, same));
        }
        if prev.as_ref() == Some(&cur) {
            same += 1;
            if same >= bx.rounds {
                return Ok((cur, vb, same));
            }
        } else {
            same = 0;
        }
        prev = Some(cur);
        vb = vb.enlarged(bx.step);
    }
    Err(Error::NonFiniteSlice(format!(
        "no stable answer after {MAX_ENLARGEMENTS} enlargements of the V-box (last {vb:?})"
    )))
}

fn graded(engine: &Engine, mode: CertMode) -> bool {
    mode == CertMode::Auto && engine.is_graded()
}

fn build_result(bx: DegreeBox, fibers: usize, gens: Vec<Key>, cert: Certification, slices: usize, v: usize) -> H1Result {
    let max_deg = bx.fiber_max * fibers as u32;
    let mut dims: Vec<(u32, usize)> = (0..=max_deg).map(|d| (d, 0)).collect();
    for (_, e) in &gens {
        dims[e.fiber_degree() as usize].1 += 1;
    }
    let head: Vec<usize> = dims.iter().take(bx.fiber_max as usize + 1).map(|d| d.1).collect();
    H1Result {
        pattern: DimPattern::detect(&head),
        generators: gens
            .into_iter()
            .map(|(component, exponent)| Generator { component, exponent, coeff: Rational::one() })
            .collect(),
        dims,
        certification: cert,
        degree_box: bx,
        slices,
        v_monomials: v,
    }
}

pub fn h1(bundle: &TransitionBundle, bx: &DegreeBox) -> Result<H1Result> {
    h1_with_mode(bundle, bx, CertMode::Auto)
}

pub fn h1_with_mode(bundle: &TransitionBundle, bx: &DegreeBox, mode: CertMode) -> Result<H1Result> {
    let engine = Engine::new(bundle)?;
    let f = bundle.space().fibers();
    let window = bx.window(bundle.rank(), f);
    if graded(&engine, mode) {
        let out = engine.run(Source::Graded, &window, &[], false)?;
        return Ok(build_result(*bx, f, out.generators, Certification::Exact, out.slices, out.v_monomials));
    }
    let start = engine.initial_vbox(bx.l_lo, bx.fiber_max);
    let mut last = (0, 0);
    let (gens, vb, rounds) = escalate(
        start,
        bx,
        |vb| {
            let out = engine.run(Source::Boxed(vb), &window, &[], false)?;
            last = (out.slices, out.v_monomials);
            Ok(out.generators)
        },
        |_| false,
    )?;
    Ok(build_result(*bx, f, gens, Certification::StableInBox { v_box: vb, rounds }, last.0, last.1))
}

/// Generators as classes, in the reported order.
pub fn generator_classes(bundle: &TransitionBundle, res: &H1Result) -> Result<Vec<CechClass>> {
    res.generators.iter().map(|g| CechClass::monomial(bundle, g.component, g.exponent.clone())).collect()
}

/// The U-side and V-side generators of the coboundary space whose images
/// meet the window: every U-monomial section with nonnegative base exponent
/// in the box, and `Minv * (beta o forward)` for V-monomials `beta` of the
/// window's slices (graded mode) or of the starting V-box.
pub fn coboundary_generators(bundle: &TransitionBundle, bx: &DegreeBox) -> Result<Vec<CechClass>> {
    let engine = Engine::new(bundle)?;
    let f = bundle.space().fibers();
    let mut out = Vec::new();
    for c in 0..bundle.rank() {
        for l in bx.l_lo.max(0)..=bx.l_hi.max(0) {
            let mut fib = vec![0u32; f];
            loop {
                out.push(CechClass::monomial(bundle, c, Exponent::new(l, fib.clone(), vec![]))?);
                if !engine::next_multi_index(&mut fib, bx.fiber_max) {
                    break;
                }
            }
        }
    }
    for k in engine.v_monomials_meeting(bx, graded(&engine, CertMode::Auto))? {
        out.push(CechClass { components: engine.v_image_single(&k) });
    }
    Ok(out)
}

fn check_class(bundle: &TransitionBundle, class: &CechClass) -> Result<()> {
    if class.components.len() != bundle.rank() || class.components.iter().any(|p| p.signature() != bundle.space().u_signature()) {
        return Err(Error::DimensionMismatch("class does not match the bundle".into()));
    }
    Ok(())
}

pub fn is_coboundary(bundle: &TransitionBundle, class: &CechClass, bx: &DegreeBox) -> Result<Membership> {
    is_coboundary_with_mode(bundle, class, bx, CertMode::Auto)
}

pub fn is_coboundary_with_mode(
    bundle: &TransitionBundle,
    class: &CechClass,
    bx: &DegreeBox,
    mode: CertMode,
) -> Result<Membership> {
    check_class(bundle, class)?;
    let engine = Engine::new(bundle)?;
    let target = class.keys();
    let found = |out: &engine::RunOutput| out.targets[0].rep.is_empty();
    let (out, cert) = if graded(&engine, mode) {
        (engine.run(Source::Graded, &[], &[target], true)?, Certification::Exact)
    } else {
        let (lo, fmax) = key_extent(&target, bx);
        let start = engine.initial_vbox(lo, fmax);
        let (out, vb, rounds) = escalate(
            start,
            bx,
            |vb| engine.run(Source::Boxed(vb), &[], std::slice::from_ref(&target), true).map(Comparable),
            |o| found(&o.0),
        )?;
        (out.0, Certification::StableInBox { v_box: vb, rounds })
    };
    if found(&out) {
        let w = witness::assemble(&engine, bundle, class, &BTreeMap::new(), &out.targets[0].beta)?;
        return Ok(Membership { is_coboundary: true, certification: Certification::WitnessFound, witness: Some(w) });
    }
    Ok(Membership { is_coboundary: false, certification: cert, witness: None })
}

/// Rewrites `class` as a combination of the generators `h1` reports for the
/// same box, plus a certified coboundary.
pub fn reduce_class(bundle: &TransitionBundle, class: &CechClass, bx: &DegreeBox) -> Result<Reduction> {
    reduce_class_with_mode(bundle, class, bx, CertMode::Auto)
}

pub fn reduce_class_with_mode(
    bundle: &TransitionBundle,
    class: &CechClass,
    bx: &DegreeBox,
    mode: CertMode,
) -> Result<Reduction> {
    let mut all = reduce_many(bundle, std::slice::from_ref(class), bx, mode)?;
    all.pop().expect("one class in, one reduction out")
}

/// Reduces several classes in one pass; each entry fails separately when its
/// class leaves the box.
pub fn reduce_many(
    bundle: &TransitionBundle,
    classes: &[CechClass],
    bx: &DegreeBox,
    mode: CertMode,
) -> Result<Vec<Result<Reduction>>> {
    for c in classes {
        check_class(bundle, c)?;
    }
    let engine = Engine::new(bundle)?;
    let targets: Vec<BTreeMap<Key, Rational>> = classes.iter().map(CechClass::keys).collect();
    let window = bx.window(bundle.rank(), bundle.space().fibers());
    let (out, cert) = if graded(&engine, mode) {
        // only the slices the classes touch
        let chis: std::collections::BTreeSet<Vec<i64>> =
            targets.iter().flat_map(|t| t.keys().map(|k| engine.char_u(k))).collect();
        let window: Vec<Key> = window.into_iter().filter(|k| chis.contains(&engine.char_u(k))).collect();
        (engine.run(Source::Graded, &window, &targets, true)?, Certification::Exact)
    } else {
        let start = engine.initial_vbox(bx.l_lo, bx.fiber_max);
        let (out, vb, rounds) = escalate(
            start,
            bx,
            |vb| engine.run(Source::Boxed(vb), &window, &targets, true).map(Comparable),
            |_| false,
        )?;
        (out.0, Certification::StableInBox { v_box: vb, rounds })
    };
    Ok(classes
        .iter()
        .zip(&out.targets)
        .map(|(class, t)| {
            if t.leftover || t.rep.keys().any(|k| !bx.contains(k)) {
                return Err(Error::Input(format!("class {class} has terms outside the box that do not reduce")));
            }
            let representative = CechClass::from_keys(bundle, &t.rep);
            let witness = witness::assemble(&engine, bundle, class, &t.rep, &t.beta)?;
            let certification = if t.rep.is_empty() { Certification::WitnessFound } else { cert.clone() };
            Ok(Reduction { representative, witness, certification })
        })
        .collect())
}

/// Wrapper comparing run outputs by generators and target representatives.
struct Comparable(engine::RunOutput);

impl PartialEq for Comparable {
    fn eq(&self, other: &Self) -> bool {
        self.0.generators == other.0.generators
            && self.0.targets.len() == other.0.targets.len()
            && self.0.targets.iter().zip(&other.0.targets).all(|(a, b)| a.rep == b.rep && a.leftover == b.leftover)
    }
}

fn key_extent(t: &BTreeMap<Key, Rational>, bx: &DegreeBox) -> (i64, u32) {
    let lo = t.keys().map(|k| k.1.base).min().unwrap_or(bx.l_lo).min(bx.l_lo);
    let fmax = t.keys().flat_map(|k| k.1.fibers.iter().copied()).max().unwrap_or(0).max(bx.fiber_max);
    (lo, fmax)
}

#[cfg(test)]
mod tests;
