//! Slice-by-slice elimination. Only monomials with negative base exponent
//! matter: everything else is absorbed by the U-side of a coboundary. The
//! V-side contributes `Minv * (beta o forward)` for V-monomials `beta`, and
//! the quotient is computed inside each character slice of the conserved
//! grading, with V-monomials either enumerated exactly (when a positive
//! grading exists) or taken from a finite box.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bundle::TransitionBundle;
use crate::error::{Error, Result};
use crate::geometry::{relation_vectors, v_monomial_in_u_weights, variable_part};
use crate::linalg::{integer_kernel, rref, QMatrix, SparseEchelon, SparseVec};
use crate::ring::{Exponent, LaurentPoly, Rational};

use super::VBox;

/// `(component, exponent)` of a monomial section.
pub(crate) type Key = (usize, Exponent);

pub(crate) const DEFAULT_MAX_CELLS: usize = 4_000_000;

pub(crate) fn max_cells() -> usize {
    std::env::var("CECH_MAX_CELLS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_CELLS)
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Source {
    Graded,
    Boxed(VBox),
}

#[derive(Clone, Debug, Default)]
pub(crate) struct TargetOutcome {
    /// Generator combination plus anything that could not be reduced.
    pub rep: SparseVec<Key>,
    /// Coefficients of V-monomials (keys are V-frame exponents).
    pub beta: SparseVec<Key>,
    /// Monomials left over that are neither coboundary nor window.
    pub leftover: bool,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct RunOutput {
    pub generators: Vec<Key>,
    pub targets: Vec<TargetOutcome>,
    pub slices: usize,
    pub v_monomials: usize,
}

struct Slice {
    window: Vec<Key>,
    targets: Vec<(usize, SparseVec<Key>)>,
    vmons: Vec<Key>,
}

struct SliceOutput {
    generators: Vec<Key>,
    targets: Vec<(usize, TargetOutcome)>,
}

pub(crate) struct Engine<'a> {
    bundle: &'a TransitionBundle,
    r: usize,
    f: usize,
    kernel: Vec<Vec<i64>>,
    /// U-exponent weights of each `v_k`.
    lead_v: Vec<Vec<i64>>,
    positive: Option<Vec<i64>>,
    max_cells: usize,
}

impl<'a> Engine<'a> {
    pub fn new(bundle: &'a TransitionBundle) -> Result<Self> {
        let space = bundle.space();
        space.require_numeric()?;
        let f = space.fibers();
        let r = bundle.rank();
        let nvar = f + 1;
        let n = nvar + 2 * r;
        let map = space.transition();
        let pad = |v: &[i64]| -> Vec<i64> {
            let mut row = v.to_vec();
            row.resize(n, 0);
            row
        };
        let mut rows: Vec<Vec<i64>> = relation_vectors(map).iter().map(|v| pad(v)).collect();
        let (a, b) = (|c: usize| nvar + c, |c: usize| nvar + r + c);
        for (i, row) in bundle.transition().iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                for (e, _) in p.terms() {
                    // a_j = w(M_ij) + b_i
                    let mut v = pad(&variable_part(e));
                    v[b(i)] += 1;
                    v[a(j)] -= 1;
                    rows.push(v);
                }
            }
        }
        for (i, row) in bundle.inverse_transition().iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                for (e, _) in p.terms() {
                    // b_j = w(Minv_ij) + a_i
                    let mut v = pad(&variable_part(e));
                    v[a(i)] += 1;
                    v[b(j)] -= 1;
                    rows.push(v);
                }
            }
        }
        rows.sort();
        rows.dedup();
        let kernel = integer_kernel(&rows, n);
        let lead_v = (0..f)
            .map(|k| {
                let mut fib = vec![0u32; f];
                fib[k] = 1;
                v_monomial_in_u_weights(map, &Exponent::new(0, fib, vec![]))
            })
            .collect::<Vec<_>>();
        let positive = positive_grading(&kernel, nvar, &lead_v);
        Ok(Engine { bundle, r, f, kernel, lead_v, positive, max_cells: max_cells() })
    }

    pub fn is_graded(&self) -> bool {
        self.positive.is_some()
    }

    fn a(&self, c: usize) -> usize {
        self.f + 1 + c
    }

    fn b(&self, c: usize) -> usize {
        self.f + 1 + self.r + c
    }

    fn u_vector(&self, k: &Key) -> Vec<i64> {
        let mut x = variable_part(&k.1);
        x.resize(self.f + 1 + 2 * self.r, 0);
        x[self.a(k.0)] = 1;
        x
    }

    fn v_vector(&self, k: &Key) -> Vec<i64> {
        let mut x = v_monomial_in_u_weights(self.bundle.space().transition(), &k.1);
        x.resize(self.f + 1 + 2 * self.r, 0);
        x[self.b(k.0)] = 1;
        x
    }

    fn character(&self, x: &[i64]) -> Vec<i64> {
        self.kernel.iter().map(|g| dot(g, x)).collect()
    }

    pub fn char_u(&self, k: &Key) -> Vec<i64> {
        self.character(&self.u_vector(k))
    }

    pub fn char_v(&self, k: &Key) -> Vec<i64> {
        self.character(&self.v_vector(k))
    }

    /// All V-monomials of the character of `rep`, using the positive grading.
    fn graded_v_monomials(&self, rep: &Key) -> Vec<Key> {
        let p = self.positive.as_ref().expect("graded mode needs a positive grading");
        let chi = self.char_u(rep);
        let total = dot(p, &self.u_vector(rep));
        let p_xi = -p[0];
        let p_v: Vec<i64> = self.lead_v.iter().map(|l| dot(&p[..self.f + 1], l)).collect();
        let mut out = Vec::new();
        for c in 0..self.r {
            let rem = total - p[self.b(c)];
            if rem < 0 {
                continue;
            }
            let mut fib = vec![0u32; self.f];
            enumerate_weighted(rem, 0, &p_v, &mut fib, &mut |left, fib| {
                if left % p_xi == 0 {
                    let key = (c, Exponent::new(left / p_xi, fib.to_vec(), vec![]));
                    if self.char_v(&key) == chi {
                        out.push(key);
                    }
                }
            });
        }
        out.sort();
        out
    }

    fn boxed_v_monomials(&self, vb: VBox) -> BTreeMap<Vec<i64>, Vec<Key>> {
        let mut groups: BTreeMap<Vec<i64>, Vec<Key>> = BTreeMap::new();
        let mut fib = vec![0u32; self.f];
        loop {
            for c in 0..self.r {
                for p in 0..=vb.xi_max as i64 {
                    let key = (c, Exponent::new(p, fib.clone(), vec![]));
                    groups.entry(self.char_v(&key)).or_default().push(key);
                }
            }
            if !next_multi_index(&mut fib, vb.v_max) {
                break;
            }
        }
        for v in groups.values_mut() {
            v.sort();
        }
        groups
    }

    /// Full U-frame image `Minv * (beta o forward)` of a V-monomial.
    pub fn v_image_full(&self, powers: &[Vec<LaurentPoly>], k: &Key) -> Vec<LaurentPoly> {
        let sig = self.bundle.space().u_signature();
        let mut mono = LaurentPoly::base_power(sig, -k.1.base);
        for (j, &d) in k.1.fibers.iter().enumerate() {
            if d > 0 {
                mono = &mono * &powers[j][d as usize];
            }
        }
        self.bundle.inverse_transition().iter().map(|row| &row[k.0] * &mono).collect()
    }

    fn v_image(&self, powers: &[Vec<LaurentPoly>], k: &Key) -> SparseVec<Key> {
        negative_part(&self.v_image_full(powers, k))
    }

    /// Computes generators among `window` and reduces each target.
    pub fn run(
        &self,
        source: Source,
        window: &[Key],
        targets: &[SparseVec<Key>],
        track: bool,
    ) -> Result<RunOutput> {
        let mut slices: BTreeMap<Vec<i64>, Slice> = BTreeMap::new();
        let mut new_slice = || Slice { window: vec![], targets: vec![], vmons: vec![] };
        for k in window {
            slices.entry(self.char_u(k)).or_insert_with(&mut new_slice).window.push(k.clone());
        }
        for (t, vec) in targets.iter().enumerate() {
            let mut parts: BTreeMap<Vec<i64>, SparseVec<Key>> = BTreeMap::new();
            for (k, c) in vec {
                parts.entry(self.char_u(k)).or_default().insert(k.clone(), c.clone());
            }
            for (chi, part) in parts {
                slices.entry(chi).or_insert_with(&mut new_slice).targets.push((t, part));
            }
        }
        let boxed = match source {
            Source::Boxed(vb) => Some(self.boxed_v_monomials(vb)),
            Source::Graded => None,
        };
        let chis: Vec<Vec<i64>> = slices.keys().cloned().collect();
        let vmon_lists: Vec<Vec<Key>> = chis
            .par_iter()
            .map(|chi| match &boxed {
                Some(groups) => groups.get(chi).cloned().unwrap_or_default(),
                None => {
                    let s = &slices[chi];
                    let rep = s.window.first().or_else(|| s.targets[0].1.keys().next()).expect("slice is nonempty");
                    self.graded_v_monomials(rep)
                }
            })
            .collect();
        for (chi, vm) in chis.iter().zip(vmon_lists) {
            slices.get_mut(chi).expect("slice").vmons = vm;
        }
        let all_vmons: Vec<Key> = slices.values().flat_map(|s| s.vmons.iter().cloned()).collect();
        let powers = {
            let mut max = vec![0u32; self.f];
            for (_, e) in &all_vmons {
                for (m, &d) in max.iter_mut().zip(&e.fibers) {
                    *m = (*m).max(d);
                }
            }
            self.powers_up_to(&max)
        };
        let work: Vec<&Slice> = slices.values().collect();
        let outputs: Vec<SliceOutput> = work
            .par_iter()
            .map(|s| self.solve_slice(s, &powers, track))
            .collect::<Result<_>>()?;
        let mut out = RunOutput {
            slices: work.len(),
            v_monomials: all_vmons.len(),
            targets: vec![TargetOutcome::default(); targets.len()],
            ..Default::default()
        };
        for o in outputs {
            out.generators.extend(o.generators);
            for (t, part) in o.targets {
                let dst = &mut out.targets[t];
                dst.rep.extend(part.rep);
                dst.beta.extend(part.beta);
                dst.leftover |= part.leftover;
            }
        }
        out.generators.sort();
        Ok(out)
    }

    fn powers_up_to(&self, max: &[u32]) -> Vec<Vec<LaurentPoly>> {
        let fwd = &self.bundle.space().transition().forward;
        let sig = self.bundle.space().u_signature();
        (0..self.f)
            .map(|k| {
                let mut pows = vec![LaurentPoly::one(sig)];
                for d in 1..=max[k] as usize {
                    let next = &pows[d - 1] * &fwd[k + 1];
                    pows.push(next);
                }
                pows
            })
            .collect()
    }

    fn solve_slice(&self, s: &Slice, powers: &[Vec<LaurentPoly>], track: bool) -> Result<SliceOutput> {
        let images: Vec<SparseVec<Key>> = s.vmons.iter().map(|k| self.v_image(powers, k)).collect();
        let mut cols: BTreeSet<&Key> = s.window.iter().collect();
        for img in &images {
            cols.extend(img.keys());
        }
        let cells = (images.len() + s.window.len()).saturating_mul(cols.len());
        if cells > self.max_cells {
            return Err(Error::CellLimit(format!(
                "slice with {} rows and {} columns exceeds CECH_MAX_CELLS = {}",
                images.len() + s.window.len(),
                cols.len(),
                self.max_cells
            )));
        }
        let mut ech = SparseEchelon::new(track);
        for (t, img) in images.iter().enumerate() {
            ech.insert(img, t);
        }
        let nv = images.len();
        let mut generators = Vec::new();
        for (w, k) in s.window.iter().enumerate() {
            let unit: SparseVec<Key> = [(k.clone(), Rational::one())].into_iter().collect();
            if ech.insert(&unit, nv + w) {
                generators.push(k.clone());
            }
        }
        let targets = s
            .targets
            .iter()
            .map(|(t, part)| {
                let red = ech.reduce(part);
                let mut o = TargetOutcome { leftover: !red.remainder.is_empty(), ..Default::default() };
                o.rep = red.remainder;
                for (tag, c) in red.combo {
                    if tag < nv {
                        o.beta.insert(s.vmons[tag].clone(), c);
                    } else {
                        let e = o.rep.entry(s.window[tag - nv].clone()).or_insert_with(Rational::zero);
                        *e += c;
                    }
                }
                o.rep.retain(|_, c| !c.is_zero());
                (*t, o)
            })
            .collect();
        Ok(SliceOutput { generators, targets })
    }

    /// V-monomials whose images can meet the window of `bx`.
    pub fn v_monomials_meeting(&self, bx: &super::DegreeBox, graded: bool) -> Result<Vec<Key>> {
        let window = bx.window(self.r, self.f);
        let mut out: BTreeSet<Key> = BTreeSet::new();
        if graded {
            let mut seen = BTreeSet::new();
            for k in &window {
                if seen.insert(self.char_u(k)) {
                    out.extend(self.graded_v_monomials(k));
                }
            }
        } else {
            let vb = self.initial_vbox(bx.l_lo, bx.fiber_max);
            out.extend(self.boxed_v_monomials(vb).into_values().flatten());
        }
        Ok(out.into_iter().collect())
    }

    /// Full image of a single V-monomial.
    pub fn v_image_single(&self, k: &Key) -> Vec<LaurentPoly> {
        let powers = self.powers_up_to(&k.1.fibers);
        self.v_image_full(&powers, k)
    }

    /// A starting V-box for box mode covering a window down to `l_lo` with
    /// fiber exponents up to `fiber_max`.
    pub fn initial_vbox(&self, l_lo: i64, fiber_max: u32) -> VBox {
        let mut d = 0;
        for p in self.bundle.inverse_transition().iter().flatten() {
            d = d.max(p.max_abs_base_exponent());
        }
        for p in &self.bundle.space().transition().forward {
            d = d.max(p.max_abs_base_exponent());
        }
        let xi = l_lo.unsigned_abs() + d.unsigned_abs() + 2;
        VBox { xi_max: xi.min(u32::MAX as u64) as u32, v_max: fiber_max + 2 }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn negative_part(comps: &[LaurentPoly]) -> SparseVec<Key> {
    let mut out = SparseVec::new();
    for (i, p) in comps.iter().enumerate() {
        for (e, c) in p.terms() {
            if e.base < 0 {
                out.insert((i, e.clone()), c.clone());
            }
        }
    }
    out
}

/// Enumerates fiber multi-indices with `sum fib[k] * w[k] <= rem`, calling
/// `visit(rem - sum, fib)`.
fn enumerate_weighted(rem: i64, k: usize, w: &[i64], fib: &mut Vec<u32>, visit: &mut dyn FnMut(i64, &[u32])) {
    if k == w.len() {
        visit(rem, fib);
        return;
    }
    let mut d = 0u32;
    let mut left = rem;
    while left >= 0 {
        fib[k] = d;
        enumerate_weighted(left, k + 1, w, fib, visit);
        d += 1;
        left -= w[k];
    }
    fib[k] = 0;
}

/// Odometer over `[0, cap]^n`.
pub(crate) fn next_multi_index(idx: &mut [u32], cap: u32) -> bool {
    for d in idx.iter_mut() {
        if *d < cap {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// A grading in the span of `kernel` under which `xi` and every `v_k` have
/// positive weight, so each slice holds finitely many V-monomials.
fn positive_grading(kernel: &[Vec<i64>], nvar: usize, lead_v: &[Vec<i64>]) -> Option<Vec<i64>> {
    if kernel.is_empty() {
        return None;
    }
    let rows: Vec<Vec<Rational>> =
        kernel.iter().map(|g| g.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
    let (red, pivots) = rref(&QMatrix::from_rows(rows).ok()?);
    let basis: Vec<Vec<Rational>> = pivots
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < nvar)
        .map(|(i, _)| red.row(i).to_vec())
        .collect();
    if basis.is_empty() {
        return None;
    }
    let m = basis.len();
    let bound = 4i64;
    let mut coeffs: Vec<Vec<i64>> = Vec::new();
    let mut idx = vec![0u32; m];
    loop {
        coeffs.push(idx.iter().map(|&d| d as i64 - bound).collect());
        if !next_multi_index(&mut idx, (2 * bound) as u32) {
            break;
        }
    }
    coeffs.sort_by_key(|c| (c.iter().map(|x| x.abs()).sum::<i64>(), c.clone()));
    let n = basis[0].len();
    for c in coeffs {
        let mut p = vec![Rational::zero(); n];
        for (ci, row) in c.iter().zip(&basis) {
            if *ci != 0 {
                for (x, y) in p.iter_mut().zip(row) {
                    *x += y * Rational::from_integer((*ci).into());
                }
            }
        }
        let xi_w = -p[0].clone();
        if !xi_w.is_positive() {
            continue;
        }
        let ok = lead_v.iter().all(|l| {
            let w: Rational =
                l.iter().zip(&p).map(|(&a, b)| b * Rational::from_integer(a.into())).sum();
            w.is_positive()
        });
        if !ok {
            continue;
        }
        let den = p.iter().fold(num_bigint::BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        let scale = Rational::from_integer(den);
        return p.iter().map(|x| (x * &scale).to_integer().to_i64()).collect();
    }
    None
}
