//! Dense brute-force oracle for H^1 on a finite box, independent of the
//! sliced engine: every V-monomial cochain in a box is pushed through the
//! coboundary map, and ranks are taken by plain Gaussian elimination.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::Zero;
use twochart::bundle::TransitionBundle;
use twochart::cech::DegreeBox;
use twochart::ring::{Exponent, LaurentPoly, Rational};

type Key = (usize, Exponent);

/// Incremental echelon basis over dense vectors.
struct Basis {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Basis {
    fn new() -> Self {
        Basis { rows: Vec::new() }
    }

    fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (p, b) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone() / b[*p].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    if !y.is_zero() {
                        *x -= f.clone() * y.clone();
                    }
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

pub struct Oracle {
    window: Vec<Key>,
    /// negative-l parts of the coboundary images, keyed by monomial
    images: Vec<BTreeMap<Key, Rational>>,
}

fn multi_indices(n: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=cap).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

impl Oracle {
    /// V-cochains `e_c xi^p v^J` with `p <= xi_max` and every `J_i <= v_max`.
    pub fn new(bundle: &TransitionBundle, bx: &DegreeBox, xi_max: u32, v_max: u32) -> Self {
        let space = bundle.space();
        let f = space.fibers();
        let r = bundle.rank();
        let vsig = space.v_signature();
        let minv = bundle.inverse_transition();
        let mut images = Vec::new();
        for c in 0..r {
            for p in 0..=xi_max {
                for j in multi_indices(f, v_max) {
                    let mono = LaurentPoly::monomial(vsig, Exponent::new(p as i64, j, vec![]), Rational::from_integer(1.into()));
                    let pulled = space.pull_to_u(&mono).unwrap();
                    let mut img = BTreeMap::new();
                    for (i, row) in minv.iter().enumerate() {
                        for (e, x) in (&row[c] * &pulled).terms() {
                            if e.base < 0 {
                                img.insert((i, e.clone()), x.clone());
                            }
                        }
                    }
                    images.push(img);
                }
            }
        }
        let window = bx.window_monomials(r, f);
        Oracle { window, images }
    }

    fn rows(&self) -> (BTreeMap<Key, usize>, usize) {
        // window rows first, then everything else
        let mut idx = BTreeMap::new();
        for k in &self.window {
            let n = idx.len();
            idx.insert(k.clone(), n);
        }
        let nwin = idx.len();
        for img in &self.images {
            for k in img.keys() {
                if !idx.contains_key(k) {
                    let n = idx.len();
                    idx.insert(k.clone(), n);
                }
            }
        }
        (idx, nwin)
    }

    /// Rank of `[[A_out, 0], [A_win, E_extra]]` where `extra` are window
    /// monomials added as unit columns.
    fn rank_with(&self, extra: &[Key], drop_window: bool) -> usize {
        let (idx, nwin) = self.rows();
        let n = idx.len();
        let mut basis = Basis::new();
        let mut rank = 0;
        for img in &self.images {
            let mut v = vec![Rational::zero(); n];
            for (k, x) in img {
                let i = idx[k];
                if !(drop_window && i < nwin) {
                    v[i] = x.clone();
                }
            }
            if basis.insert(v) {
                rank += 1;
            }
        }
        for k in extra {
            let mut v = vec![Rational::zero(); n];
            v[idx[k]] = Rational::from_integer(1.into());
            if basis.insert(v) {
                rank += 1;
            }
        }
        rank
    }

    /// Dimension of the window modulo coboundaries.
    pub fn h1_count(&self) -> usize {
        let full = self.rank_with(&[], false);
        let out = self.rank_with(&[], true);
        self.window.len() - (full - out)
    }

    /// Whether `keys` stay independent modulo coboundaries.
    pub fn independent(&self, keys: &[Key]) -> bool {
        self.rank_with(keys, false) == self.rank_with(&[], false) + keys.len()
    }

    pub fn restrict_window(mut self, keep: impl Fn(&Key) -> bool) -> Self {
        self.window.retain(|k| keep(k));
        self
    }

    pub fn window(&self) -> &[Key] {
        &self.window
    }
}
