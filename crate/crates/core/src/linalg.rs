//! Exact linear algebra over the rationals.
//!
//! Dense routines clear denominators row by row and run Bareiss fraction-free
//! elimination over the integers with a fixed first-nonzero pivot rule, so
//! results are deterministic. [`SparseEchelon`] is the incremental reducer used
//! by the cohomology engine, where vectors are indexed by monomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| crate::ring::rat(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Integer matrix with each row scaled by the lcm of its denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }
}

/// Bareiss elimination to row echelon form in place. Returns the pivot
/// columns; the pivot for each column is the first row (at or below the
/// current one) with a nonzero entry.
fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMatrix) -> usize {
    let mut a = m.integer_rows();
    bareiss(&mut a, m.cols).len()
}

/// Solves `m x = b`. `Ok(None)` means the system is inconsistent. Free
/// variables are set to zero.
pub fn solve(m: &QMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side {}",
            m.rows,
            b.len()
        )));
    }
    let mut aug = QMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, b[i].clone());
    }
    let mut a = aug.integer_rows();
    let pivots = bareiss(&mut a, m.cols + 1);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = Rational::from_integer(a[r][m.cols].clone());
        for j in c + 1..m.cols {
            if !a[r][j].is_zero() {
                acc -= Rational::from_integer(a[r][j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rational::from_integer(a[r][c].clone());
    }
    Ok(Some(x))
}

/// Standard basis vectors of the ambient space (dimension = rows of `m`)
/// spanning a complement of the column space of `m`. These are the
/// coordinates that are not pivots when the columns are eliminated in order.
pub fn cokernel_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    let t = m.transpose();
    let mut a = t.integer_rows();
    let pivots = bareiss(&mut a, t.cols);
    (0..m.rows)
        .filter(|i| !pivots.contains(i))
        .map(|i| {
            let mut e = vec![Rational::zero(); m.rows];
            e[i] = Rational::one();
            e
        })
        .collect()
}

/// Reduced row echelon form over the rationals, with pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, r * a.cols + j);
            }
        }
        let inv = a.get(r, c).recip();
        for j in 0..a.cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in 0..a.cols {
                let v = a.get(i, j) - &f * a.get(r, j);
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(m: &QMatrix) -> Vec<Vec<Rational>> {
    let (a, pivots) = rref(m);
    (0..m.cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![Rational::zero(); m.cols];
            x[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -a.get(r, free).clone();
            }
            x
        })
        .collect()
}

/// Basis of the integer kernel `{x in Z^n : a x = 0}` of an integer matrix
/// with `n` columns. Unimodular column operations bring `a` to column echelon
/// form while the same operations act on the identity; the columns that end up
/// over zero columns of `a` form a lattice basis of the kernel.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let m = a.len();
    // Work on columns: col[j] = (a[.][j], e_j).
    let mut cols: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..n)
        .map(|j| {
            let top = (0..m).map(|i| BigInt::from(a[i][j])).collect();
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            (top, e)
        })
        .collect();
    let mut start = 0;
    for i in 0..m {
        if start == n {
            break;
        }
        // Smallest nonzero |entry| in row i among the remaining columns.
        while let Some(p) = (start..n)
            .filter(|&j| !cols[j].0[i].is_zero())
            .min_by_key(|&j| (cols[j].0[i].magnitude().clone(), j))
        {
            cols.swap(start, p);
            let mut done = true;
            for j in start + 1..n {
                if cols[j].0[i].is_zero() {
                    continue;
                }
                let q = cols[j].0[i].div_floor(&cols[start].0[i]);
                let (pivot_top, pivot_e) = cols[start].clone();
                for (x, y) in cols[j].0.iter_mut().zip(&pivot_top) {
                    *x -= &q * y;
                }
                for (x, y) in cols[j].1.iter_mut().zip(&pivot_e) {
                    *x -= &q * y;
                }
                if !cols[j].0[i].is_zero() {
                    done = false;
                }
            }
            if done {
                start += 1;
                break;
            }
        }
    }
    cols[start..]
        .iter()
        .map(|(_, e)| {
            e.iter()
                .map(|x| i64::try_from(x).expect("kernel entry exceeds i64"))
                .collect()
        })
        .collect()
}

pub type SparseVec<K> = BTreeMap<K, Rational>;

#[derive(Clone, Debug)]
struct EchelonRow<K> {
    vec: SparseVec<K>,
    combo: BTreeMap<usize, Rational>,
}

/// Incremental echelon basis over sparse vectors. Each stored row is monic at
/// its smallest key. When tracking is on, each row also records how it was
/// built from the tagged input vectors, so reductions yield certificates.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, EchelonRow<K>>,
    track: bool,
}

/// Outcome of [`SparseEchelon::reduce`]: `input = remainder + sum combo[t] * source[t]`.
#[derive(Clone, Debug)]
pub struct Reduction<K> {
    pub remainder: SparseVec<K>,
    pub combo: BTreeMap<usize, Rational>,
}

fn axpy<K: Ord + Clone>(dst: &mut SparseVec<K>, f: &Rational, src: &SparseVec<K>) {
    for (k, v) in src {
        let e = dst.entry(k.clone()).or_insert_with(Rational::zero);
        *e += f * v;
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

fn axpy_combo(dst: &mut BTreeMap<usize, Rational>, f: &Rational, src: &BTreeMap<usize, Rational>) {
    for (k, v) in src {
        let e = dst.entry(*k).or_insert_with(Rational::zero);
        *e += f * v;
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new(track: bool) -> Self {
        SparseEchelon { rows: BTreeMap::new(), track }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> Reduction<K> {
        let mut rem = v.clone();
        let mut combo = BTreeMap::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = rem
                .iter()
                .filter(|(k, _)| cursor.as_ref().is_none_or(|c| *k > c))
                .find(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = next else { break };
            let row = &self.rows[&k];
            axpy(&mut rem, &-c.clone(), &row.vec);
            if self.track {
                axpy_combo(&mut combo, &c, &row.combo);
            }
            cursor = Some(k);
        }
        Reduction { remainder: rem, combo }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).remainder.is_empty()
    }

    /// Adds `v` (tagged `tag`). Returns true if it was independent.
    pub fn insert(&mut self, v: &SparseVec<K>, tag: usize) -> bool {
        let red = self.reduce(v);
        let Some((pivot, lead)) = red.remainder.iter().next().map(|(k, c)| (k.clone(), c.clone()))
        else {
            return false;
        };
        let inv = lead.recip();
        let vec = red.remainder.iter().map(|(k, c)| (k.clone(), c * &inv)).collect();
        let combo = if self.track {
            let mut combo = BTreeMap::new();
            combo.insert(tag, Rational::one());
            axpy_combo(&mut combo, &-Rational::one(), &red.combo);
            combo.into_iter().map(|(k, c)| (k, c * &inv)).collect()
        } else {
            BTreeMap::new()
        };
        self.rows.insert(pivot, EchelonRow { vec, combo });
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, ratio};

    #[test]
    fn identity_rank() {
        assert_eq!(rank(&QMatrix::identity(5)), 5);
        assert_eq!(rank(&QMatrix::zeros(3, 4)), 0);
    }

    #[test]
    fn solve_scalar() {
        let m = QMatrix::from_i64(&[vec![2]]).unwrap();
        assert_eq!(solve(&m, &[rat(1)]).unwrap(), Some(vec![ratio(1, 2)]));
    }

    #[test]
    fn solve_inconsistent() {
        let m = QMatrix::from_i64(&[vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(solve(&m, &[rat(1), rat(3)]).unwrap(), None);
        assert!(matches!(solve(&m, &[rat(1)]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn cokernel_of_single_column() {
        let m = QMatrix::from_i64(&[vec![1], vec![1], vec![0]]).unwrap();
        let basis = cokernel_basis(&m);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], vec![rat(0), rat(1), rat(0)]);
        assert_eq!(basis[1], vec![rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn rational_entries_rank() {
        let m = QMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(3, 2), rat(1)],
        ])
        .unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn nullspace_annihilates() {
        let m = QMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 7]]).unwrap();
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // 2x - 2y = 0 has kernel generated by (1, 1), not (2, 2).
        let k = integer_kernel(&[vec![2, -2]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1]);
        let k = integer_kernel(&[vec![1, 1, -1]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0] + v[1] - v[2], 0);
        }
        assert_eq!(integer_kernel(&[], 3).len(), 3);
    }

    #[test]
    fn sparse_echelon_certificates() {
        let mut ech = SparseEchelon::<u32>::new(true);
        let a: SparseVec<u32> = [(0, rat(1)), (1, rat(1))].into_iter().collect();
        let b: SparseVec<u32> = [(1, rat(1)), (2, rat(2))].into_iter().collect();
        assert!(ech.insert(&a, 10));
        assert!(ech.insert(&b, 11));
        let sum: SparseVec<u32> = [(0, rat(2)), (1, rat(5)), (2, rat(6))].into_iter().collect();
        // sum = 2a + 3b
        let red = ech.reduce(&sum);
        assert!(red.remainder.is_empty());
        assert_eq!(red.combo.get(&10), Some(&rat(2)));
        assert_eq!(red.combo.get(&11), Some(&rat(3)));
        assert!(!ech.insert(&sum, 12));
    }
}
