//! Birkhoff factorization of a Laurent-polynomial matrix in `z` with unit
//! determinant: `M = R(z^-1) * diag(z^-a_i) * S(z)` with `R` invertible over
//! `C[z^-1]` and `S` invertible over `C[z]`. Changing the V-frame multiplies
//! `M` on the left by the former, changing the U-frame on the right by the
//! latter, so `(a_i)` is the splitting type.

use num_traits::Zero;

use crate::bundle::{determinant, matrix_mul, unit_inverse, PolyMatrix};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, QMatrix};
use crate::ring::{Exponent, LaurentPoly, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Birkhoff {
    /// Nondecreasing `(a_1, .., a_r)`.
    pub splitting: Vec<i64>,
    /// Invertible over `C[z^-1]`.
    pub left: PolyMatrix,
    pub diagonal: PolyMatrix,
    /// Invertible over `C[z]`.
    pub right: PolyMatrix,
}

fn column_degree(a: &PolyMatrix, j: usize) -> i64 {
    a.iter().filter_map(|row| row[j].max_base_exponent()).max().expect("nonzero column")
}

fn coeff_at(p: &LaurentPoly, d: i64) -> Rational {
    p.terms().find(|(e, _)| e.base == d).map(|(_, c)| c.clone()).unwrap_or_default()
}

/// Splitting type together with a factorization that re-multiplies to `m`.
pub fn birkhoff(m: &PolyMatrix) -> Result<Birkhoff> {
    let r = m.len();
    if r == 0 || m.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionMismatch("splitting type needs a square matrix".into()));
    }
    let sig = m[0][0].signature().clone();
    if sig.fibers != 0 {
        return Err(Error::Input("restrict the matrix to the line first".into()));
    }
    let det = determinant(m)?;
    if det.as_unit_monomial().is_none() {
        return Err(Error::NonUnitDeterminant(format!("det = {det}")));
    }
    let n = m.iter().flatten().filter_map(LaurentPoly::min_base_exponent).min().unwrap_or(0).min(0);
    let shift = -n;
    // a = z^shift * m is a polynomial matrix; column-reduce it over C[z].
    let mut a: PolyMatrix = m.iter().map(|row| row.iter().map(|p| p.shift_base(shift)).collect()).collect();
    let mut s: PolyMatrix = crate::bundle::identity_matrix(&sig, r);
    loop {
        let degs: Vec<i64> = (0..r).map(|j| column_degree(&a, j)).collect();
        let lead = QMatrix::from_rows(
            (0..r).map(|i| (0..r).map(|j| coeff_at(&a[i][j], degs[j])).collect()).collect(),
        )?;
        let Some(c) = nullspace(&lead).into_iter().next() else { break };
        let j0 = (0..r)
            .filter(|&j| !c[j].is_zero())
            .max_by_key(|&j| (degs[j], std::cmp::Reverse(j)))
            .expect("null vector is nonzero");
        let inv = c[j0].recip();
        for j in (0..r).filter(|&j| j != j0 && !c[j].is_zero()) {
            let f = &c[j] * &inv;
            let mono = LaurentPoly::monomial(&sig, Exponent::new(degs[j0] - degs[j], vec![], vec![0; sig.params]), f);
            for mat in [&mut a, &mut s] {
                for row in mat.iter_mut() {
                    let add = &row[j] * &mono;
                    row[j0] = &row[j0] + &add;
                }
            }
        }
    }
    let degs: Vec<i64> = (0..r).map(|j| column_degree(&a, j)).collect();
    // a * s_applied = R(z^-1) * diag(z^degs); m = z^-shift * a
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&j| (shift - degs[j], j));
    let splitting: Vec<i64> = order.iter().map(|&j| shift - degs[j]).collect();
    let left: PolyMatrix =
        (0..r).map(|i| order.iter().map(|&j| a[i][j].shift_base(-degs[j])).collect()).collect();
    let diagonal: PolyMatrix = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { LaurentPoly::base_power(&sig, -splitting[i]) } else { LaurentPoly::zero(&sig) })
                .collect()
        })
        .collect();
    let s_inv = unit_inverse(&s)?;
    let right: PolyMatrix = order.iter().map(|&j| s_inv[j].clone()).collect();
    let out = Birkhoff { splitting, left, diagonal, right };
    out.check(m)?;
    Ok(out)
}

impl Birkhoff {
    /// Re-multiplies the factors and checks the side conditions.
    pub fn check(&self, m: &PolyMatrix) -> Result<()> {
        let prod = matrix_mul(&matrix_mul(&self.left, &self.diagonal)?, &self.right)?;
        if &prod != m {
            return Err(Error::NonInvertibleMatrix("Birkhoff factors do not multiply back".into()));
        }
        let poly_in = |mat: &PolyMatrix, neg: bool| {
            mat.iter().flatten().all(|p| {
                p.terms().all(|(e, _)| if neg { e.base <= 0 } else { e.base >= 0 })
            })
        };
        let unit_det = |mat: &PolyMatrix| determinant(mat).map(|d| d.as_unit_monomial().is_some_and(|(_, e)| e == 0));
        if !poly_in(&self.left, true) || !unit_det(&self.left)? {
            return Err(Error::NonInvertibleMatrix("left factor is not invertible over C[z^-1]".into()));
        }
        if !poly_in(&self.right, false) || !unit_det(&self.right)? {
            return Err(Error::NonInvertibleMatrix("right factor is not invertible over C[z]".into()));
        }
        Ok(())
    }
}

/// The splitting type alone.
pub fn splitting_type(m: &PolyMatrix) -> Result<Vec<i64>> {
    Ok(birkhoff(m)?.splitting)
}
