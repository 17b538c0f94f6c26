//! Vector bundles on a two-chart space, given by a transition matrix on the
//! overlap. `M` takes U-frame components to V-frame components, so a section
//! `s_U` over U corresponds to `s_V = M s_U`; `O(m)` has `M = [z^-m]`.
//! Both `M` and its inverse are stored as matrices of U-frame functions.

use crate::error::{Error, Result};
use crate::geometry::TwoChartSpace;
use crate::ring::{LaurentPoly, Signature, Substitution};

pub type PolyMatrix = Vec<Vec<LaurentPoly>>;

pub fn identity_matrix(sig: &Signature, n: usize) -> PolyMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { LaurentPoly::one(sig) } else { LaurentPoly::zero(sig) })
                .collect()
        })
        .collect()
}

pub fn matrix_mul(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
    let inner = b.len();
    if a.iter().any(|r| r.len() != inner) {
        return Err(Error::DimensionMismatch("matrix product".into()));
    }
    let cols = b.first().map_or(0, Vec::len);
    let sig = a[0][0].signature().clone();
    let mut out = Vec::with_capacity(a.len());
    for row in a {
        let mut r = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut acc = LaurentPoly::zero(&sig);
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() || b[k][j].is_zero() {
                    continue;
                }
                acc = acc.checked_add(&x.checked_mul(&b[k][j])?)?;
            }
            r.push(acc);
        }
        out.push(r);
    }
    Ok(out)
}

fn transpose(a: &PolyMatrix) -> PolyMatrix {
    let n = a.first().map_or(0, Vec::len);
    (0..n).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

fn map_entries(a: &PolyMatrix, f: impl Fn(&LaurentPoly) -> Result<LaurentPoly>) -> Result<PolyMatrix> {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

/// Determinant by expansion over column subsets; fine for the ranks used
/// here (at most 9 for `End` of a rank-3 bundle).
pub fn determinant(a: &PolyMatrix) -> Result<LaurentPoly> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let sig = a[0][0].signature().clone();
    // minors[mask] = det of the top |mask| rows restricted to columns in mask
    let mut minors = vec![LaurentPoly::zero(&sig); 1 << n];
    minors[0] = LaurentPoly::one(&sig);
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = LaurentPoly::zero(&sig);
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let rest = mask & !(1 << col);
            if a[row][col].is_zero() || minors[rest].is_zero() {
                continue;
            }
            // expansion along the last chosen row
            let above = (mask >> (col + 1)).count_ones();
            let term = a[row][col].checked_mul(&minors[rest])?;
            acc = if above % 2 == 1 { acc.checked_sub(&term)? } else { acc.checked_add(&term)? };
        }
        minors[mask] = acc;
    }
    Ok(minors[(1 << n) - 1].clone())
}

/// Inverse of a matrix whose determinant is a unit monomial, by adjugate.
pub fn unit_inverse(a: &PolyMatrix) -> Result<PolyMatrix> {
    let n = a.len();
    let det = determinant(a)?;
    let det_inv = det
        .unit_inverse()
        .ok_or_else(|| Error::NonUnitDeterminant(format!("det = {det}")))?;
    if n == 1 {
        return Ok(vec![vec![det_inv]]);
    }
    let mut out = vec![Vec::with_capacity(n); n];
    for (j, out_row) in out.iter_mut().enumerate() {
        for i in 0..n {
            // (i, j) entry of the inverse is cofactor C_{j i} / det
            let minor: PolyMatrix = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c].clone()).collect())
                .collect();
            let mut c = determinant(&minor)?.checked_mul(&det_inv)?;
            if (i + j) % 2 == 1 {
                c = -c;
            }
            out_row.push(c);
        }
    }
    // out is indexed [j][i]; transpose back to [i][j]
    Ok(transpose(&out))
}

#[derive(Clone, Debug)]
pub struct TransitionBundle {
    name: String,
    m: PolyMatrix,
    minv: PolyMatrix,
    space: TwoChartSpace,
}

impl TransitionBundle {
    /// Checks shapes, frames and `M Minv = Minv M = I`.
    pub fn new(space: &TwoChartSpace, name: impl Into<String>, m: PolyMatrix, minv: PolyMatrix) -> Result<Self> {
        let r = m.len();
        let sig = space.u_signature();
        let square = |a: &PolyMatrix| a.len() == r && a.iter().all(|row| row.len() == r);
        if r == 0 || !square(&m) || !square(&minv) {
            return Err(Error::DimensionMismatch("transition matrices must be square of equal size".into()));
        }
        for p in m.iter().chain(&minv).flatten() {
            if p.signature() != sig {
                return Err(Error::Signature(format!("entry {p} is not a U-frame function of {}", space.name())));
            }
        }
        let id = identity_matrix(sig, r);
        if matrix_mul(&m, &minv)? != id || matrix_mul(&minv, &m)? != id {
            return Err(Error::NonInvertibleMatrix("M * Minv is not the identity".into()));
        }
        Ok(TransitionBundle { name: name.into(), m, minv, space: space.clone() })
    }

    /// Bundle from `M` alone; the inverse is computed when `det M` is a unit.
    pub fn from_transition(space: &TwoChartSpace, name: impl Into<String>, m: PolyMatrix) -> Result<Self> {
        let minv = unit_inverse(&m)?;
        Self::new(space, name, m, minv)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn transition(&self) -> &PolyMatrix {
        &self.m
    }

    pub fn inverse_transition(&self) -> &PolyMatrix {
        &self.minv
    }

    pub fn space(&self) -> &TwoChartSpace {
        &self.space
    }

    pub fn det(&self) -> Result<LaurentPoly> {
        determinant(&self.m)
    }

    /// Every entry with the fiber coordinates set to zero.
    pub fn restrict_to_line(&self) -> PolyMatrix {
        self.m.iter().map(|r| r.iter().map(LaurentPoly::restrict_to_line).collect()).collect()
    }

    /// `M` as strings, row by row.
    pub fn transition_strings(&self) -> Vec<Vec<String>> {
        self.m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
    }

    /// Same transition on a space with identical U-frame ring; used when a
    /// space is specialised or renamed.
    pub fn with_space(&self, space: &TwoChartSpace) -> Result<Self> {
        Self::new(space, self.name.clone(), self.m.clone(), self.minv.clone())
    }
}

fn name_of_degree(m: i64) -> String {
    format!("O({m})")
}

pub fn line_bundle(space: &TwoChartSpace, m: i64) -> TransitionBundle {
    let sig = space.u_signature();
    TransitionBundle::new(
        space,
        name_of_degree(m),
        vec![vec![LaurentPoly::base_power(sig, -m)]],
        vec![vec![LaurentPoly::base_power(sig, m)]],
    )
    .expect("z^-m is a unit")
}

/// Jacobian of the gluing. Minv is the Jacobian of the inverse gluing, pulled
/// back to U-frame functions.
pub fn tangent_bundle(space: &TwoChartSpace) -> Result<TransitionBundle> {
    let n = space.fibers() + 1;
    let map = space.transition();
    let m: PolyMatrix = map.forward.iter().map(|f| (0..n).map(|j| f.derivative(j)).collect()).collect();
    let minv: PolyMatrix = map
        .inverse
        .iter()
        .map(|g| (0..n).map(|j| space.pull_to_u(&g.derivative(j))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    TransitionBundle::new(space, "T", m, minv)
}

pub fn dual(b: &TransitionBundle) -> Result<TransitionBundle> {
    TransitionBundle::new(&b.space, format!("{}*", b.name), transpose(&b.minv), transpose(&b.m))
}

fn kron(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
    let (ra, rb) = (a.len(), b.len());
    let mut out = Vec::with_capacity(ra * rb);
    for i in 0..ra {
        for k in 0..rb {
            let mut row = Vec::with_capacity(ra * rb);
            for j in 0..ra {
                for l in 0..rb {
                    row.push(a[i][j].checked_mul(&b[k][l])?);
                }
            }
            out.push(row);
        }
    }
    Ok(out)
}

fn same_space(a: &TransitionBundle, b: &TransitionBundle) -> Result<()> {
    if a.space.transition() != b.space.transition() {
        return Err(Error::Input(format!("{} and {} live on different spaces", a.name, b.name)));
    }
    Ok(())
}

/// Tensor product; components are ordered row-major, `(i, k) -> i * r_b + k`.
pub fn tensor(a: &TransitionBundle, b: &TransitionBundle) -> Result<TransitionBundle> {
    same_space(a, b)?;
    TransitionBundle::new(
        &a.space,
        format!("{} (x) {}", a.name, b.name),
        kron(&a.m, &b.m)?,
        kron(&a.minv, &b.minv)?,
    )
}

/// `End E = E (x) E*`: a matrix section `S` transforms as `M S M^-1`. Entry
/// `(row, col)` (1-based) sits at flat component `r (row - 1) + col`.
pub fn end_bundle(b: &TransitionBundle) -> Result<TransitionBundle> {
    Ok(tensor(b, &dual(b)?)?.renamed(format!("End({})", b.name)))
}

pub fn direct_sum(a: &TransitionBundle, b: &TransitionBundle) -> Result<TransitionBundle> {
    same_space(a, b)?;
    let sig = a.space.u_signature();
    let (ra, rb) = (a.rank(), b.rank());
    let block = |x: &PolyMatrix, y: &PolyMatrix| -> PolyMatrix {
        let mut out = vec![vec![LaurentPoly::zero(sig); ra + rb]; ra + rb];
        for i in 0..ra {
            for j in 0..ra {
                out[i][j] = x[i][j].clone();
            }
        }
        for i in 0..rb {
            for j in 0..rb {
                out[ra + i][ra + j] = y[i][j].clone();
            }
        }
        out
    };
    TransitionBundle::new(
        &a.space,
        format!("{} + {}", a.name, b.name),
        block(&a.m, &b.m),
        block(&a.minv, &b.minv),
    )
}

/// Extension of `O(a)` by `O(b)`: `M = [[z^-b, z^-b p], [0, z^-a]]`, so `p`
/// represents a class in `H^1(O(b - a))`.
pub fn extension_bundle(space: &TwoChartSpace, b: i64, a: i64, p: &LaurentPoly) -> Result<TransitionBundle> {
    let sig = space.u_signature();
    if p.signature() != sig {
        return Err(Error::Signature(format!("{p} is not a U-frame function of {}", space.name())));
    }
    let zb = LaurentPoly::base_power(sig, -b);
    let za = LaurentPoly::base_power(sig, -a);
    let zero = LaurentPoly::zero(sig);
    let m = vec![vec![zb.clone(), zb * p.clone()], vec![zero.clone(), za]];
    let minv = vec![
        vec![LaurentPoly::base_power(sig, b), -(p.clone() * LaurentPoly::base_power(sig, a))],
        vec![zero, LaurentPoly::base_power(sig, a)],
    ];
    TransitionBundle::new(space, format!("Ext(O({a}), O({b}))"), m, minv)
}

/// Pulls a bundle back along the projection that keeps the fiber coordinates
/// listed in `fiber_map` (source fiber `i` goes to target fiber
/// `fiber_map[i]`). The source gluing must be the restriction of the target
/// gluing to those coordinates.
pub fn pullback_bundle(
    bundle: &TransitionBundle,
    target: &TwoChartSpace,
    fiber_map: &[usize],
) -> Result<TransitionBundle> {
    let src = bundle.space();
    let (ssig, tsig) = (src.u_signature(), target.u_signature());
    if fiber_map.len() != ssig.fibers || fiber_map.iter().any(|&i| i >= tsig.fibers) {
        return Err(Error::IncompatibleTransition(format!(
            "fiber map {fiber_map:?} does not fit {} -> {}",
            src.name(),
            target.name()
        )));
    }
    if ssig.params != tsig.params {
        return Err(Error::IncompatibleTransition("parameter counts differ".into()));
    }
    let sub = Substitution::new(
        LaurentPoly::base_power(tsig, 1),
        fiber_map.iter().map(|&i| LaurentPoly::fiber_var(tsig, i)).collect(),
        (0..tsig.params).map(|k| LaurentPoly::param_var(tsig, k)).collect(),
    )?;
    let sf = &src.transition().forward;
    let tf = &target.transition().forward;
    let mut pairs = vec![(0usize, 0usize)];
    pairs.extend(fiber_map.iter().enumerate().map(|(i, &j)| (i + 1, j + 1)));
    for (i, j) in pairs {
        let img = sub.apply(&sf[i])?;
        if img != tf[j] {
            return Err(Error::IncompatibleTransition(format!(
                "{} coordinate {i} maps to {img}, but {} has {}",
                src.name(),
                target.name(),
                tf[j]
            )));
        }
    }
    let m = map_entries(&bundle.m, |p| sub.apply(p))?;
    let minv = map_entries(&bundle.minv, |p| sub.apply(p))?;
    TransitionBundle::new(target, format!("pullback {}", bundle.name), m, minv)
}
