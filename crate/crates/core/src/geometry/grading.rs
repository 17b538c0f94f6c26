use super::{ChartMap, TwoChartSpace};
use crate::linalg::integer_kernel;
use crate::ring::{Exponent, LaurentPoly};

/// Integer weights for `(z, u1, .., uf)` under which every transition
/// monomial is homogeneous.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradingVector {
    pub weights: Vec<i64>,
}

impl GradingVector {
    pub fn weight_of(&self, e: &Exponent) -> i64 {
        self.weights[0] * e.base
            + e.fibers.iter().zip(&self.weights[1..]).map(|(&d, w)| d as i64 * w).sum::<i64>()
    }
}

pub(crate) fn variable_part(e: &Exponent) -> Vec<i64> {
    std::iter::once(e.base).chain(e.fibers.iter().map(|&d| d as i64)).collect()
}

fn leading(p: &LaurentPoly) -> Vec<i64> {
    p.terms().next().map(|(e, _)| variable_part(e)).expect("transition coordinate is nonzero")
}

/// U-exponent vector carrying the same weight as a V-frame monomial: `xi`
/// weighs like `z^-1` and `v_k` like the leading monomial of its image.
pub(crate) fn v_monomial_in_u_weights(map: &ChartMap, e: &Exponent) -> Vec<i64> {
    let n = map.fibers() + 1;
    let mut x = vec![0i64; n];
    x[0] = -e.base;
    for (k, &d) in e.fibers.iter().enumerate() {
        if d > 0 {
            for (xi, li) in x.iter_mut().zip(leading(&map.forward[k + 1])) {
                *xi += d as i64 * li;
            }
        }
    }
    x
}

/// Exponent differences that every grading must annihilate. Parameter
/// exponents carry weight zero.
pub fn relation_vectors(map: &ChartMap) -> Vec<Vec<i64>> {
    let n = map.fibers() + 1;
    let mut rows = Vec::new();
    for img in &map.forward[1..] {
        let lead = leading(img);
        for (e, _) in img.terms().skip(1) {
            rows.push(variable_part(e).iter().zip(&lead).map(|(a, b)| a - b).collect());
        }
    }
    for (i, img) in map.inverse.iter().enumerate() {
        let mut coord = vec![0i64; n];
        coord[i] = 1;
        for (e, _) in img.terms() {
            let x = v_monomial_in_u_weights(map, e);
            let row: Vec<i64> = x.iter().zip(&coord).map(|(a, b)| a - b).collect();
            if row.iter().any(|&r| r != 0) {
                rows.push(row);
            }
        }
    }
    rows.sort();
    rows.dedup();
    rows
}

/// Basis of the lattice of conserved gradings.
pub fn grading_lattice(space: &TwoChartSpace) -> Vec<GradingVector> {
    let n = space.fibers() + 1;
    let rows = relation_vectors(space.transition());
    integer_kernel(&rows, n).into_iter().map(|weights| GradingVector { weights }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Family, TwoChartSpace};
    use crate::ring::{Frame, Signature};

    fn check_homogeneous(space: &TwoChartSpace, basis: &[GradingVector]) {
        let map = space.transition();
        for g in basis {
            for img in &map.forward[1..] {
                let ws: Vec<i64> = img.terms().map(|(e, _)| g.weight_of(e)).collect();
                assert!(ws.windows(2).all(|w| w[0] == w[1]), "{img} not homogeneous");
            }
        }
    }

    #[test]
    fn standard_w2_has_full_rank() {
        let w2 = TwoChartSpace::standard(Family::W, 2);
        let basis = grading_lattice(&w2);
        assert_eq!(basis.len(), 3);
        check_homogeneous(&w2, &basis);
    }

    #[test]
    fn deformed_w2_has_rank_two() {
        let space =
            TwoChartSpace::new("W2def", crate::geometry::tests::deformed_w2_map(), vec![]).unwrap();
        let basis = grading_lattice(&space);
        assert_eq!(basis.len(), 2);
        check_homogeneous(&space, &basis);
        // w(u1) + 2 w(z) = w(u2) + w(z) for every basis vector
        for g in &basis {
            assert_eq!(g.weights[1] + 2 * g.weights[0], g.weights[2] + g.weights[0]);
        }
    }

    #[test]
    fn deformed_z2_has_rank_one() {
        let u = Signature::new(1, 0, Frame::U);
        let v = Signature::new(1, 0, Frame::V);
        let map = ChartMap {
            forward: vec![
                LaurentPoly::base_power(&u, -1),
                LaurentPoly::base_power(&u, 2) * LaurentPoly::fiber_var(&u, 0)
                    + LaurentPoly::base_power(&u, 1).scale(&crate::ring::rat(3)),
            ],
            inverse: vec![
                LaurentPoly::base_power(&v, -1),
                LaurentPoly::base_power(&v, 2) * LaurentPoly::fiber_var(&v, 0)
                    - LaurentPoly::base_power(&v, 1).scale(&crate::ring::rat(3)),
            ],
        };
        let space = TwoChartSpace::new("Z2def", map, vec![]).unwrap();
        let basis = grading_lattice(&space);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].weights[0], -basis[0].weights[1]);
    }
}
