//! Embedding of the `(k-1)`-parameter family of `Z_k` into the deformation
//! family of the Hirzebruch surface `F_k`, cut out of
//! `C^(k-1) x P^1 x P^(k+1)` by
//! `l0 (x1, .., xk) = l1 (x2 - t1 x0, .., xk - t(k-1) x0, x(k+1))`.
//!
//! Both chart images are checked against every equation with the `t`s kept
//! symbolic, and the two images are checked to be the same projective point
//! on the overlap.

use super::{ChartMap, TwoChartSpace};
use crate::error::{Error, Result};
use crate::ring::{Frame, LaurentPoly, Signature};

/// Homogeneous coordinates of the image of one chart: `l = [l0, l1]` and
/// `x = [x0, .., x(k+1)]`.
#[derive(Clone, Debug)]
pub struct ChartImage {
    pub l: [LaurentPoly; 2],
    pub x: Vec<LaurentPoly>,
}

#[derive(Clone, Debug)]
pub struct HirzebruchImages {
    pub k: usize,
    pub space: TwoChartSpace,
    pub u: ChartImage,
    pub v: ChartImage,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HirzebruchCheck {
    Ok { equations_checked: usize },
    Counterexample { check: String, residual: LaurentPoly },
}

impl HirzebruchCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, HirzebruchCheck::Ok { .. })
    }
}

/// The deformed `Z_k` with symbolic parameters:
/// `(xi, v) = (z^-1, z^k u + t(k-1) z^(k-1) + .. + t1 z)`.
pub fn symbolic_zk_family(k: usize) -> Result<TwoChartSpace> {
    if k == 0 {
        return Err(Error::Input("the Z_k family needs k >= 1".into()));
    }
    let p = k - 1;
    let u = Signature::new(1, p, Frame::U);
    let v = Signature::new(1, p, Frame::V);
    let ki = k as i64;
    let mut fwd = LaurentPoly::base_power(&u, ki) * LaurentPoly::fiber_var(&u, 0);
    let mut inv = LaurentPoly::base_power(&v, ki) * LaurentPoly::fiber_var(&v, 0);
    for s in 1..k {
        let t_u = LaurentPoly::param_var(&u, s - 1);
        let t_v = LaurentPoly::param_var(&v, s - 1);
        fwd = fwd + LaurentPoly::base_power(&u, s as i64) * t_u;
        inv = inv - LaurentPoly::base_power(&v, ki - s as i64) * t_v;
    }
    let map = ChartMap {
        forward: vec![LaurentPoly::base_power(&u, -1), fwd],
        inverse: vec![LaurentPoly::base_power(&v, -1), inv],
    };
    let names = (1..k).map(|s| format!("t{s}")).collect();
    TwoChartSpace::new(format!("Z{k}(t)"), map, names)
}

/// The chart images of the embedding map.
pub fn hirzebruch_images(k: usize) -> Result<HirzebruchImages> {
    let space = symbolic_zk_family(k)?;
    let u = space.u_signature().clone();
    let v = space.v_signature().clone();
    let z = |e: i64| LaurentPoly::base_power(&u, e);
    let xi = |e: i64| LaurentPoly::base_power(&v, e);
    let t_u = |s: usize| LaurentPoly::param_var(&u, s - 1);
    let t_v = |s: usize| LaurentPoly::param_var(&v, s - 1);
    let uu = LaurentPoly::fiber_var(&u, 0);
    let vv = LaurentPoly::fiber_var(&v, 0);
    let ki = k as i64;

    // z_s = z^(k-s+1) u + sum_{m=s}^{k-1} t_m z^(m-s+1)
    let mut ux = vec![-LaurentPoly::one(&u)];
    for s in 1..=k {
        let mut zs = z(ki - s as i64 + 1) * uu.clone();
        for m in s..k {
            zs = zs + t_u(m) * z((m - s + 1) as i64);
        }
        ux.push(zs);
    }
    ux.push(uu.clone());

    // xi_s = xi^(s-1) v - sum_{m=1}^{s-1} t_m xi^(s-1-m)   for 2 <= s <= k
    // xi_(k+1) = xi^k v - sum_{m=1}^{k-1} t_m xi^(k-m)
    let mut vx = vec![-LaurentPoly::one(&v), vv.clone()];
    for s in 2..=k {
        let mut xs = xi(s as i64 - 1) * vv.clone();
        for m in 1..s {
            xs = xs - t_v(m) * xi((s - 1 - m) as i64);
        }
        vx.push(xs);
    }
    let mut last = xi(ki) * vv.clone();
    for m in 1..k {
        last = last - t_v(m) * xi(ki - m as i64);
    }
    vx.push(last);

    Ok(HirzebruchImages {
        k,
        u: ChartImage { l: [LaurentPoly::one(&u), z(1)], x: ux },
        v: ChartImage { l: [xi(1), LaurentPoly::one(&v)], x: vx },
        space,
    })
}

/// Residuals `l0 x_s - l1 y_s` for `s = 1..k`.
fn equation_residuals(img: &ChartImage, k: usize) -> Vec<(String, LaurentPoly)> {
    let sig = img.l[0].signature().clone();
    (1..=k)
        .map(|s| {
            let rhs = if s < k {
                img.x[s + 1].clone() - LaurentPoly::param_var(&sig, s - 1) * img.x[0].clone()
            } else {
                img.x[k + 1].clone()
            };
            let r = img.l[0].clone() * img.x[s].clone() - img.l[1].clone() * rhs;
            (format!("equation {s}"), r)
        })
        .collect()
}

fn minors(a: &[LaurentPoly], b: &[LaurentPoly], label: &str) -> Vec<(String, LaurentPoly)> {
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let r = a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
            out.push((format!("{label} minor ({i},{j})"), r));
        }
    }
    out
}

/// Checks supplied images; used directly for mutation tests.
pub fn hirzebruch_verify_images(images: &HirzebruchImages) -> Result<HirzebruchCheck> {
    let k = images.k;
    if images.u.x.len() != k + 2 || images.v.x.len() != k + 2 {
        return Err(Error::DimensionMismatch(format!("P^{} needs {} coordinates", k + 1, k + 2)));
    }
    let mut checks = Vec::new();
    for (name, r) in equation_residuals(&images.u, k) {
        checks.push((format!("U chart {name}"), r));
    }
    for (name, r) in equation_residuals(&images.v, k) {
        checks.push((format!("V chart {name}"), r));
    }
    let pull = |p: &LaurentPoly| images.space.pull_to_u(p);
    let vl = images.v.l.iter().map(pull).collect::<Result<Vec<_>>>()?;
    let vx = images.v.x.iter().map(pull).collect::<Result<Vec<_>>>()?;
    checks.extend(minors(&images.u.l, &vl, "P^1"));
    checks.extend(minors(&images.u.x, &vx, &format!("P^{}", k + 1)));
    let count = checks.len();
    for (check, residual) in checks {
        if !residual.is_zero() {
            return Ok(HirzebruchCheck::Counterexample { check, residual });
        }
    }
    Ok(HirzebruchCheck::Ok { equations_checked: count })
}

/// Verifies the embedding identities for `k >= 1` with symbolic parameters.
/// For `k = 1` there are no parameters and the check is trivially satisfied.
pub fn hirzebruch_verify(k: usize) -> Result<HirzebruchCheck> {
    hirzebruch_verify_images(&hirzebruch_images(k)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_for_small_k() {
        for k in 1..=5 {
            let r = hirzebruch_verify(k).unwrap();
            assert!(r.is_ok(), "k={k}: {r:?}");
        }
    }

    #[test]
    fn k2_images_match_the_table() {
        let im = hirzebruch_images(2).unwrap();
        let xs: Vec<String> = im.u.x.iter().map(ToString::to_string).collect();
        assert_eq!(xs, vec!["-1", "z*t1 + z^2*u", "z*u", "u"]);
        let vs: Vec<String> = im.v.x.iter().map(ToString::to_string).collect();
        assert_eq!(vs, vec!["-1", "v", "-t1 + xi*v", "-xi*t1 + xi^2*v"]);
    }

    #[test]
    fn dropping_t1_term_is_caught() {
        let mut im = hirzebruch_images(2).unwrap();
        let sig = im.space.u_signature().clone();
        im.u.x[1] = LaurentPoly::base_power(&sig, 2) * LaurentPoly::fiber_var(&sig, 0);
        match hirzebruch_verify_images(&im).unwrap() {
            HirzebruchCheck::Counterexample { residual, .. } => assert!(!residual.is_zero()),
            ok => panic!("mutation not detected: {ok:?}"),
        }
    }

    #[test]
    fn k0_is_rejected() {
        assert!(hirzebruch_verify(0).is_err());
    }
}
