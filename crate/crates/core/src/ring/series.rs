use num_traits::Zero;

use super::{factorial, LaurentPoly};
use crate::error::{Error, Result};

/// Truncated exponential `sum_{n} arg^n / n!`, keeping total fiber degree
/// `<= cutoff`.
///
/// Every term of `arg` must have a nonnegative base exponent and positive
/// fiber degree, so each power raises the fiber degree and the truncation is
/// a finite sum.
pub fn exp_trunc(arg: &LaurentPoly, cutoff: u32) -> Result<LaurentPoly> {
    if !arg.constant_term().is_zero() {
        return Err(Error::SeriesDomain(format!("nonzero constant term in {arg}")));
    }
    for (e, _) in arg.terms() {
        if e.base < 0 {
            return Err(Error::SeriesDomain(format!("negative base exponent in {arg}")));
        }
        if e.fiber_degree() == 0 {
            return Err(Error::SeriesDomain(format!(
                "term without fiber variables in {arg}; the series would not terminate"
            )));
        }
    }
    let sig = arg.signature();
    let mut sum = LaurentPoly::one(sig);
    let mut power = LaurentPoly::one(sig);
    for n in 1..=cutoff {
        power = (&power * arg).truncate_fiber_degree(cutoff);
        if power.is_zero() {
            break;
        }
        sum = &sum + &power.scale(&factorial(n).recip());
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Frame, Signature};

    fn sig() -> Signature {
        Signature::new(1, 0, Frame::U)
    }

    #[test]
    fn exp_of_u() {
        let u = LaurentPoly::fiber_var(&sig(), 0);
        assert_eq!(exp_trunc(&u, 3).unwrap().to_string(), "1 + u + 1/2*u^2 + 1/6*u^3");
        assert_eq!(exp_trunc(&u, 0).unwrap().to_string(), "1");
    }

    #[test]
    fn scaled_by_z_inverse() {
        let s = sig();
        let u = LaurentPoly::fiber_var(&s, 0);
        let p = LaurentPoly::base_power(&s, -1) * exp_trunc(&u, 2).unwrap();
        assert_eq!(p.to_string(), "z^-1 + z^-1*u + 1/2*z^-1*u^2");
        let q = LaurentPoly::base_power(&s, -2) * exp_trunc(&u, 2).unwrap();
        assert_eq!(q.to_string(), "z^-2 + z^-2*u + 1/2*z^-2*u^2");
    }

    #[test]
    fn domain_errors() {
        let s = sig();
        let one_plus_u = LaurentPoly::one(&s) + LaurentPoly::fiber_var(&s, 0);
        assert!(matches!(exp_trunc(&one_plus_u, 3), Err(Error::SeriesDomain(_))));
        let zinv_u = LaurentPoly::base_power(&s, -1) * LaurentPoly::fiber_var(&s, 0);
        assert!(matches!(exp_trunc(&zinv_u, 3), Err(Error::SeriesDomain(_))));
        let z = LaurentPoly::base_power(&s, 1);
        assert!(matches!(exp_trunc(&z, 3), Err(Error::SeriesDomain(_))));
    }
}
