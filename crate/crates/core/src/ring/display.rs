use std::fmt;

use num_traits::{One, Signed};

use super::{Exponent, LaurentPoly, Signature};

fn monomial_factors(sig: &Signature, e: &Exponent) -> Vec<String> {
    let mut out = Vec::new();
    let mut push = |name: String, p: i64| match p {
        0 => {}
        1 => out.push(name),
        _ => out.push(format!("{name}^{p}")),
    };
    push(sig.base_name().to_string(), e.base);
    for (k, &d) in e.fibers.iter().enumerate() {
        push(sig.fiber_name(k), d as i64);
    }
    for (k, &d) in e.params.iter().enumerate() {
        push(sig.param_name(k), d as i64);
    }
    out
}

/// Canonical form: terms in ascending monomial order, `c*x^a*y^b`, unit
/// coefficients elided. The expression parser reads this back verbatim.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors = monomial_factors(self.signature(), e);
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
