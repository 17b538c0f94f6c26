//! Expression grammar for transitions and cochains.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | rational | var ('^' int)? | 'exp(' expr ')' | '(' expr ')'
//! ```
//!
//! The canonical [`LaurentPoly`] printout is accepted verbatim.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{exp_trunc, Exponent, LaurentPoly, Rational, Signature};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var { name: String, power: i64 },
    Neg(Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax { column: pos + 1, message: message.into() }
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(syntax(self.pos, format!("expected `{}`, found `{}`", c as char, x as char))),
            None => Err(syntax(self.pos, format!("expected `{}`, found end of input", c as char))),
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Sum(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Diff(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Product(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().expect("digit");
                if self.src.get(self.pos) == Some(&b'/') {
                    let slash = self.pos;
                    self.pos += 1;
                    let den = self.digits().ok_or_else(|| syntax(self.pos, "expected a denominator"))?;
                    if den == BigInt::from(0) {
                        return Err(syntax(slash, "zero denominator"));
                    }
                    Ok(Expr::Num(Rational::new(num, den)))
                } else {
                    Ok(Expr::Num(Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
                if name == "exp" && self.peek() == Some(b'(') {
                    self.pos += 1;
                    let e = self.expr()?;
                    self.expect(b')')?;
                    return Ok(Expr::Exp(Box::new(e)));
                }
                let mut power = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let neg = self.src.get(self.pos) == Some(&b'-');
                    if neg {
                        self.pos += 1;
                    }
                    let at = self.pos;
                    let n = self.digits().ok_or_else(|| syntax(at, "expected an integer exponent"))?;
                    let n: i64 = n.try_into().map_err(|_| syntax(at, "exponent out of range"))?;
                    power = if neg { -n } else { n };
                }
                Ok(Expr::Var { name, power })
            }
            Some(c) => Err(syntax(self.pos, format!("unexpected `{}`", c as char))),
            None => Err(syntax(self.pos, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(c) => Err(syntax(p.pos, format!("unexpected `{}`", c as char))),
    }
}

impl Expr {
    /// Expands in the ring `sig`; `exp(..)` is truncated at total fiber
    /// degree `cutoff`.
    pub fn eval(&self, sig: &Signature, cutoff: u32) -> Result<LaurentPoly> {
        Ok(match self {
            Expr::Num(c) => LaurentPoly::constant(sig, c.clone()),
            Expr::Var { name, power } => variable(sig, name, *power)?,
            Expr::Neg(a) => -&a.eval(sig, cutoff)?,
            Expr::Sum(a, b) => a.eval(sig, cutoff)?.checked_add(&b.eval(sig, cutoff)?)?,
            Expr::Diff(a, b) => a.eval(sig, cutoff)?.checked_sub(&b.eval(sig, cutoff)?)?,
            Expr::Product(a, b) => a.eval(sig, cutoff)?.checked_mul(&b.eval(sig, cutoff)?)?,
            Expr::Exp(a) => exp_trunc(&a.eval(sig, cutoff)?, cutoff)?,
        })
    }

    pub fn has_exp(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Var { .. } => false,
            Expr::Neg(a) => a.has_exp(),
            Expr::Sum(a, b) | Expr::Diff(a, b) | Expr::Product(a, b) => a.has_exp() || b.has_exp(),
            Expr::Exp(_) => true,
        }
    }
}

fn variable(sig: &Signature, name: &str, power: i64) -> Result<LaurentPoly> {
    let mut e = Exponent::zero(sig);
    if name == sig.base_name() {
        e.base = power;
    } else {
        let slot = if let Some(k) = (0..sig.fibers).find(|&k| sig.fiber_name(k) == name) {
            &mut e.fibers[k]
        } else if let Some(k) = (0..sig.params).find(|&k| sig.param_name(k) == name) {
            &mut e.params[k]
        } else {
            return Err(Error::UnknownVariable(name.to_string()));
        };
        *slot = u32::try_from(power).map_err(|_| Error::Input(format!("negative power of {name}")))?;
    }
    Ok(LaurentPoly::monomial(sig, e, Rational::from_integer(1.into())))
}

pub fn parse_poly(text: &str, sig: &Signature, cutoff: u32) -> Result<LaurentPoly> {
    parse_expr(text)?.eval(sig, cutoff)
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Sum(..) | Expr::Diff(..) => 0,
        Expr::Product(..) => 1,
        Expr::Neg(_) => 2,
        Expr::Num(c) if !c.is_integer() => 1,
        _ => 3,
    }
}

struct Wrap<'a>(&'a Expr, u8);

impl fmt::Display for Wrap<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if prec(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Var { name, power: 1 } => write!(f, "{name}"),
            Expr::Var { name, power } => write!(f, "{name}^{power}"),
            Expr::Neg(a) => write!(f, "-{}", Wrap(a, 2)),
            Expr::Sum(a, b) => write!(f, "{} + {}", Wrap(a, 0), Wrap(b, 1)),
            Expr::Diff(a, b) => write!(f, "{} - {}", Wrap(a, 0), Wrap(b, 1)),
            Expr::Product(a, b) => write!(f, "{}*{}", Wrap(a, 1), Wrap(b, 2)),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ratio, Frame};

    fn u1() -> Signature {
        Signature::new(1, 0, Frame::U)
    }

    #[test]
    fn shapes() {
        assert!(matches!(parse_expr("z^-1*exp(u)").unwrap(), Expr::Product(_, b) if matches!(*b, Expr::Exp(_))));
        assert!(matches!(parse_expr("z^2*u1 + z*u2").unwrap(), Expr::Sum(..)));
    }

    #[test]
    fn syntax_errors_carry_columns() {
        match parse_expr("z^^2") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("(z + u"), Err(Error::Syntax { column: 7, .. })));
        assert!(matches!(parse_expr("z u"), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(parse_expr("1/0"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_variable() {
        assert!(matches!(parse_poly("w + z", &u1(), 0), Err(Error::UnknownVariable(v)) if v == "w"));
        assert!(matches!(parse_poly("xi", &u1(), 0), Err(Error::UnknownVariable(_))));
        assert!(parse_poly("u^-1", &u1(), 0).is_err());
    }

    #[test]
    fn exp_expands_with_cutoff() {
        let p = parse_poly("z^-2*exp(u)", &u1(), 2).unwrap();
        assert_eq!(p.to_string(), "z^-2 + z^-2*u + 1/2*z^-2*u^2");
        assert!(parse_poly("exp(1 + u)", &u1(), 2).is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let sig = Signature::new(2, 1, Frame::V);
        let p = parse_poly("-1/2*xi^-3*v1 + 7*xi*v2^2*t1 - 3 + (v1 - xi)*(v1 + xi)", &sig, 0).unwrap();
        let q = parse_poly(&p.to_string(), &sig, 0).unwrap();
        assert_eq!(p, q);
        let r = parse_poly("-(2/3)*-xi", &sig, 0).unwrap();
        assert_eq!(r, LaurentPoly::base_power(&sig, 1).scale(&ratio(2, 3)));
    }

    #[test]
    fn printer_round_trip() {
        for s in ["z^-1*exp(u)", "-(z - u)*3/4", "z - (u - 1)", "-z^2*-u", "exp(z*u + u^2)*(1 + z^-1)"] {
            let e = parse_expr(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{s} -> {printed}");
        }
    }
}
