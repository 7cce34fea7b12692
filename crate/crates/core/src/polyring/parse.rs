//! Text form of polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := integer ['/' integer] | var ['^' nat] | 'w' ['^' nat] | '(' poly ')' ['^' nat]
//! ```
//!
//! `w` is the fixed generator of F_{2^k} and is only accepted over binary
//! fields of degree > 1. Whitespace is ignored.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::{format_binary, format_rational, rational_is_negative, Field, Scalar};
use super::monomial::Monomial;
use super::poly::{Polynomial, Ring};
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, ring: &Arc<Ring>) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    p.skip_ws();
    let out = p.poly()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = &acc + &t;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = &acc - &t;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn nat(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn small_nat(&mut self) -> Result<u32> {
        let n = self.nat()?;
        u32::try_from(n).map_err(|_| self.error("exponent too large"))
    }

    fn exponent(&mut self) -> Result<Option<u32>> {
        if self.eat(b'^') {
            Ok(Some(self.small_nat()?))
        } else {
            Ok(None)
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let field = self.ring.field();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(c) if c.is_ascii_digit() => {
                let num = self.nat()?;
                let value = if self.eat(b'/') {
                    let den = self.nat()?;
                    if den == BigInt::from(0) {
                        return Err(self.error("zero denominator"));
                    }
                    field.from_rational(&BigRational::new(num, den))?
                } else {
                    field.from_bigint(&num)
                };
                Ok(Polynomial::constant(self.ring, value))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(match self.exponent()? {
                    Some(e) => inner.pow(e),
                    None => inner,
                })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let e = self.exponent()?.unwrap_or(1);
                if let Some(i) = self.ring.var_index(name) {
                    return Ok(Polynomial::monomial(self.ring, Monomial::variable(i, e), field.one()));
                }
                if name == "w" {
                    if let Field::Binary(bf) = field {
                        if bf.degree() > 1 {
                            let v = bf.pow(bf.generator(), e as u128);
                            return Ok(Polynomial::constant(self.ring, Scalar::Small(v)));
                        }
                    }
                }
                Err(Error::UnknownVariable(name.to_string()))
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }
}

fn monomial_string(ring: &Ring, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for i in 0..ring.nvars() {
        match m.exp(i) {
            0 => {}
            1 => parts.push(ring.var_name(i).to_string()),
            e => parts.push(format!("{}^{e}", ring.var_name(i))),
        }
    }
    parts.join("*")
}

fn with_coefficient(coeff: &str, mono: &str) -> String {
    match (coeff, mono.is_empty()) {
        ("1", true) => "1".into(),
        ("1", false) => mono.into(),
        (c, true) => c.into(),
        (c, false) => format!("{c}*{mono}"),
    }
}

/// Canonical text: terms in decreasing weighted DegRevLex order.
pub fn print_poly(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let ring = p.ring();
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (m, c) in p.terms() {
        let mono = monomial_string(ring, m);
        match ring.field() {
            Field::Rationals => {
                let q = c.rational();
                let neg = rational_is_negative(q);
                let abs = if neg { -q } else { q.clone() };
                pieces.push((neg, with_coefficient(&format_rational(&abs), &mono)));
            }
            Field::Prime(_) => pieces.push((false, with_coefficient(&c.small().to_string(), &mono))),
            Field::Binary(bf) => {
                let v = c.small();
                if bf.degree() == 1 {
                    pieces.push((false, with_coefficient("1", &mono)));
                } else {
                    for i in (0..bf.degree()).rev() {
                        if v >> i & 1 == 1 {
                            pieces.push((false, with_coefficient(&format_binary(&bf, 1 << i), &mono)));
                        }
                    }
                }
            }
        }
    }
    let mut out = String::new();
    for (k, (neg, s)) in pieces.into_iter().enumerate() {
        if neg {
            out.push('-');
        } else if k > 0 {
            out.push('+');
        }
        out.push_str(&s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2_ring(n: usize) -> Arc<Ring> {
        Ring::standard(n, Field::f2())
    }

    #[test]
    fn paper_g_parses() {
        let ring = f2_ring(6);
        let g = parse_poly("x0*x1+x2*x3+x4*x5", &ring).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.weighted_degree_and_homogeneity(), (Some(2), true));
    }

    #[test]
    fn paper_f_parses() {
        let ring = f2_ring(6);
        let f = parse_poly("x0^3*x2+x0*x3^3+x1^3*x4+x1^2*x2*x4+x1*x4^3+x2^3*x5+x3*x5^3", &ring).unwrap();
        assert_eq!(f.len(), 7);
        assert_eq!(f.weighted_degree_and_homogeneity(), (Some(4), true));
    }

    #[test]
    fn zero_parses_to_empty() {
        let ring = f2_ring(2);
        assert!(parse_poly("0", &ring).unwrap().is_zero());
        assert!(parse_poly("x0 + x0", &ring).unwrap().is_zero());
    }

    #[test]
    fn errors_are_reported() {
        let ring = f2_ring(2);
        assert!(matches!(parse_poly("x0 + x7", &ring), Err(Error::UnknownVariable(v)) if v == "x7"));
        assert!(matches!(parse_poly("x0 +* x1", &ring), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(parse_poly("1/2*x0", &ring), Err(Error::NotRepresentable(_))));
        assert!(matches!(parse_poly("w*x0", &ring), Err(Error::UnknownVariable(_))));
        assert!(parse_poly("x0)", &ring).is_err());
    }

    #[test]
    fn rational_printing() {
        let ring = Ring::standard(3, Field::Rationals);
        let p = parse_poly("-x0^2*x1 + 3/6*x2 - 4", &ring).unwrap();
        assert_eq!(print_poly(&p), "-x0^2*x1+1/2*x2-4");
        let q = parse_poly(&print_poly(&p), &ring).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn binary_extension_coefficients() {
        let ring = Ring::standard(2, Field::binary(2).unwrap());
        let p = parse_poly("w^2*x0 + x1", &ring).unwrap();
        // w^2 = w + 1 in F4
        assert_eq!(print_poly(&p), "w*x0+x0+x1");
        assert_eq!(parse_poly(&print_poly(&p), &ring).unwrap(), p);
    }

    #[test]
    fn weighted_y() {
        let ring = Ring::weighted_projective(3, 2, Field::f2());
        let p = parse_poly("y^2 + x0^3*x1 + x2^4", &ring).unwrap();
        assert_eq!(p.weighted_degree_and_homogeneity(), (Some(4), true));
        let q = parse_poly("(x0 + x1)^2", &ring).unwrap();
        assert_eq!(print_poly(&q), "x0^2+x1^2");
    }
}
