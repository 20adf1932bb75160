//! Inline expression grammar.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ['^' ['-'] int]
//! atom   := int | 'q' | '(' expr ')' | generator
//! ```
//!
//! Generators: `e1 f2 h3 hb3 eb1 fb1 x(1,3) xb(3,1) xd(1,3;2) binom(h1,2) 1[2,0]`
//! (classical), `E1 F2 Eb1 Fb1 K3 Kb3 X(1,3) Xb(3,1) Xd(1,3;2) Kbr(1;0;2) 1q[2,0] L(-1,2)`
//! (quantum), `s1 c2 T1` (Sergeev, Clifford, Hecke). Division is only by scalars.

use crate::freealg::{AlgebraError, Element, Gen};
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("parse error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub fn parse_element(s: &str) -> Result<Element, ParseError> {
    let mut p = Parser { c: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
    let e = p.expr()?;
    if p.pos != p.c.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses after replacing `{name}` placeholders by the bound integers.
pub fn parse_template(t: &str, binds: &[(&str, i64)]) -> Result<Element, ParseError> {
    let mut s = t.to_string();
    for (k, v) in binds {
        s = s.replace(&format!("{{{}}}", k), &v.to_string());
    }
    parse_element(&s)
}

struct Parser {
    c: Vec<char>,
    pos: usize,
}

fn scalar_part(e: &Element) -> Option<Scalar> {
    if e.is_zero() {
        return Some(Scalar::zero());
    }
    if e.len() == 1 && e.max_word_len() == 0 {
        return Some(e.coeff(&[]));
    }
    None
}

impl Parser {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.c.get(self.pos).copied()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), ParseError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", ch)))
        }
    }

    fn expr(&mut self) -> Result<Element, ParseError> {
        let neg = self.eat('-');
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                let f = self.factor()?;
                acc = acc.try_mul(&f)?;
            } else if self.eat('/') {
                let f = self.factor()?;
                let s = scalar_part(&f).ok_or_else(|| self.err("division by a non-scalar"))?;
                let inv = s.inv().map_err(|_| self.err("division by zero"))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = self.eat('-');
        let start = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.c[start..self.pos].iter().collect();
        let v: i64 = s.parse().map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn small<T: TryFrom<i64>>(&mut self) -> Result<T, ParseError> {
        let v = self.int()?;
        T::try_from(v).map_err(|_| self.err("index out of range"))
    }

    fn factor(&mut self) -> Result<Element, ParseError> {
        let (base, kgen) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.int()?;
        if let Some(Gen::K { i, e: sign }) = kgen {
            let g = Element::gen(Gen::K { i, e: if e < 0 { -sign } else { sign } });
            return Ok(power(&g, e.unsigned_abs()));
        }
        if e >= 0 {
            Ok(power(&base, e as u64))
        } else {
            let s = scalar_part(&base).ok_or_else(|| self.err("negative power of a non-scalar"))?;
            Ok(Element::scalar(s.inv().map_err(|_| self.err("division by zero"))?.pow(-e)))
        }
    }

    fn weight(&mut self) -> Result<Vec<u32>, ParseError> {
        self.expect('[')?;
        let mut w = Vec::new();
        if !self.eat(']') {
            loop {
                w.push(self.small::<u32>()?);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(w)
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        self.c[start..self.pos].iter().collect()
    }

    /// Returns the atom and, for a bare K letter, the generator (so `K1^-1` maps to K_1^{-1}).
    fn atom(&mut self) -> Result<(Element, Option<Gen>), ParseError> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok((e, None));
        }
        if c.is_ascii_digit() {
            let v = self.int()?;
            if v == 1 && self.peek() == Some('[') {
                return Ok((Element::gen(Gen::Idem(self.weight()?)), None));
            }
            if v == 1 && self.peek() == Some('q') && self.c.get(self.pos + 1) == Some(&'[') {
                self.pos += 1;
                return Ok((Element::gen(Gen::QIdem(self.weight()?)), None));
            }
            return Ok((Element::scalar(Scalar::from_int(v)), None));
        }
        let start = self.pos;
        let name = self.ident();
        if name.is_empty() {
            return Err(self.err("expected a generator, number or '('"));
        }
        let g = match name.as_str() {
            "q" => return Ok((Element::scalar(Scalar::q()), None)),
            "x" | "xb" | "X" | "Xb" | "L" => {
                self.expect('(')?;
                let a = self.int()?;
                self.expect(',')?;
                let b = self.int()?;
                self.expect(')')?;
                if name == "L" {
                    let (i, j) = (i8::try_from(a), i8::try_from(b));
                    match (i, j) {
                        (Ok(i), Ok(j)) => Gen::L { i, j },
                        _ => return Err(self.err("index out of range")),
                    }
                } else {
                    let (i, j) = (pos_index(a).ok_or_else(|| self.err("bad index"))?, pos_index(b).ok_or_else(|| self.err("bad index"))?);
                    match name.as_str() {
                        "x" => Gen::X { i, j, s: 1 },
                        "xb" => Gen::XBar { i, j },
                        "X" => Gen::QX { i, j, s: 1 },
                        _ => Gen::QXBar { i, j },
                    }
                }
            }
            "xd" | "Xd" => {
                self.expect('(')?;
                let i = self.small::<u8>()?;
                self.expect(',')?;
                let j = self.small::<u8>()?;
                self.expect(';')?;
                let s = self.small::<u32>()?;
                self.expect(')')?;
                if s == 0 {
                    return Ok((Element::one(), None));
                }
                if name == "xd" {
                    Gen::X { i, j, s }
                } else {
                    Gen::QX { i, j, s }
                }
            }
            "binom" => {
                self.expect('(')?;
                if self.ident() != "h" {
                    return Err(self.err("expected h<i>"));
                }
                let i = self.small::<u8>()?;
                self.expect(',')?;
                let s = self.small::<u32>()?;
                self.expect(')')?;
                if s == 0 {
                    return Ok((Element::one(), None));
                }
                Gen::HBinom { i, s }
            }
            "Kbr" => {
                self.expect('(')?;
                let i = self.small::<u8>()?;
                self.expect(';')?;
                let c = self.small::<i32>()?;
                self.expect(';')?;
                let t = self.small::<u32>()?;
                self.expect(')')?;
                if t == 0 {
                    return Ok((Element::one(), None));
                }
                Gen::KBracket { i, c, t }
            }
            _ => {
                let i = self.small::<u8>().map_err(|_| ParseError::Syntax { pos: start, msg: format!("unknown generator '{}'", name) })?;
                match name.as_str() {
                    "e" => Gen::e(i),
                    "f" => Gen::f(i),
                    "h" => Gen::h(i),
                    "hb" => Gen::HBar(i),
                    "eb" => Gen::eb(i),
                    "fb" => Gen::fb(i),
                    "E" => Gen::qe(i),
                    "F" => Gen::qf(i),
                    "Eb" => Gen::qeb(i),
                    "Fb" => Gen::qfb(i),
                    "K" => {
                        let g = Gen::k(i);
                        return Ok((Element::gen(g.clone()), Some(g)));
                    }
                    "Kb" => Gen::KBar(i),
                    "s" => Gen::SwapS(i),
                    "c" => Gen::Cliff(i),
                    "T" => Gen::HeckeT(i),
                    _ => return Err(ParseError::Syntax { pos: start, msg: format!("unknown generator '{}'", name) }),
                }
            }
        };
        if let Gen::X { i, j, .. } | Gen::XBar { i, j } | Gen::QX { i, j, .. } | Gen::QXBar { i, j } = &g {
            if i == j || *i == 0 || *j == 0 {
                return Err(ParseError::Syntax { pos: start, msg: "root vector needs distinct indices ≥ 1".into() });
            }
        }
        Ok((Element::gen(g), None))
    }
}

fn pos_index(a: i64) -> Option<u8> {
    u8::try_from(a).ok().filter(|&v| v >= 1)
}

fn power(x: &Element, e: u64) -> Element {
    let mut r = Element::one();
    for _ in 0..e {
        r = r.mul_unchecked(x);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators() {
        assert_eq!(parse_element("e1").unwrap(), Element::gen(Gen::e(1)));
        assert_eq!(parse_element("Xd(1,3;2)").unwrap(), Element::gen(Gen::QX { i: 1, j: 3, s: 2 }));
        assert_eq!(parse_element("K2^-1").unwrap(), Element::gen(Gen::kinv(2)));
        assert_eq!(parse_element("L(-1,2)").unwrap(), Element::gen(Gen::L { i: -1, j: 2 }));
        assert_eq!(parse_element("1q[2,0]").unwrap(), Element::gen(Gen::QIdem(vec![2, 0])));
        assert_eq!(parse_element("1[1,1]").unwrap(), Element::gen(Gen::Idem(vec![1, 1])));
    }

    #[test]
    fn arithmetic() {
        let a = parse_element("(K1 - K1^-1)/(q - q^-1)").unwrap();
        let inv = (&Scalar::q() - &Scalar::q_pow(-1)).inv().unwrap();
        let b = &Element::gen(Gen::k(1)).scale(&inv) - &Element::gen(Gen::kinv(1)).scale(&inv);
        assert_eq!(a, b);
        let c = parse_element("-2*q^2*e1*f1 + 3").unwrap();
        let mut d = Element::monomial(&[Gen::e(1), Gen::f(1)]).scale(&Scalar::laurent(&[(2, -2)]));
        d += &Element::scalar(Scalar::from_int(3));
        assert_eq!(c, d);
        assert_eq!(parse_element("K1^2").unwrap(), Element::monomial(&[Gen::k(1), Gen::k(1)]));
    }

    #[test]
    fn display_round_trip() {
        let x = parse_element("q^-1*Xb(3,1)*Kb2*K1^-1 - (q^2+1)*Kbr(1;0;2) + 1q[1,1]*F1").unwrap();
        assert_eq!(parse_element(&x.to_string()).unwrap(), x);
        let y = parse_element("f1*e1 + h1 - h2 + binom(h1,2)*hb2").unwrap();
        assert_eq!(parse_element(&y.to_string()).unwrap(), y);
    }

    #[test]
    fn template() {
        let t = parse_template("X({i},{j})*X({k},{l})", &[("i", 1), ("j", 2), ("k", 2), ("l", 3)]).unwrap();
        assert_eq!(t, Element::monomial(&[Gen::qe(1), Gen::qe(2)]));
    }

    #[test]
    fn errors() {
        assert!(parse_element("e1 +").is_err());
        assert!(parse_element("e1/f1").is_err());
        assert!(parse_element("zz1").is_err());
        assert!(parse_element("e1*E1").is_err());
        assert!(parse_element("X(1,1)").is_err());
    }
}
