//! Exact elements of Q(q).
//!
//! A [`Scalar`] is stored as `q^val * num(q) / den(q)` where `num` and `den`
//! are integer polynomials with nonzero constant terms, coprime over Z[q],
//! and `den` has positive leading coefficient. Laurent polynomials are exactly
//! the scalars with `den == 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar: {0}")]
    Parse(String),
    #[error("denominator vanishes at the specialization point")]
    Pole,
}

/// Dense integer polynomial, index = degree, no trailing zeros.
pub type Poly = Vec<BigInt>;

fn trim(p: &mut Poly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_add(a: &[BigInt], b: &[BigInt]) -> Poly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut r: Poly = long.to_vec();
    for (i, c) in short.iter().enumerate() {
        r[i] += c;
    }
    trim(&mut r);
    r
}

fn poly_neg(a: &[BigInt]) -> Poly {
    a.iter().map(|c| -c).collect()
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(&mut r);
    r
}

fn poly_scale(a: &[BigInt], c: &BigInt) -> Poly {
    let mut r: Poly = a.iter().map(|x| x * c).collect();
    trim(&mut r);
    r
}

fn content(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn poly_div_int(a: &[BigInt], c: &BigInt) -> Poly {
    a.iter().map(|x| x / c).collect()
}

fn primitive(a: &[BigInt]) -> Poly {
    let c = content(a);
    if c.is_zero() || c.is_one() {
        a.to_vec()
    } else {
        poly_div_int(a, &c)
    }
}

/// Exact division a / b in Z[q]; panics if not exact.
fn poly_exact_div(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut rem: Poly = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut quo = vec![BigInt::zero(); a.len() - db];
    while rem.len() > db && !rem.is_empty() {
        let k = rem.len() - 1 - db;
        let (qc, r) = rem.last().unwrap().div_rem(lb);
        assert!(r.is_zero(), "inexact polynomial division");
        for (i, c) in b.iter().enumerate() {
            rem[k + i] -= &qc * c;
        }
        quo[k] = qc;
        trim(&mut rem);
    }
    assert!(rem.is_empty(), "inexact polynomial division");
    trim(&mut quo);
    quo
}

/// Pseudo-remainder of a by b.
fn poly_prem(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut r: Poly = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[k + i] -= &lr * c;
        }
        trim(&mut r);
        let c = content(&r);
        if !c.is_zero() && !c.is_one() {
            r = poly_div_int(&r, &c);
        }
    }
    r
}

/// Greatest common divisor in Z[q], positive leading coefficient.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() {
        return normalize_sign(b.to_vec());
    }
    if b.is_empty() {
        return normalize_sign(a.to_vec());
    }
    let cg = content(a).gcd(&content(b));
    let (mut x, mut y) = (primitive(a), primitive(b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            x = vec![BigInt::one()];
            break;
        }
        let r = poly_prem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    let x = primitive(&x);
    normalize_sign(poly_scale(&x, &cg))
}

fn normalize_sign(mut p: Poly) -> Poly {
    if p.last().map_or(false, |c| c.is_negative()) {
        for c in p.iter_mut() {
            *c = -&*c;
        }
    }
    p
}

/// Removes low-order zero coefficients, returning the number removed.
fn strip_low(p: &mut Poly) -> i64 {
    let k = p.iter().take_while(|c| c.is_zero()).count();
    if k > 0 {
        p.drain(..k);
    }
    k as i64
}

fn shift_up(p: &[BigInt], k: usize) -> Poly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); k];
    r.extend_from_slice(p);
    r
}

/// An exact element of Q(q) in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    val: i64,
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { val: 0, num: Vec::new(), den: vec![BigInt::one()] }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        let n = n.into();
        if n.is_zero() {
            return Scalar::zero();
        }
        Scalar { val: 0, num: vec![n], den: vec![BigInt::one()] }
    }

    pub fn from_ratio<T: Into<BigInt>>(a: T, b: T) -> Self {
        Scalar::from_parts(0, vec![a.into()], vec![b.into()])
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Scalar::from_parts(0, vec![r.numer().clone()], vec![r.denom().clone()])
    }

    /// The indeterminate raised to an integer power.
    pub fn q_pow(k: i64) -> Self {
        Scalar { val: k, num: vec![BigInt::one()], den: vec![BigInt::one()] }
    }

    pub fn q() -> Self {
        Scalar::q_pow(1)
    }

    /// Laurent polynomial from (exponent, coefficient) pairs.
    pub fn laurent<T: Into<BigInt> + Clone>(terms: &[(i64, T)]) -> Self {
        if terms.is_empty() {
            return Scalar::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut p = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            p[(e - lo) as usize] += c.clone().into();
        }
        Scalar::from_parts(lo, p, vec![BigInt::one()])
    }

    /// Builds `q^val * num / den` and brings it to canonical form.
    pub fn from_parts(val: i64, mut num: Poly, mut den: Poly) -> Self {
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Scalar::zero();
        }
        let mut val = val + strip_low(&mut num);
        val -= strip_low(&mut den);
        if den.len() == 1 {
            let d = den[0].clone();
            let g = content(&num).gcd(&d);
            let mut g = if d.is_negative() { -g } else { g };
            if g.is_zero() {
                g = BigInt::one();
            }
            if !g.is_one() {
                num = poly_div_int(&num, &g);
                den = vec![&d / &g];
            }
            return Scalar { val, num, den };
        }
        let g = poly_gcd(&num, &den);
        if g.len() > 1 || !g[0].is_one() {
            num = poly_exact_div(&num, &g);
            den = poly_exact_div(&den, &g);
        }
        if den.last().unwrap().is_negative() {
            num = poly_neg(&num);
            den = poly_neg(&den);
        }
        Scalar { val, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.val == 0 && self.num.len() == 1 && self.num[0].is_one() && self.den.len() == 1 && self.den[0].is_one()
    }

    /// True iff the scalar lies in Z[q, q^-1].
    pub fn is_laurent(&self) -> bool {
        self.den.len() == 1 && self.den[0].is_one()
    }

    /// True iff the scalar is an integer constant.
    pub fn is_integer(&self) -> bool {
        self.is_zero() || (self.val == 0 && self.num.len() == 1 && self.is_laurent())
    }

    /// True iff the scalar does not depend on q.
    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.val == 0 && self.num.len() == 1 && self.den.len() == 1)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            Some(BigRational::new(self.num[0].clone(), self.den[0].clone()))
        } else {
            None
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_zero() {
            return Some(0);
        }
        if self.is_integer() {
            self.num[0].to_i64()
        } else {
            None
        }
    }

    /// Laurent coefficients as (exponent, coefficient), ascending; None if not Laurent.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, BigInt)>> {
        if !self.is_laurent() {
            return None;
        }
        Some(
            self.num
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.val + i as i64, c.clone()))
                .collect(),
        )
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut s = Scalar { val: -self.val, num: self.den.clone(), den: self.num.clone() };
        if s.den.last().unwrap().is_negative() {
            s.num = poly_neg(&s.num);
            s.den = poly_neg(&s.den);
        }
        Ok(s)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut r = Scalar::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Applies q -> q^{-1}.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Scalar::zero();
        }
        // q^v N(1/q)/D(1/q) = q^{v - degN + degD} rev(N)/rev(D)
        let dn = self.num.len() as i64 - 1;
        let dd = self.den.len() as i64 - 1;
        let num: Poly = self.num.iter().rev().cloned().collect();
        let den: Poly = self.den.iter().rev().cloned().collect();
        Scalar::from_parts(-self.val - dn + dd, num, den)
    }

    /// Evaluates at a rational point.
    pub fn specialize(&self, q0: &BigRational) -> Result<BigRational, ScalarError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let eval = |p: &Poly| {
            let mut acc = BigRational::zero();
            for c in p.iter().rev() {
                acc = acc * q0 + BigRational::from_integer(c.clone());
            }
            acc
        };
        let d = eval(&self.den);
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        let n = eval(&self.num);
        if q0.is_zero() && self.val < 0 {
            return Err(ScalarError::Pole);
        }
        let qv = if self.val >= 0 {
            num_traits::pow(q0.clone(), self.val as usize)
        } else {
            num_traits::pow(q0.recip(), (-self.val) as usize)
        };
        Ok(n / d * qv)
    }

    /// Specialization at q = 1 when defined.
    pub fn at_one(&self) -> Result<BigRational, ScalarError> {
        self.specialize(&BigRational::one())
    }

    pub fn numerator_laurent(&self) -> Scalar {
        Scalar::from_parts(self.val, self.num.clone(), vec![BigInt::one()])
    }

    pub fn denominator_poly(&self) -> Scalar {
        Scalar::from_parts(0, self.den.clone(), vec![BigInt::one()])
    }

    /// Integer coefficients of the canonical numerator and denominator, for hashing heuristics.
    pub fn parts(&self) -> (i64, &Poly, &Poly) {
        (self.val, &self.num, &self.den)
    }

    /// Total bit size; a cheap proxy for pivot selection.
    pub fn weight(&self) -> u64 {
        self.num.iter().chain(self.den.iter()).map(|c| c.bits()).sum::<u64>() + self.num.len() as u64 + self.den.len() as u64
    }

    fn add_impl(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.val.min(o.val);
        let a = shift_up(&self.num, (self.val - lo) as usize);
        let b = shift_up(&o.num, (o.val - lo) as usize);
        if self.den == o.den {
            if self.is_laurent() {
                let mut s = poly_add(&a, &b);
                if s.is_empty() {
                    return Scalar::zero();
                }
                let v = lo + strip_low(&mut s);
                return Scalar { val: v, num: s, den: self.den.clone() };
            }
            return Scalar::from_parts(lo, poly_add(&a, &b), self.den.clone());
        }
        let n = poly_add(&poly_mul(&a, &o.den), &poly_mul(&b, &self.den));
        Scalar::from_parts(lo, n, poly_mul(&self.den, &o.den))
    }

    fn mul_impl(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let val = self.val + o.val;
        if self.is_laurent() && o.is_laurent() {
            return Scalar { val, num: poly_mul(&self.num, &o.num), den: self.den.clone() };
        }
        if self.den.len() == 1 && o.den.len() == 1 {
            return Scalar::from_parts(val, poly_mul(&self.num, &o.num), poly_mul(&self.den, &o.den));
        }
        // cross-cancel before multiplying
        let g1 = poly_gcd(&self.num, &o.den);
        let g2 = poly_gcd(&o.num, &self.den);
        let n1 = poly_exact_div(&self.num, &g1);
        let d2 = poly_exact_div(&o.den, &g1);
        let n2 = poly_exact_div(&o.num, &g2);
        let d1 = poly_exact_div(&self.den, &g2);
        let mut num = poly_mul(&n1, &n2);
        let mut den = poly_mul(&d1, &d2);
        if den.last().unwrap().is_negative() {
            num = poly_neg(&num);
            den = poly_neg(&den);
        }
        Scalar { val, num, den }
    }

    /// Parses "q^2 + 1 + q^-2", "(q^2-1)/(q^2+1)", "3/2", "-q", "2*q^3".
    pub fn parse(s: &str) -> Result<Scalar, ScalarError> {
        let mut p = ScalarParser { chars: s.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
        let v = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(ScalarError::Parse(s.to_string()));
        }
        Ok(v)
    }

    fn fmt_laurent(val: i64, num: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in num.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = val + i as i64;
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match e {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{}", e)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

struct ScalarParser {
    chars: Vec<char>,
    pos: usize,
}

impl ScalarParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self) -> ScalarError {
        ScalarError::Parse(self.chars.iter().collect())
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = Scalar::zero();
        let mut sign = 1;
        if let Some(c) = self.peek() {
            if c == '-' {
                sign = -1;
                self.pos += 1;
            } else if c == '+' {
                self.pos += 1;
            }
        }
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some('+') => {
                    sign = 1;
                    self.pos += 1;
                }
                Some('-') => {
                    sign = -1;
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = (&acc / &d).map_err(|_| ScalarError::DivisionByZero)?;
                }
                Some('q') | Some('(') => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn int(&mut self) -> Result<i64, ScalarError> {
        let mut neg = false;
        if self.peek() == Some('-') {
            neg = true;
            self.pos += 1;
        }
        let start = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err());
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let v: i64 = s.parse().map_err(|_| self.err())?;
        Ok(if neg { -v } else { v })
    }

    fn factor(&mut self) -> Result<Scalar, ScalarError> {
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err());
                }
                self.pos += 1;
                v
            }
            Some('q') => {
                self.pos += 1;
                Scalar::q()
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().map_or(false, |c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().collect();
                Scalar::from_int(s.parse::<BigInt>().map_err(|_| self.err())?)
            }
            _ => return Err(self.err()),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = if self.peek() == Some('(') {
                self.pos += 1;
                let e = self.int()?;
                if self.peek() != Some(')') {
                    return Err(self.err());
                }
                self.pos += 1;
                e
            } else {
                self.int()?
            };
            if e < 0 && base.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            return Scalar::fmt_laurent(self.val, &self.num, f);
        }
        write!(f, "(")?;
        Scalar::fmt_laurent(self.val, &self.num, f)?;
        write!(f, ")/(")?;
        Scalar::fmt_laurent(0, &self.den, f)?;
        write!(f, ")")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order on canonical forms (not the field order).
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.val, &self.num, &self.den).cmp(&(other.val, &other.num, &other.den))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.add_impl(o)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.add_impl(&-o)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_impl(o)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Result<Scalar, ScalarError>;
    fn div(self, o: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul_impl(&o.inv()?))
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { val: self.val, num: poly_neg(&self.num), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        self.add_impl(&o)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        self.add_impl(&-o)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        self.mul_impl(&o)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = self.add_impl(o);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = self.add_impl(&-o);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = self.mul_impl(o);
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

/// q - q^{-1}
pub fn q_minus_qinv() -> Scalar {
    Scalar::laurent(&[(1, 1), (-1, -1)])
}

/// Quantum integer [m] = (q^m - q^-m)/(q - q^-1), with [0] = 1 by convention.
pub fn qint(m: u32) -> Scalar {
    if m == 0 {
        return Scalar::one();
    }
    signed_qint(m as i64)
}

/// [m] for any integer m, with [0] = 0 (the honest value of the quotient).
pub fn signed_qint(m: i64) -> Scalar {
    if m == 0 {
        return Scalar::zero();
    }
    let sign = if m < 0 { -1 } else { 1 };
    let a = m.abs();
    let terms: Vec<(i64, i64)> = (0..a).map(|k| (a - 1 - 2 * k, sign)).collect();
    Scalar::laurent(&terms)
}

/// Quantum factorial [m]! with [0]! = 1.
pub fn qfactorial(m: u32) -> Scalar {
    let mut r = Scalar::one();
    for k in 1..=m {
        r = &r * &qint(k);
    }
    r
}

/// Gaussian binomial [c; m] = [c][c-1]...[c-m+1]/[m]! for any integer c.
pub fn qbinom(c: i64, m: u32) -> Scalar {
    if m == 0 {
        return Scalar::one();
    }
    let mut num = Scalar::one();
    for k in 0..m as i64 {
        num = &num * &signed_qint(c - k);
    }
    (&num / &qfactorial(m)).expect("nonzero factorial")
}

/// The bracket [Z; c / t] with Z acting as q^weight_value.
pub fn bracket_eval(weight_value: i64, c: i64, t: u32) -> Scalar {
    let mut r = Scalar::one();
    for s in 1..=t as i64 {
        let num = &Scalar::q_pow(weight_value + c - s + 1) - &Scalar::q_pow(-weight_value - c + s - 1);
        let den = &Scalar::q_pow(s) - &Scalar::q_pow(-s);
        r = &r * &(&num / &den).expect("nonzero");
    }
    r
}

/// Ordinary binomial coefficient C(c, m) for integer c (generalized).
pub fn binom(c: i64, m: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..m as i64 {
        num *= BigInt::from(c - k);
        den *= BigInt::from(k + 1);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        Scalar::parse(x).unwrap()
    }

    #[test]
    fn qint_examples() {
        assert_eq!(qint(0), Scalar::one());
        assert_eq!(qint(2), s("q + q^-1"));
        assert_eq!(qint(3), s("q^2 + 1 + q^-2"));
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(7, 0), Scalar::one());
        assert_eq!(qbinom(2, 1), s("q + q^-1"));
        assert_eq!(qbinom(4, 2), s("q^4 + q^2 + 2 + q^-2 + q^-4"));
        assert!(qbinom(6, 3).is_laurent());
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket_eval(3, -2, 0), Scalar::one());
        assert_eq!(bracket_eval(1, 0, 1), Scalar::one());
        assert_eq!(bracket_eval(2, 0, 2), Scalar::one());
    }

    #[test]
    fn display_roundtrip() {
        for x in ["q^2 + 1 + q^-2", "(q^2 - 1)/(q^2 + 1)", "3/2", "-q", "2*q^3 - 5", "(q)/(q^2 + 1)"] {
            let v = s(x);
            assert_eq!(s(&v.to_string()), v, "{x}");
        }
        assert_eq!(s("q^2 + 1 + q^-2").to_string(), "q^2 + 1 + q^-2");
        assert_eq!(s("(q^2-1)/(q^2+1)").to_string(), "(q^2 - 1)/(q^2 + 1)");
    }

    #[test]
    fn canonical_equality() {
        let a = s("(q^2-1)/(q-1)");
        assert_eq!(a, s("q+1"));
        let b = s("(2q^2-2)/(4q+4)");
        assert_eq!(b, s("(q-1)/2"));
        assert_eq!(&q_minus_qinv() * &q_minus_qinv().inv().unwrap(), Scalar::one());
    }

    #[test]
    fn laurent_predicate() {
        assert!(s("q^-3 + 2").is_laurent());
        assert!(!s("1/(q+1)").is_laurent());
        assert!(!s("1/2").is_laurent());
    }

    #[test]
    fn specialization() {
        let q0 = BigRational::new(5.into(), 3.into());
        let x = s("(q^2-1)/(q^2+1)");
        assert_eq!(x.specialize(&q0).unwrap(), BigRational::new(16.into(), 34.into()));
        assert!(s("1/(q-1)").at_one().is_err());
    }

    #[test]
    fn bar_involution() {
        let x = s("(q^3 - 2q)/(q^2 + 3)");
        assert_eq!(x.bar().bar(), x);
        assert_eq!(s("q^2 + 5q^-1").bar(), s("q^-2 + 5q"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn laurent_poly() -> impl Strategy<Value = Scalar> {
            prop::collection::vec((-3i64..=3, -4i64..=4), 0..4).prop_map(|t| Scalar::laurent(&t))
        }

        fn scalar() -> impl Strategy<Value = Scalar> {
            (laurent_poly(), laurent_poly()).prop_map(|(a, b)| if b.is_zero() { a } else { (&a / &b).unwrap() })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(2500))]
            #[test]
            fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a + &(-&a), Scalar::zero());
                prop_assert_eq!(&a * &Scalar::one(), a.clone());
                if !a.is_zero() {
                    prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
                } else {
                    prop_assert!(a.inv().is_err());
                }
            }

            #[test]
            fn bar_is_a_ring_involution(a in scalar(), b in scalar()) {
                prop_assert_eq!(a.bar().bar(), a.clone());
                prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
                prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
            }
        }

        #[test]
        fn qbinom_at_one() {
            for c in 0..=8i64 {
                for m in 0..=c as u32 {
                    let v = qbinom(c, m);
                    assert_eq!(v.at_one().unwrap(), BigRational::from_integer(binom(c, m)));
                    assert_eq!(v.bar(), v);
                    assert!(v.is_laurent());
                }
            }
        }

        #[test]
        fn bracket_matches_qbinom() {
            for lam in 0..=6i64 {
                for c in -5..=5i64 {
                    for t in 0..=6u32 {
                        assert_eq!(bracket_eval(lam, c, t), qbinom(lam + c, t), "{lam} {c} {t}");
                    }
                }
            }
        }
    }
}
