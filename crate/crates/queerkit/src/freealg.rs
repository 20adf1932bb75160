//! Free associative superalgebra terms and a fuel-bounded rewrite engine.

use crate::scalar::Scalar;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(String, String),
    #[error("element is not homogeneous in parity")]
    NonHomogeneous,
    #[error("rewrite fuel exhausted after {0} steps")]
    FuelExhausted(u64),
    #[error("malformed element JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Scalar(#[from] crate::scalar::ScalarError),
}

/// Generator symbols. Indices are 1-based as in the usual notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Gen {
    /// binom(h_i, s); h_i is `HBinom { i, s: 1 }`.
    HBinom { i: u8, s: u32 },
    /// odd Cartan h̄_i
    HBar(u8),
    /// divided power x^{(s)}_{i,j}
    X { i: u8, j: u8, s: u32 },
    /// odd root vector x̄_{i,j}
    XBar { i: u8, j: u8 },
    /// classical weight idempotent 1_λ
    Idem(Vec<u32>),
    /// Olshanski generator L_{i,j}, i <= j in I(n|n)
    L { i: i8, j: i8 },
    /// K_i^{e}, e = ±1
    K { i: u8, e: i8 },
    /// odd Cartan K̄_i
    KBar(u8),
    /// quantum divided power X^{(s)}_{i,j}
    QX { i: u8, j: u8, s: u32 },
    /// odd quantum root vector X̄_{i,j}
    QXBar { i: u8, j: u8 },
    /// bracket [K_i; c / t]
    KBracket { i: u8, c: i32, t: u32 },
    /// quantum weight idempotent 1_λ
    QIdem(Vec<u32>),
    /// Sergeev transposition s_k
    SwapS(u8),
    /// Clifford generator c_l
    Cliff(u8),
    /// Hecke generator T_k
    HeckeT(u8),
    /// a generator placed in tensor slot `slot`
    Slot { slot: u8, g: Box<Gen> },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Alphabet {
    Classical,
    Quantum,
    Sergeev,
    Hecke,
    Clifford,
    Tensor,
}

/// Olshanski parity p(i,j).
pub fn l_parity(i: i8, j: i8) -> u8 {
    if (i as i32) * (j as i32) > 0 {
        0
    } else {
        1
    }
}

impl Gen {
    pub fn parity(&self) -> u8 {
        match self {
            Gen::HBar(_) | Gen::XBar { .. } | Gen::KBar(_) | Gen::QXBar { .. } | Gen::Cliff(_) => 1,
            Gen::L { i, j } => l_parity(*i, *j),
            Gen::Slot { g, .. } => g.parity(),
            _ => 0,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            Gen::HBinom { .. } | Gen::HBar(_) | Gen::X { .. } | Gen::XBar { .. } | Gen::Idem(_) => Alphabet::Classical,
            Gen::L { .. } | Gen::K { .. } | Gen::KBar(_) | Gen::QX { .. } | Gen::QXBar { .. } | Gen::KBracket { .. } | Gen::QIdem(_) => {
                Alphabet::Quantum
            }
            Gen::SwapS(_) => Alphabet::Sergeev,
            Gen::HeckeT(_) => Alphabet::Hecke,
            Gen::Cliff(_) => Alphabet::Clifford,
            Gen::Slot { .. } => Alphabet::Tensor,
        }
    }

    pub fn h(i: u8) -> Gen {
        Gen::HBinom { i, s: 1 }
    }
    pub fn e(i: u8) -> Gen {
        Gen::X { i, j: i + 1, s: 1 }
    }
    pub fn f(i: u8) -> Gen {
        Gen::X { i: i + 1, j: i, s: 1 }
    }
    pub fn eb(i: u8) -> Gen {
        Gen::XBar { i, j: i + 1 }
    }
    pub fn fb(i: u8) -> Gen {
        Gen::XBar { i: i + 1, j: i }
    }
    pub fn x(i: u8, j: u8) -> Gen {
        Gen::X { i, j, s: 1 }
    }
    pub fn qe(i: u8) -> Gen {
        Gen::QX { i, j: i + 1, s: 1 }
    }
    pub fn qf(i: u8) -> Gen {
        Gen::QX { i: i + 1, j: i, s: 1 }
    }
    pub fn qeb(i: u8) -> Gen {
        Gen::QXBar { i, j: i + 1 }
    }
    pub fn qfb(i: u8) -> Gen {
        Gen::QXBar { i: i + 1, j: i }
    }
    pub fn kinv(i: u8) -> Gen {
        Gen::K { i, e: -1 }
    }
    pub fn k(i: u8) -> Gen {
        Gen::K { i, e: 1 }
    }
}

fn compatible(a: Alphabet, b: Alphabet) -> bool {
    use Alphabet::*;
    a == b
        || matches!((a, b), (Clifford, Sergeev) | (Sergeev, Clifford) | (Clifford, Hecke) | (Hecke, Clifford))
        || a == Tensor
        || b == Tensor
}

fn fmt_weight(w: &[u32]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::HBinom { i, s: 1 } => write!(f, "h{}", i),
            Gen::HBinom { i, s } => write!(f, "binom(h{},{})", i, s),
            Gen::HBar(i) => write!(f, "hb{}", i),
            Gen::X { i, j, s: 1 } if *j == i + 1 => write!(f, "e{}", i),
            Gen::X { i, j, s: 1 } if *i == j + 1 => write!(f, "f{}", j),
            Gen::X { i, j, s: 1 } => write!(f, "x({},{})", i, j),
            Gen::X { i, j, s } => write!(f, "xd({},{};{})", i, j, s),
            Gen::XBar { i, j } if *j == i + 1 => write!(f, "eb{}", i),
            Gen::XBar { i, j } if *i == j + 1 => write!(f, "fb{}", j),
            Gen::XBar { i, j } => write!(f, "xb({},{})", i, j),
            Gen::Idem(w) => write!(f, "1[{}]", fmt_weight(w)),
            Gen::L { i, j } => write!(f, "L({},{})", i, j),
            Gen::K { i, e: 1 } => write!(f, "K{}", i),
            Gen::K { i, .. } => write!(f, "K{}^-1", i),
            Gen::KBar(i) => write!(f, "Kb{}", i),
            Gen::QX { i, j, s: 1 } if *j == i + 1 => write!(f, "E{}", i),
            Gen::QX { i, j, s: 1 } if *i == j + 1 => write!(f, "F{}", j),
            Gen::QX { i, j, s: 1 } => write!(f, "X({},{})", i, j),
            Gen::QX { i, j, s } => write!(f, "Xd({},{};{})", i, j, s),
            Gen::QXBar { i, j } if *j == i + 1 => write!(f, "Eb{}", i),
            Gen::QXBar { i, j } if *i == j + 1 => write!(f, "Fb{}", j),
            Gen::QXBar { i, j } => write!(f, "Xb({},{})", i, j),
            Gen::KBracket { i, c, t } => write!(f, "Kbr({};{};{})", i, c, t),
            Gen::QIdem(w) => write!(f, "1q[{}]", fmt_weight(w)),
            Gen::SwapS(k) => write!(f, "s{}", k),
            Gen::Cliff(k) => write!(f, "c{}", k),
            Gen::HeckeT(k) => write!(f, "T{}", k),
            Gen::Slot { slot, g } => write!(f, "{}@{}", g, slot),
        }
    }
}

pub type Word = Vec<Gen>;

pub fn word_parity(w: &[Gen]) -> u8 {
    w.iter().map(|g| g.parity()).sum::<u8>() % 2
}

/// A finite linear combination of words with nonzero Scalar coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Word, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Element::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        Element::term(Vec::new(), c)
    }

    pub fn gen(g: Gen) -> Self {
        Element::term(vec![g], Scalar::one())
    }

    pub fn word(w: Word) -> Self {
        Element::term(w, Scalar::one())
    }

    pub fn term(w: Word, c: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(w, c);
        e
    }

    /// Product of generators in order.
    pub fn monomial(gens: &[Gen]) -> Self {
        Element::word(gens.to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn coeff(&self, w: &[Gen]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut r = Element::zero();
        r.add_scaled(self, c);
        r
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Element {
        let mut r = Element::zero();
        for (w, c) in &self.terms {
            r.add_term(w.clone(), f(c));
        }
        r
    }

    /// Parity if homogeneous; zero is treated as even.
    pub fn parity(&self) -> Option<u8> {
        let mut p = None;
        for w in self.terms.keys() {
            let wp = word_parity(w);
            match p {
                None => p = Some(wp),
                Some(x) if x != wp => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(0))
    }

    pub fn alphabets(&self) -> Vec<Alphabet> {
        let mut v: Vec<Alphabet> = Vec::new();
        for w in self.terms.keys() {
            for g in w {
                let a = g.alphabet();
                if !v.contains(&a) {
                    v.push(a);
                }
            }
        }
        v
    }

    /// Bilinear concatenation product, checking alphabets.
    pub fn try_mul(&self, other: &Element) -> Result<Element, AlgebraError> {
        for a in self.alphabets() {
            for b in other.alphabets() {
                if !compatible(a, b) {
                    return Err(AlgebraError::AlphabetMismatch(format!("{:?}", a), format!("{:?}", b)));
                }
            }
        }
        Ok(self.mul_unchecked(other))
    }

    pub fn mul_unchecked(&self, other: &Element) -> Element {
        let mut r = Element::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                r.add_term(w, c1 * c2);
            }
        }
        r
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Applies a generator substitution (an algebra map) word by word.
    pub fn substitute(&self, f: &dyn Fn(&Gen) -> Element) -> Element {
        let mut r = Element::zero();
        for (w, c) in &self.terms {
            let mut acc = Element::scalar(c.clone());
            for g in w {
                acc = acc.mul_unchecked(&f(g));
                if acc.is_zero() {
                    break;
                }
            }
            r += &acc;
        }
        r
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(w, c)| serde_json::json!({ "word": w, "coeff": c.to_string() }))
            .collect();
        serde_json::Value::Array(v)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Element, AlgebraError> {
        #[derive(Deserialize)]
        struct T {
            word: Vec<Gen>,
            coeff: String,
        }
        let ts: Vec<T> = serde_json::from_value(v.clone()).map_err(|e| AlgebraError::Json(e.to_string()))?;
        let mut r = Element::zero();
        for t in ts {
            let c = Scalar::parse(&t.coeff).map_err(|e| AlgebraError::Json(e.to_string()))?;
            r.add_term(t.word, c);
        }
        Ok(r)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        for (w, c) in order {
            let ws = w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("*");
            let (neg, mag) = if c.is_laurent() && c.laurent_terms().map_or(false, |t| t.len() == 1 && t[0].1.is_negative()) {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let ms = mag.to_string();
            let simple = mag.is_laurent() && mag.laurent_terms().map_or(false, |t| t.len() == 1);
            if mag.is_one() {
                if ws.is_empty() {
                    write!(f, "1")?;
                } else {
                    write!(f, "{}", ws)?;
                }
            } else if ws.is_empty() {
                if simple {
                    write!(f, "{}", ms)?;
                } else {
                    write!(f, "({})", ms)?;
                }
            } else if simple {
                write!(f, "{}*{}", ms, ws)?;
            } else {
                write!(f, "({})*{}", ms, ws)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl std::ops::AddAssign<&Element> for Element {
    fn add_assign(&mut self, o: &Element) {
        for (w, c) in &o.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&Element> for Element {
    fn sub_assign(&mut self, o: &Element) {
        for (w, c) in &o.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl std::ops::Add for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl std::ops::Sub for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl std::ops::Mul for &Element {
    type Output = Element;
    fn mul(self, o: &Element) -> Element {
        self.mul_unchecked(o)
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&Scalar::from_int(-1))
    }
}

/// Free product, erroring on incompatible alphabets.
pub fn multiply(a: &Element, b: &Element) -> Result<Element, AlgebraError> {
    a.try_mul(b)
}

/// ab - (-1)^{|a||b|} ba, unnormalized.
pub fn super_commutator(a: &Element, b: &Element) -> Result<Element, AlgebraError> {
    let pa = a.parity().ok_or(AlgebraError::NonHomogeneous)?;
    let pb = b.parity().ok_or(AlgebraError::NonHomogeneous)?;
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    let sign = if pa * pb == 1 { Scalar::from_int(-1) } else { Scalar::one() };
    let mut r = ab;
    r.add_scaled(&ba, &-&sign);
    Ok(r)
}

pub type PairFn = dyn Fn(&Gen, &Gen) -> Option<Element> + Send + Sync;
pub type SingleFn = dyn Fn(&Gen) -> Option<Element> + Send + Sync;
/// Sees the suffix starting at a position; returns the length consumed and its replacement.
pub type RunFn = dyn Fn(&[Gen]) -> Option<(usize, Element)> + Send + Sync;
pub type OrderFn = dyn Fn(&[Gen]) -> Vec<i64> + Send + Sync;

#[derive(Clone)]
pub enum RuleKind {
    Pair(Arc<PairFn>),
    Single(Arc<SingleFn>),
    Run(Arc<RunFn>),
}

#[derive(Clone)]
pub struct Rule {
    pub name: String,
    pub kind: RuleKind,
}

impl Rule {
    pub fn pair(name: &str, f: impl Fn(&Gen, &Gen) -> Option<Element> + Send + Sync + 'static) -> Rule {
        Rule { name: name.to_string(), kind: RuleKind::Pair(Arc::new(f)) }
    }
    pub fn single(name: &str, f: impl Fn(&Gen) -> Option<Element> + Send + Sync + 'static) -> Rule {
        Rule { name: name.to_string(), kind: RuleKind::Single(Arc::new(f)) }
    }
    pub fn run(name: &str, f: impl Fn(&[Gen]) -> Option<(usize, Element)> + Send + Sync + 'static) -> Rule {
        Rule { name: name.to_string(), kind: RuleKind::Run(Arc::new(f)) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Fuel from the QUEERKIT_FUEL environment variable, or the default.
pub fn env_fuel() -> u64 {
    std::env::var("QUEERKIT_FUEL").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_FUEL)
}

/// An ordered list of adjacent-pair and single-letter rules with a word order and fuel.
#[derive(Clone)]
pub struct RewriteSystem {
    pub name: String,
    pub rules: Vec<Rule>,
    pub word_order: Arc<OrderFn>,
    pub fuel: u64,
}

impl RewriteSystem {
    pub fn new(name: &str, rules: Vec<Rule>, word_order: impl Fn(&[Gen]) -> Vec<i64> + Send + Sync + 'static) -> Self {
        RewriteSystem { name: name.to_string(), rules, word_order: Arc::new(word_order), fuel: env_fuel() }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    /// First applicable rule at position `i`: single, then run, then pair (i, i+1).
    fn rewrite_at(&self, w: &[Gen], i: usize) -> Option<(usize, Element)> {
        for r in &self.rules {
            if let RuleKind::Single(f) = &r.kind {
                if let Some(e) = f(&w[i]) {
                    return Some((1, e));
                }
            }
        }
        for r in &self.rules {
            if let RuleKind::Run(f) = &r.kind {
                if let Some((len, e)) = f(&w[i..]) {
                    return Some((len, e));
                }
            }
        }
        if i + 1 < w.len() {
            for r in &self.rules {
                if let RuleKind::Pair(f) = &r.kind {
                    if let Some(e) = f(&w[i], &w[i + 1]) {
                        return Some((2, e));
                    }
                }
            }
        }
        None
    }

    fn find_redex(&self, w: &[Gen], strategy: Strategy) -> Option<(usize, usize, Element)> {
        let pick = |i: usize| self.rewrite_at(w, i).map(|(len, e)| (i, len, e));
        match strategy {
            Strategy::Leftmost => (0..w.len()).find_map(pick),
            Strategy::Rightmost => (0..w.len()).rev().find_map(pick),
        }
    }

    pub fn is_irreducible(&self, w: &[Gen]) -> bool {
        self.find_redex(w, Strategy::Leftmost).is_none()
    }

    pub fn normal_form(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.normal_form_with(x, Strategy::Leftmost)
    }

    /// Rewrites the order-largest reducible word first until no rule applies.
    pub fn normal_form_with(&self, x: &Element, strategy: Strategy) -> Result<Element, AlgebraError> {
        let mut work: BTreeMap<(Vec<i64>, Word), Scalar> = BTreeMap::new();
        for (w, c) in x.terms() {
            push_work(&mut work, (self.word_order)(w), w.clone(), c.clone());
        }
        let mut out = Element::zero();
        let mut steps = 0u64;
        while let Some(((_, w), c)) = work.pop_last() {
            match self.find_redex(&w, strategy) {
                None => out.add_term(w, c),
                Some((i, len, rep)) => {
                    steps += 1;
                    if steps > self.fuel {
                        return Err(AlgebraError::FuelExhausted(self.fuel));
                    }
                    for (rw, rc) in rep.terms() {
                        let mut nw = Vec::with_capacity(w.len() + rw.len());
                        nw.extend_from_slice(&w[..i]);
                        nw.extend_from_slice(rw);
                        nw.extend_from_slice(&w[i + len..]);
                        let key = (self.word_order)(&nw);
                        push_work(&mut work, key, nw, rc * &c);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn push_work(work: &mut BTreeMap<(Vec<i64>, Word), Scalar>, key: Vec<i64>, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match work.entry((key, w)) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Number of pairs (a before b) with rank(a) > rank(b).
pub fn inversions(w: &[Gen], rank: impl Fn(&Gen) -> i64) -> i64 {
    let r: Vec<i64> = w.iter().map(rank).collect();
    let mut inv = 0;
    for a in 0..r.len() {
        for b in a + 1..r.len() {
            if r[a] > r[b] {
                inv += 1;
            }
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_examples() {
        let x = Element::gen(Gen::e(1));
        assert_eq!(multiply(&Element::one(), &x).unwrap(), x);
        let p = multiply(&Element::gen(Gen::e(1)), &Element::gen(Gen::f(1))).unwrap();
        assert_eq!(p, Element::monomial(&[Gen::e(1), Gen::f(1)]));
        let a = Element::gen(Gen::e(1)).scale(&Scalar::from_int(2));
        let b = Element::gen(Gen::f(1)).scale(&Scalar::from_int(3));
        assert_eq!(multiply(&a, &b).unwrap(), Element::monomial(&[Gen::e(1), Gen::f(1)]).scale(&Scalar::from_int(6)));
    }

    #[test]
    fn alphabet_mismatch() {
        let a = Element::gen(Gen::e(1));
        let b = Element::gen(Gen::qe(1));
        assert!(matches!(multiply(&a, &b), Err(AlgebraError::AlphabetMismatch(..))));
    }

    #[test]
    fn commutator_examples() {
        let h1 = Element::gen(Gen::h(1));
        let h2 = Element::gen(Gen::h(2));
        let c = super_commutator(&h1, &h2).unwrap();
        assert_eq!(c, &Element::monomial(&[Gen::h(1), Gen::h(2)]) - &Element::monomial(&[Gen::h(2), Gen::h(1)]));
        let hb = Element::gen(Gen::HBar(1));
        let c = super_commutator(&hb, &hb).unwrap();
        assert_eq!(c, Element::monomial(&[Gen::HBar(1), Gen::HBar(1)]).scale(&Scalar::from_int(2)));
        let e = Element::gen(Gen::e(1));
        assert!(super_commutator(&e, &e).unwrap().is_zero());
        let mixed = &e + &hb;
        assert_eq!(super_commutator(&mixed, &e), Err(AlgebraError::NonHomogeneous));
    }

    #[test]
    fn json_roundtrip() {
        let x = &Element::monomial(&[Gen::e(1), Gen::HBar(2)]).scale(&Scalar::parse("(q^2-1)/(q+3)").unwrap())
            + &Element::gen(Gen::L { i: -2, j: 1 });
        let j = x.to_json();
        assert_eq!(Element::from_json(&j).unwrap(), x);
    }

    #[test]
    fn trivial_normal_forms() {
        let sys = RewriteSystem::new("swap", vec![Rule::pair("sort", |a, b| {
            if a > b {
                Some(Element::monomial(&[b.clone(), a.clone()]))
            } else {
                None
            }
        })], |w| vec![inversions(w, |g| match g { Gen::SwapS(k) => *k as i64, _ => 0 })]);
        assert!(sys.normal_form(&Element::zero()).unwrap().is_zero());
        let w = Element::monomial(&[Gen::SwapS(1), Gen::SwapS(2)]);
        assert_eq!(sys.normal_form(&w).unwrap(), w);
        let v = Element::monomial(&[Gen::SwapS(3), Gen::SwapS(1), Gen::SwapS(2)]);
        assert_eq!(sys.normal_form(&v).unwrap(), Element::monomial(&[Gen::SwapS(1), Gen::SwapS(2), Gen::SwapS(3)]));
    }

    #[test]
    fn fuel_exhaustion() {
        let sys = RewriteSystem::new("loop", vec![Rule::pair("flip", |a, b| Some(Element::monomial(&[b.clone(), a.clone()])))], |_| vec![0])
            .with_fuel(50);
        let w = Element::monomial(&[Gen::SwapS(1), Gen::SwapS(2)]);
        assert_eq!(sys.normal_form(&w), Err(AlgebraError::FuelExhausted(50)));
    }

    mod props {
        use super::{Element, Gen, RewriteSystem, Strategy as Order};
        use crate::classical::classical_rules;
        use crate::quantum::{l_letters, olshanski_rules};
        use proptest::prelude::*;
        use proptest::strategy::Strategy;
        use std::sync::OnceLock;

        fn classical_gen() -> impl Strategy<Value = Gen> {
            (1u8..=3, 1u8..=3, 0u8..4, 1u32..=2).prop_map(|(i, j, k, s)| {
                let j = if i == j { i % 3 + 1 } else { j };
                match k {
                    0 => Gen::h(i),
                    1 => Gen::HBar(i),
                    2 => Gen::X { i, j, s },
                    _ => Gen::XBar { i, j },
                }
            })
        }

        fn l_gen() -> impl Strategy<Value = Gen> {
            let ls = l_letters(2);
            (0..ls.len()).prop_map(move |k| Gen::L { i: ls[k].0, j: ls[k].1 })
        }

        fn word(g: impl Strategy<Value = Gen>, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Element> {
            prop::collection::vec(g, len).prop_map(Element::word)
        }

        fn classical() -> &'static RewriteSystem {
            static S: OnceLock<RewriteSystem> = OnceLock::new();
            S.get_or_init(|| classical_rules(3))
        }

        fn olshanski() -> &'static RewriteSystem {
            static S: OnceLock<RewriteSystem> = OnceLock::new();
            S.get_or_init(|| olshanski_rules(2))
        }

        fn associates(sys: &RewriteSystem, a: &Element, b: &Element, c: &Element) -> bool {
            let nf = |x: &Element| sys.normal_form(x).unwrap();
            nf(&(&nf(&(a * b)) * c)) == nf(&(a * &nf(&(b * c))))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(500))]
            #[test]
            fn classical_confluence(a in word(classical_gen(), 1..=2), b in word(classical_gen(), 1..=2), c in word(classical_gen(), 1..=2)) {
                prop_assert!(associates(classical(), &a, &b, &c));
            }

            #[test]
            fn olshanski_confluence(a in word(l_gen(), 1..=2), b in word(l_gen(), 1..=2), c in word(l_gen(), 1..=2)) {
                prop_assert!(associates(olshanski(), &a, &b, &c));
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]
            #[test]
            fn strategy_independence(x in word(classical_gen(), 6..=6), y in word(l_gen(), 6..=6)) {
                for (sys, z) in [(classical(), &x), (olshanski(), &y)] {
                    let l = sys.normal_form_with(z, Order::Leftmost).unwrap();
                    let r = sys.normal_form_with(z, Order::Rightmost).unwrap();
                    prop_assert_eq!(&l, &r);
                    prop_assert_eq!(sys.normal_form(&l).unwrap(), l.clone());
                    prop_assert!(l.terms().all(|(w, _)| sys.is_irreducible(w)));
                }
            }

            #[test]
            fn parity_is_multiplicative(x in word(classical_gen(), 1..=4), y in word(classical_gen(), 1..=4)) {
                let (px, py) = (x.parity().unwrap(), y.parity().unwrap());
                let xy = &x * &y;
                prop_assert_eq!(xy.parity(), Some((px + py) % 2));
                let nf = classical().normal_form(&xy).unwrap();
                prop_assert!(nf.is_zero() || nf.parity() == Some((px + py) % 2));
            }
        }
    }
}
