//! Exact sparse operators on V^{⊗r}, V = V(n|n): φ_r, ψ_r, Φ_r, Ψ_r and supercommutants.

use crate::classical::{compositions, generator_matrix};
use crate::freealg::{AlgebraError, Element, Gen};
use crate::quantum::{l_form, sgn};
use crate::scalar::{binom, q_minus_qinv, Scalar, ScalarError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
pub use crate::linalg::{Echelon, Field};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("generator {0} is not defined for rank {1}")]
    Rank(String, usize),
    #[error("slot {0} out of range")]
    Slot(usize),
    #[error("letter {0} has no action on tensor space")]
    Unsupported(String),
    #[error("invalid L index ({0},{1})")]
    LIndex(i8, i8),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

// ---------------------------------------------------------------------------
// tensor space

/// Position of v_j (j ∈ I(n|n)) in the basis v_1..v_n, v_{-1}..v_{-n}.
pub fn site_index(n: usize, j: i8) -> usize {
    if j > 0 {
        j as usize - 1
    } else {
        n + (-j) as usize - 1
    }
}

pub fn site_label(n: usize, idx: usize) -> i8 {
    if idx < n {
        idx as i8 + 1
    } else {
        -((idx - n) as i8 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSpace {
    pub n: usize,
    pub r: usize,
}

impl TensorSpace {
    pub fn new(n: usize, r: usize) -> Self {
        TensorSpace { n, r }
    }

    pub fn dim(&self) -> usize {
        (2 * self.n).pow(self.r as u32)
    }

    pub fn labels(&self, idx: usize) -> Vec<i8> {
        let d = 2 * self.n;
        let mut out = vec![0i8; self.r];
        let mut x = idx;
        for k in (0..self.r).rev() {
            out[k] = site_label(self.n, x % d);
            x /= d;
        }
        out
    }

    pub fn index(&self, labels: &[i8]) -> usize {
        labels.iter().fold(0, |acc, &j| acc * 2 * self.n + site_index(self.n, j))
    }

    pub fn parity(&self, idx: usize) -> u8 {
        (self.labels(idx).iter().filter(|&&j| j < 0).count() % 2) as u8
    }

    /// wt(j)_i = #{k : j_k = ±i}.
    pub fn weight(&self, idx: usize) -> Vec<u32> {
        let mut w = vec![0u32; self.n];
        for j in self.labels(idx) {
            w[j.unsigned_abs() as usize - 1] += 1;
        }
        w
    }
}

// ---------------------------------------------------------------------------
// sparse operators

/// Sparse linear map, rows indexed by output basis vector.
#[derive(Clone)]
pub struct SparseOperator<F: Field = Scalar> {
    pub dim: usize,
    pub parity: Option<u8>,
    pub rows: Vec<BTreeMap<usize, F>>,
}

impl<F: Field> PartialEq for SparseOperator<F> {
    fn eq(&self, o: &Self) -> bool {
        self.dim == o.dim && self.rows == o.rows
    }
}

impl<F: Field> fmt::Debug for SparseOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseOperator(dim {}, parity {:?}, nnz {})", self.dim, self.parity, self.nnz())
    }
}

impl<F: Field> SparseOperator<F> {
    pub fn zero(dim: usize, parity: u8) -> Self {
        SparseOperator { dim, parity: Some(parity), rows: vec![BTreeMap::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim, 0);
        for i in 0..dim {
            m.rows[i].insert(i, F::one());
        }
        m
    }

    pub fn set(&mut self, row: usize, col: usize, v: F) {
        if v.is_zero() {
            self.rows[row].remove(&col);
        } else {
            self.rows[row].insert(col, v);
        }
    }

    pub fn add_at(&mut self, row: usize, col: usize, v: &F) {
        if v.is_zero() {
            return;
        }
        let e = self.rows[row].entry(col).or_insert_with(F::zero);
        *e = e.add(v);
        if e.is_zero() {
            self.rows[row].remove(&col);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> F {
        self.rows[row].get(&col).cloned().unwrap_or_else(F::zero)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (i, j, v) in o.entries() {
            r.add_at(i, j, v);
        }
        r.parity = if self.is_zero() {
            o.parity
        } else if o.is_zero() || self.parity == o.parity {
            self.parity
        } else {
            None
        };
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().neg()))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return SparseOperator { dim: self.dim, parity: self.parity, rows: vec![BTreeMap::new(); self.dim] };
        }
        let rows = self.rows.iter().map(|r| r.iter().map(|(j, v)| (*j, v.mul(c))).collect()).collect();
        SparseOperator { dim: self.dim, parity: self.parity, rows }
    }

    /// self ∘ o.
    pub fn compose(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.dim, 0);
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, F> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &o.rows[*k] {
                    let e = acc.entry(*j).or_insert_with(F::zero);
                    *e = e.add(&a.mul(b));
                }
            }
            acc.retain(|_, v| !v.is_zero());
            r.rows[i] = acc;
        }
        r.parity = match (self.parity, o.parity) {
            (Some(a), Some(b)) => Some((a + b) % 2),
            _ => None,
        };
        r
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> Result<G, ScalarError>) -> Result<SparseOperator<G>, ScalarError> {
        let mut rows = Vec::with_capacity(self.dim);
        for r in &self.rows {
            let mut m = BTreeMap::new();
            for (j, v) in r {
                let g = f(v)?;
                if !g.is_zero() {
                    m.insert(*j, g);
                }
            }
            rows.push(m);
        }
        Ok(SparseOperator { dim: self.dim, parity: self.parity, rows })
    }

    /// Parity read off the support; None if mixed.
    pub fn support_parity(&self, space_parity: impl Fn(usize) -> u8) -> Option<u8> {
        let mut p = None;
        for (i, j, _) in self.entries() {
            let x = (space_parity(i) + space_parity(j)) % 2;
            match p {
                None => p = Some(x),
                Some(y) if y != x => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(self.parity.unwrap_or(0)))
    }

    /// Super tensor product (a ⊗ b)(v ⊗ w) = (−1)^{b̂ v̂} a v ⊗ b w.
    pub fn super_kron(&self, b: &Self, left_parity: &dyn Fn(usize) -> u8, signed: bool) -> Self {
        let bp = b.parity.unwrap_or(0);
        let d = self.dim * b.dim;
        let mut r = Self::zero(d, 0);
        for (i1, j1, a) in self.entries() {
            let flip = signed && bp * left_parity(j1) % 2 == 1;
            for (i2, j2, c) in b.entries() {
                let v = a.mul(c);
                r.add_at(i1 * b.dim + i2, j1 * b.dim + j2, &if flip { v.neg() } else { v });
            }
        }
        r.parity = match (self.parity, b.parity) {
            (Some(x), Some(y)) => Some((x + y) % 2),
            _ => None,
        };
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::identity(self.dim);
        for _ in 0..e {
            r = r.compose(self);
        }
        r
    }
}

impl SparseOperator<Scalar> {
    pub fn specialize(&self, q0: &BigRational) -> Result<SparseOperator<BigRational>, ScalarError> {
        self.map(|s| s.specialize(q0))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> =
            self.entries().map(|(i, j, v)| serde_json::json!([i, j, v.to_string()])).collect();
        serde_json::json!({"dim": self.dim, "parity": self.parity, "entries": entries})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, RepError> {
        let bad = || RepError::Unsupported("malformed operator JSON".into());
        let dim = v["dim"].as_u64().ok_or_else(bad)? as usize;
        let parity = v["parity"].as_u64().map(|p| p as u8);
        let mut m = Self::zero(dim, parity.unwrap_or(0));
        m.parity = parity;
        for e in v["entries"].as_array().ok_or_else(bad)? {
            let i = e[0].as_u64().ok_or_else(bad)? as usize;
            let j = e[1].as_u64().ok_or_else(bad)? as usize;
            let s = Scalar::parse(e[2].as_str().ok_or_else(bad)?)?;
            m.set(i, j, s);
        }
        Ok(m)
    }
}

/// Y_(k) = id^{⊗k−1} ⊗ Y ⊗ id^{⊗r−k}.
pub fn embed_slot<F: Field>(space: &TensorSpace, y: &SparseOperator<F>, k: usize, signed: bool) -> SparseOperator<F> {
    let d = 2 * space.n;
    let left_dim = d.pow(k as u32 - 1);
    let right_dim = d.pow((space.r - k) as u32);
    let left = SparseOperator::<F>::identity(left_dim);
    let lsp = TensorSpace::new(space.n, k - 1);
    let lpar = move |i: usize| if lsp.r == 0 { 0 } else { lsp.parity(i) };
    let a = left.super_kron(y, &lpar, signed);
    let sp = TensorSpace::new(space.n, k);
    a.super_kron(&SparseOperator::identity(right_dim), &move |i| sp.parity(i), signed)
}

/// Operator on V from its gl(n|n) matrix (rows/cols ordered 1..n, −1..−n).
fn from_gl<F: Field>(m: &[Vec<BigRational>], parity: u8, conv: &dyn Fn(&BigRational) -> F) -> SparseOperator<F> {
    let d = m.len();
    let mut r = SparseOperator::zero(d, parity);
    for i in 0..d {
        for j in 0..d {
            if !Zero::is_zero(&m[i][j]) {
                r.set(i, j, conv(&m[i][j]));
            }
        }
    }
    r
}

/// Primitive action Σ_k Y_(k) of a homogeneous Lie superalgebra element.
pub fn primitive_action<F: Field>(space: &TensorSpace, y: &SparseOperator<F>) -> SparseOperator<F> {
    let mut acc = SparseOperator::zero(space.dim(), y.parity.unwrap_or(0));
    for k in 1..=space.r {
        acc = acc.add(&embed_slot(space, y, k, true));
    }
    acc.parity = y.parity;
    acc
}

fn diagonal<F: Field>(space: &TensorSpace, f: impl Fn(&[u32]) -> F) -> SparseOperator<F> {
    let mut m = SparseOperator::zero(space.dim(), 0);
    for i in 0..space.dim() {
        m.set(i, i, f(&space.weight(i)));
    }
    m
}

fn scalar_of_rat(x: &BigRational) -> Scalar {
    Scalar::from_rational(x)
}

// ---------------------------------------------------------------------------
// classical φ_r and Sergeev ψ_r

/// φ_r with a per-generator cache.
pub struct ClassicalRep {
    pub space: TensorSpace,
    cache: Mutex<HashMap<Gen, SparseOperator<Scalar>>>,
}

impl ClassicalRep {
    pub fn new(n: usize, r: usize) -> Self {
        ClassicalRep { space: TensorSpace::new(n, r), cache: Mutex::new(HashMap::new()) }
    }

    fn check(&self, g: &Gen) -> Result<(), RepError> {
        let n = self.space.n as u8;
        let ok = match g {
            Gen::HBinom { i, .. } | Gen::HBar(i) => (1..=n).contains(i),
            Gen::X { i, j, .. } | Gen::XBar { i, j } => (1..=n).contains(i) && (1..=n).contains(j) && i != j,
            Gen::Idem(l) => l.len() == n as usize,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(RepError::Rank(g.to_string(), self.space.n))
        }
    }

    pub fn letter(&self, g: &Gen) -> Result<SparseOperator<Scalar>, RepError> {
        if let Some(m) = self.cache.lock().unwrap().get(g) {
            return Ok(m.clone());
        }
        self.check(g)?;
        let sp = &self.space;
        let m = match g {
            Gen::HBinom { i, s } => diagonal(sp, |w| Scalar::from_int(binom(w[*i as usize - 1] as i64, *s))),
            Gen::Idem(l) => diagonal(sp, |w| {
                let p: BigInt = w.iter().zip(l).map(|(a, b)| binom(*a as i64, *b)).product();
                Scalar::from_int(p)
            }),
            Gen::X { i, j, s } if *s != 1 => {
                let x = self.letter(&Gen::X { i: *i, j: *j, s: 1 })?;
                let fact: BigInt = (1..=*s as i64).map(BigInt::from).product();
                x.pow(*s).scale(&Scalar::from_int(fact).inv()?)
            }
            _ => {
                let qm = generator_matrix(sp.n, g).ok_or_else(|| RepError::Unsupported(g.to_string()))?;
                let y = from_gl(&qm.to_gl(), g.parity(), &scalar_of_rat);
                primitive_action(sp, &y)
            }
        };
        self.cache.lock().unwrap().insert(g.clone(), m.clone());
        Ok(m)
    }

    pub fn act(&self, x: &Element) -> Result<SparseOperator<Scalar>, RepError> {
        act_with(self.space.dim(), x, &|g| self.letter(g))
    }
}

fn act_with(
    dim: usize,
    x: &Element,
    letter: &dyn Fn(&Gen) -> Result<SparseOperator<Scalar>, RepError>,
) -> Result<SparseOperator<Scalar>, RepError> {
    let mut acc: Option<SparseOperator<Scalar>> = None;
    for (w, c) in x.terms() {
        let mut m = SparseOperator::identity(dim);
        for g in w {
            m = m.compose(&letter(g)?);
        }
        let t = m.scale(c);
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    Ok(acc.unwrap_or_else(|| SparseOperator::zero(dim, 0)))
}

/// φ_r(x) on V^{⊗r}.
pub fn phi_r(x: &Element, n: usize, r: usize) -> Result<SparseOperator<Scalar>, RepError> {
    ClassicalRep::new(n, r).act(x)
}

fn j_v<F: Field>(n: usize) -> SparseOperator<F> {
    let mut m = SparseOperator::zero(2 * n, 1);
    for a in 1..=n as i8 {
        m.set(site_index(n, -a), site_index(n, a), F::one());
        m.set(site_index(n, a), site_index(n, -a), F::one().neg());
    }
    m
}

/// ψ_r of a Sergeev letter s_k or c_l.
pub fn sergeev_letter(g: &Gen, n: usize, r: usize) -> Result<SparseOperator<Scalar>, RepError> {
    let sp = TensorSpace::new(n, r);
    match g {
        Gen::SwapS(k) => {
            let k = *k as usize;
            if k == 0 || k >= r {
                return Err(RepError::Slot(k));
            }
            let mut m = SparseOperator::zero(sp.dim(), 0);
            for idx in 0..sp.dim() {
                let mut l = sp.labels(idx);
                let sign = if l[k - 1] < 0 && l[k] < 0 { -1 } else { 1 };
                l.swap(k - 1, k);
                m.set(sp.index(&l), idx, Scalar::from_int(sign));
            }
            Ok(m)
        }
        Gen::Cliff(l) => {
            let l = *l as usize;
            if l == 0 || l > r {
                return Err(RepError::Slot(l));
            }
            Ok(embed_slot(&sp, &j_v(n), l, true))
        }
        _ => Err(RepError::Unsupported(g.to_string())),
    }
}

pub fn sergeev_action(x: &Element, n: usize, r: usize) -> Result<SparseOperator<Scalar>, RepError> {
    act_with(TensorSpace::new(n, r).dim(), x, &|g| sergeev_letter(g, n, r))
}

/// Generators s_1..s_{r−1}, c_1..c_r as operators.
pub fn sergeev_generators(n: usize, r: usize) -> Vec<SparseOperator<Scalar>> {
    let mut v = Vec::new();
    for k in 1..r {
        v.push(sergeev_letter(&Gen::SwapS(k as u8), n, r).unwrap());
    }
    for l in 1..=r {
        v.push(sergeev_letter(&Gen::Cliff(l as u8), n, r).unwrap());
    }
    v
}

// ---------------------------------------------------------------------------
// quantum Φ_r and Hecke–Clifford Ψ_r

fn eunit(n: usize, i: i8, j: i8) -> SparseOperator<Scalar> {
    let p = if (i as i32) * (j as i32) > 0 { 0 } else { 1 };
    let mut m = SparseOperator::zero(2 * n, p);
    m.set(site_index(n, i), site_index(n, j), Scalar::one());
    m
}

/// S_{i,j} ∈ End(V), i ≤ j.
pub fn s_matrix(n: usize, i: i8, j: i8) -> Result<SparseOperator<Scalar>, RepError> {
    let nn = n as i8;
    if i > j || i == 0 || j == 0 || i.abs() > nn || j.abs() > nn {
        return Err(RepError::LIndex(i, j));
    }
    let qq = q_minus_qinv();
    let id = SparseOperator::<Scalar>::identity(2 * n);
    let pair = |a: i8, b: i8, c: i8, d: i8| eunit(n, a, b).add(&eunit(n, c, d));
    Ok(if i == j && i > 0 {
        id.add(&pair(i, i, -i, -i).scale(&(&Scalar::q() - &Scalar::one())))
    } else if i == j {
        let a = -i;
        id.add(&pair(a, a, -a, -a).scale(&(&Scalar::q_pow(-1) - &Scalar::one())))
    } else if i > 0 {
        // S_{b,a}, b < a
        let (b, a) = (i, j);
        pair(a, b, -a, -b).scale(&qq)
    } else if j < 0 {
        // S_{-b,-a}, a < b
        let (b, a) = (-i, -j);
        pair(a, b, -a, -b).scale(&-&qq)
    } else {
        // S_{-b,a}
        let (b, a) = (-i, j);
        pair(-a, b, a, -b).scale(&-&qq)
    })
}

/// I(n|n) in increasing integer order.
pub fn index_set(n: usize) -> Vec<i8> {
    let nn = n as i8;
    (-nn..=nn).filter(|&x| x != 0).collect()
}

/// Φ_r with a per-generator cache.
pub struct QuantumRep {
    pub space: TensorSpace,
    cache: Mutex<HashMap<Gen, SparseOperator<Scalar>>>,
}

impl QuantumRep {
    pub fn new(n: usize, r: usize) -> Self {
        QuantumRep { space: TensorSpace::new(n, r), cache: Mutex::new(HashMap::new()) }
    }

    fn l_op(&self, i: i8, j: i8) -> Result<SparseOperator<Scalar>, RepError> {
        let n = self.space.n;
        let idx = index_set(n);
        if !idx.contains(&i) || !idx.contains(&j) || i > j {
            return Err(RepError::LIndex(i, j));
        }
        // Σ over chains i ≤ k_1 ≤ ... ≤ k_{r-1} ≤ j
        let mut partial: Vec<(i8, SparseOperator<Scalar>, usize)> =
            idx.iter().filter(|&&k| k >= i && k <= j).map(|&k| (k, s_matrix(n, i, k).unwrap(), 1)).collect();
        if self.space.r == 0 {
            return Ok(SparseOperator::identity(1));
        }
        for step in 1..self.space.r {
            let mut next: Vec<(i8, SparseOperator<Scalar>, usize)> = Vec::new();
            let lsp = TensorSpace::new(n, step);
            for (k, op, _) in &partial {
                let ks: Vec<i8> = if step == self.space.r - 1 { vec![j] } else { idx.iter().copied().filter(|&m| m >= *k && m <= j).collect() };
                for k2 in ks {
                    if k2 < *k {
                        continue;
                    }
                    let s = s_matrix(n, *k, k2)?;
                    if s.is_zero() {
                        continue;
                    }
                    let t = op.super_kron(&s, &|x| lsp.parity(x), true);
                    if let Some(e) = next.iter_mut().find(|e| e.0 == k2) {
                        e.1 = e.1.add(&t);
                    } else {
                        next.push((k2, t, step + 1));
                    }
                }
            }
            partial = next;
        }
        let mut acc = SparseOperator::zero(self.space.dim(), crate::freealg::l_parity(i, j));
        for (k, op, _) in partial {
            if k == j {
                acc = acc.add(&op);
            }
        }
        acc.parity = Some(crate::freealg::l_parity(i, j));
        Ok(acc)
    }

    pub fn letter(&self, g: &Gen) -> Result<SparseOperator<Scalar>, RepError> {
        if let Some(m) = self.cache.lock().unwrap().get(g) {
            return Ok(m.clone());
        }
        let n = self.space.n as u8;
        let ok = match g {
            Gen::K { i, .. } | Gen::KBar(i) | Gen::KBracket { i, .. } => (1..=n).contains(i),
            Gen::QX { i, j, .. } | Gen::QXBar { i, j } => (1..=n).contains(i) && (1..=n).contains(j) && i != j,
            Gen::QIdem(l) => l.len() == n as usize,
            _ => true,
        };
        if !ok {
            return Err(RepError::Rank(g.to_string(), self.space.n));
        }
        let m = match g {
            Gen::L { i, j } => self.l_op(*i, *j)?,
            Gen::K { i, e } => {
                let i = *i as usize;
                let e = *e as i64;
                diagonal(&self.space, |w| Scalar::q_pow(e * w[i - 1] as i64))
            }
            Gen::KBracket { i, c, t } => {
                let i = *i as usize;
                diagonal(&self.space, |w| crate::scalar::bracket_eval(w[i - 1] as i64, *c as i64, *t))
            }
            Gen::QIdem(l) => diagonal(&self.space, |w| {
                let mut p = Scalar::one();
                for (a, b) in w.iter().zip(l) {
                    p = &p * &crate::scalar::bracket_eval(*a as i64, 0, *b);
                }
                p
            }),
            Gen::QX { s, i, j } if *s != 1 => {
                let x = self.letter(&Gen::QX { i: *i, j: *j, s: 1 })?;
                x.pow(*s).scale(&crate::scalar::qfactorial(*s).inv()?)
            }
            _ => {
                let e = l_form(g).ok_or_else(|| RepError::Unsupported(g.to_string()))?;
                let mut op = act_with(self.space.dim(), &e, &|h| self.letter(h))?;
                op.parity = Some(g.parity());
                op
            }
        };
        self.cache.lock().unwrap().insert(g.clone(), m.clone());
        Ok(m)
    }

    pub fn act(&self, x: &Element) -> Result<SparseOperator<Scalar>, RepError> {
        act_with(self.space.dim(), x, &|g| self.letter(g))
    }
}

/// Φ_r(x) for x over the quantum alphabet.
#[allow(non_snake_case)]
pub fn Phi_r(x: &Element, n: usize, r: usize) -> Result<SparseOperator<Scalar>, RepError> {
    QuantumRep::new(n, r).act(x)
}

/// S = Σ_{i≤j} S_{i,j} ⊗ E_{i,j} as a list of tensor factors.
pub fn s_terms(n: usize) -> Vec<(SparseOperator<Scalar>, SparseOperator<Scalar>)> {
    let idx = index_set(n);
    let mut v = Vec::new();
    for &i in &idx {
        for &j in &idx {
            if i <= j {
                let s = s_matrix(n, i, j).unwrap();
                if !s.is_zero() {
                    v.push((s, eunit(n, i, j)));
                }
            }
        }
    }
    v
}

/// T = Σ sgn(j) E_{i,j} ⊗ E_{j,i}.
pub fn t_terms(n: usize) -> Vec<(SparseOperator<Scalar>, SparseOperator<Scalar>)> {
    let idx = index_set(n);
    let mut v = Vec::new();
    for &i in &idx {
        for &j in &idx {
            v.push((eunit(n, i, j).scale(&Scalar::from_int(sgn(j))), eunit(n, j, i)));
        }
    }
    v
}

/// Z_(j,k) = Σ_t (H_t)_(j) (I_t)_(k) on V^{⊗r}.
pub fn embed_pair(
    space: &TensorSpace,
    terms: &[(SparseOperator<Scalar>, SparseOperator<Scalar>)],
    j: usize,
    k: usize,
    signed: bool,
) -> SparseOperator<Scalar> {
    let mut acc = SparseOperator::zero(space.dim(), 0);
    for (h, i) in terms {
        let t = embed_slot(space, h, j, signed).compose(&embed_slot(space, i, k, signed));
        acc = acc.add(&t);
    }
    acc
}

/// The operator S on V ⊗ V.
pub fn build_s(n: usize) -> SparseOperator<Scalar> {
    let mut m = embed_pair(&TensorSpace::new(n, 2), &s_terms(n), 1, 2, true);
    m.parity = Some(0);
    m
}

/// S̄ = T S on V ⊗ V.
pub fn build_sbar(n: usize) -> SparseOperator<Scalar> {
    let sp = TensorSpace::new(n, 2);
    let mut m = embed_pair(&sp, &t_terms(n), 1, 2, true).compose(&build_s(n));
    m.parity = Some(0);
    m
}

/// Ψ_r of a Hecke–Clifford letter T_k or c_l.
pub fn hecke_clifford_letter(g: &Gen, n: usize, r: usize) -> Result<SparseOperator<Scalar>, RepError> {
    let sp = TensorSpace::new(n, r);
    match g {
        Gen::HeckeT(k) => {
            let k = *k as usize;
            if k == 0 || k >= r {
                return Err(RepError::Slot(k));
            }
            let sbar = build_sbar(n);
            let left = TensorSpace::new(n, k - 1);
            let a = SparseOperator::identity(left.dim()).super_kron(&sbar, &|i| if left.r == 0 { 0 } else { left.parity(i) }, true);
            let mid = TensorSpace::new(n, k + 1);
            let right = SparseOperator::identity(TensorSpace::new(n, r - k - 1).dim());
            let mut m = a.super_kron(&right, &|i| mid.parity(i), true);
            m.parity = Some(0);
            Ok(m)
        }
        Gen::Cliff(l) => {
            let l = *l as usize;
            if l == 0 || l > r {
                return Err(RepError::Slot(l));
            }
            Ok(embed_slot(&sp, &j_v(n), l, true))
        }
        _ => Err(RepError::Unsupported(g.to_string())),
    }
}

pub fn hecke_clifford_action(x: &Element, n: usize, r: usize) -> Result<SparseOperator<Scalar>, RepError> {
    act_with(TensorSpace::new(n, r).dim(), x, &|g| hecke_clifford_letter(g, n, r))
}

pub fn hecke_clifford_generators(n: usize, r: usize) -> Vec<SparseOperator<Scalar>> {
    let mut v = Vec::new();
    for k in 1..r {
        v.push(hecke_clifford_letter(&Gen::HeckeT(k as u8), n, r).unwrap());
    }
    for l in 1..=r {
        v.push(hecke_clifford_letter(&Gen::Cliff(l as u8), n, r).unwrap());
    }
    v
}

/// Experimental: S_12 S_13 S_23 = S_23 S_13 S_12 on V^{⊗3}, with or without Koszul signs.
pub fn qybe_holds(n: usize, signed: bool) -> bool {
    let sp = TensorSpace::new(n, 3);
    let t = s_terms(n);
    let s12 = embed_pair(&sp, &t, 1, 2, signed);
    let s13 = embed_pair(&sp, &t, 1, 3, signed);
    let s23 = embed_pair(&sp, &t, 2, 3, signed);
    s12.compose(&s13).compose(&s23) == s23.compose(&s13).compose(&s12)
}

// ---------------------------------------------------------------------------
// linear algebra

/// Rank of a family of operators viewed as vectors of length dim².
pub fn operator_rank<F: Field>(ops: &[SparseOperator<F>]) -> usize {
    let mut ech = Echelon::new();
    for op in ops {
        let d = op.dim;
        let row: BTreeMap<usize, F> = op.entries().map(|(i, j, v)| (i * d + j, v.clone())).collect();
        ech.insert(row);
    }
    ech.rank()
}

fn weight_preserving<F: Field>(space: &TensorSpace, g: &SparseOperator<F>) -> bool {
    g.entries().all(|(i, j, _)| space.weight(i) == space.weight(j))
}

/// dim of {f homogeneous : f g = (−1)^{f̂ ĝ} g f for all generators g}.
pub fn supercommutant_dim<F: Field>(space: &TensorSpace, gens: &[SparseOperator<F>]) -> usize {
    let d = space.dim();
    let par: Vec<u8> = (0..d).map(|i| space.parity(i)).collect();
    let blocks: Vec<Vec<usize>> = if gens.iter().all(|g| weight_preserving(space, g)) {
        let mut by: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for i in 0..d {
            by.entry(space.weight(i)).or_default().push(i);
        }
        by.into_values().collect()
    } else {
        vec![(0..d).collect()]
    };
    // column view of each generator
    let cols: Vec<Vec<BTreeMap<usize, F>>> = gens
        .iter()
        .map(|g| {
            let mut c = vec![BTreeMap::new(); d];
            for (i, j, v) in g.entries() {
                c[j].insert(i, v.clone());
            }
            c
        })
        .collect();
    let mut total = 0;
    for bm in &blocks {
        for bn in &blocks {
            for p in 0..2u8 {
                let unknowns: Vec<(usize, usize)> =
                    bm.iter().flat_map(|&a| bn.iter().map(move |&b| (a, b))).filter(|&(a, b)| (par[a] + par[b]) % 2 == p).collect();
                if unknowns.is_empty() {
                    continue;
                }
                let uidx: HashMap<(usize, usize), usize> = unknowns.iter().enumerate().map(|(k, &u)| (u, k)).collect();
                let mut ech = Echelon::<F>::new();
                for (gi, g) in gens.iter().enumerate() {
                    let gp = g.parity.unwrap_or(0);
                    let sign = if p * gp % 2 == 1 { F::one().neg() } else { F::one() };
                    for &a in bm {
                        for &c in bn {
                            // (f g)(a,c) − s (g f)(a,c)
                            let mut row: BTreeMap<usize, F> = BTreeMap::new();
                            for (b, gv) in &cols[gi][c] {
                                if let Some(&k) = uidx.get(&(a, *b)) {
                                    let e = row.entry(k).or_insert_with(F::zero);
                                    *e = e.add(gv);
                                }
                            }
                            for (b, gv) in &g.rows[a] {
                                if let Some(&k) = uidx.get(&(*b, c)) {
                                    let e = row.entry(k).or_insert_with(F::zero);
                                    *e = e.sub(&sign.mul(gv));
                                }
                            }
                            row.retain(|_, v| !v.is_zero());
                            if !row.is_empty() {
                                ech.insert(row);
                            }
                        }
                    }
                }
                total += unknowns.len() - ech.rank();
            }
        }
    }
    total
}

/// Weight projections Σ over basis vectors of weight λ.
pub fn weight_projection(space: &TensorSpace, lambda: &[u32]) -> SparseOperator<Scalar> {
    diagonal(space, |w| if w == lambda { Scalar::one() } else { Scalar::zero() })
}

pub fn weights(n: usize, r: usize) -> Vec<Vec<u32>> {
    compositions(n, r as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(g: Gen) -> Element {
        Element::gen(g)
    }

    #[test]
    fn sergeev_relations() {
        let (n, r) = (2, 3);
        let d = TensorSpace::new(n, r).dim();
        let id = SparseOperator::<Scalar>::identity(d);
        let c1 = sergeev_letter(&Gen::Cliff(1), n, r).unwrap();
        let c2 = sergeev_letter(&Gen::Cliff(2), n, r).unwrap();
        let s1 = sergeev_letter(&Gen::SwapS(1), n, r).unwrap();
        let s2 = sergeev_letter(&Gen::SwapS(2), n, r).unwrap();
        assert_eq!(c1.compose(&c1), id.scale(&Scalar::from_int(-1)));
        assert_eq!(c1.compose(&c2), c2.compose(&c1).scale(&Scalar::from_int(-1)));
        assert_eq!(s1.compose(&s1), id);
        assert_eq!(s1.compose(&s2).compose(&s1), s2.compose(&s1).compose(&s2));
        assert_eq!(s1.compose(&c1), c2.compose(&s1));
    }

    #[test]
    fn phi_cartan() {
        let rep = ClassicalRep::new(2, 2);
        let h1 = rep.letter(&Gen::h(1)).unwrap();
        for i in 0..rep.space.dim() {
            assert_eq!(h1.get(i, i), Scalar::from_int(rep.space.weight(i)[0] as i64));
        }
        let hb = rep.letter(&Gen::HBar(2)).unwrap();
        for (i, j, _) in hb.entries() {
            assert!(rep.space.weight(j)[1] > 0);
            assert!(rep.space.weight(i)[1] > 0);
        }
        assert_eq!(rep.act(&Element::one()).unwrap(), SparseOperator::identity(16));
    }

    #[test]
    fn classical_rep_supercommutes_with_sergeev() {
        let (n, r) = (2, 2);
        let rep = ClassicalRep::new(n, r);
        let gens = sergeev_generators(n, r);
        for g in [Gen::h(1), Gen::HBar(1), Gen::e(1), Gen::f(1), Gen::eb(1), Gen::fb(1)] {
            let u = rep.letter(&g).unwrap();
            for s in &gens {
                let sign = if g.parity() * s.parity.unwrap() == 1 { -1 } else { 1 };
                assert_eq!(u.compose(s), s.compose(&u).scale(&Scalar::from_int(sign)), "{}", g);
            }
        }
    }

    #[test]
    fn commutant_small() {
        let sp = TensorSpace::new(2, 2);
        let gens = sergeev_generators(2, 2);
        assert_eq!(supercommutant_dim(&sp, &gens), 32);
        let none: Vec<SparseOperator<Scalar>> = vec![];
        assert_eq!(supercommutant_dim(&TensorSpace::new(1, 1), &none), 4);
    }

    #[test]
    fn hecke_relations() {
        for (n, r) in [(1, 2), (2, 2), (2, 3)] {
            let d = TensorSpace::new(n, r).dim();
            let id = SparseOperator::<Scalar>::identity(d);
            let t1 = hecke_clifford_letter(&Gen::HeckeT(1), n, r).unwrap();
            let c1 = hecke_clifford_letter(&Gen::Cliff(1), n, r).unwrap();
            let c2 = hecke_clifford_letter(&Gen::Cliff(2), n, r).unwrap();
            let q = Scalar::q();
            let quad = t1.sub(&id.scale(&q)).compose(&t1.add(&id.scale(&q.inv().unwrap())));
            assert!(quad.is_zero(), "quadratic at {n},{r}");
            assert_eq!(t1.compose(&c1), c2.compose(&t1));
            let rhs = c1.compose(&t1).sub(&c1.sub(&c2).scale(&q_minus_qinv()));
            assert_eq!(t1.compose(&c2), rhs);
            if r == 3 {
                let t2 = hecke_clifford_letter(&Gen::HeckeT(2), n, r).unwrap();
                assert_eq!(t1.compose(&t2).compose(&t1), t2.compose(&t1).compose(&t2));
            }
        }
    }

    #[test]
    fn quantum_cartan() {
        let rep = QuantumRep::new(2, 2);
        let k1 = rep.letter(&Gen::k(1)).unwrap();
        let l11 = rep.letter(&Gen::L { i: 1, j: 1 }).unwrap();
        assert_eq!(k1, l11);
        let kinv = rep.letter(&Gen::L { i: -1, j: -1 }).unwrap();
        assert_eq!(k1.compose(&kinv), SparseOperator::identity(16));
        let x = &(&el(Gen::k(1)) * &el(Gen::k(2))) - &Element::scalar(Scalar::q_pow(2));
        assert!(rep.act(&x).unwrap().is_zero());
    }

    #[test]
    fn quantum_rep_supercommutes_with_hecke_clifford() {
        let (n, r) = (2, 2);
        let rep = QuantumRep::new(n, r);
        let gens = hecke_clifford_generators(n, r);
        for &i in &index_set(n) {
            for &j in &index_set(n) {
                if i > j {
                    continue;
                }
                let g = Gen::L { i, j };
                let u = rep.letter(&g).unwrap();
                for h in &gens {
                    let sign = if g.parity() * h.parity.unwrap() == 1 { -1 } else { 1 };
                    assert_eq!(u.compose(h), h.compose(&u).scale(&Scalar::from_int(sign)), "{}", g);
                }
            }
        }
    }

    #[test]
    fn hecke_commutant_dims() {
        for (n, r) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let sp = TensorSpace::new(n, r);
            let d: usize = crate::classical::dim_schur(n as u32, r as u32).try_into().unwrap();
            assert_eq!(supercommutant_dim(&sp, &hecke_clifford_generators(n, r)), d, "({n},{r})");
            assert_eq!(supercommutant_dim(&sp, &sergeev_generators(n, r)), d, "({n},{r})");
        }
    }

    #[test]
    fn specialization_at_one() {
        let one = BigRational::one();
        for (n, r) in [(1usize, 2usize), (2, 2), (3, 2), (2, 3)] {
            let qrep = QuantumRep::new(n, r);
            let crep = ClassicalRep::new(n, r);
            let at1 = |g: Gen| qrep.letter(&g).unwrap().specialize(&one).unwrap();
            let cl = |g: Gen| crep.letter(&g).unwrap().specialize(&one).unwrap();
            let d = qrep.space.dim();
            for i in 1..=n as u8 {
                assert_eq!(at1(Gen::k(i)), SparseOperator::identity(d));
                assert_eq!(at1(Gen::KBar(i)), cl(Gen::HBar(i)), "Kbar{i}");
                assert_eq!(at1(Gen::KBracket { i, c: 0, t: 1 }), cl(Gen::h(i)), "[K{i};0/1]");
                for j in 1..=n as u8 {
                    if i != j {
                        assert_eq!(at1(Gen::QX { i, j, s: 1 }), cl(Gen::X { i, j, s: 1 }), "X({i},{j})");
                        assert_eq!(at1(Gen::QXBar { i, j }), cl(Gen::XBar { i, j }), "Xbar({i},{j})");
                    }
                }
            }
            for g in 1..r as u8 {
                assert_eq!(
                    hecke_clifford_letter(&Gen::HeckeT(g), n, r).unwrap().specialize(&one).unwrap(),
                    sergeev_letter(&Gen::SwapS(g), n, r).unwrap().specialize(&one).unwrap()
                );
            }
        }
    }

    #[test]
    fn actions_supercommute_on_the_grid() {
        for (n, r) in [(1usize, 2usize), (2, 1), (2, 3), (3, 2)] {
            let crep = ClassicalRep::new(n, r);
            let qrep = QuantumRep::new(n, r);
            let sg = sergeev_generators(n, r);
            let hg = hecke_clifford_generators(n, r);
            let check = |u: &SparseOperator<Scalar>, p: u8, gens: &[SparseOperator<Scalar>]| {
                for h in gens {
                    let sign = if p * h.parity.unwrap() == 1 { -1 } else { 1 };
                    assert_eq!(u.compose(h), h.compose(u).scale(&Scalar::from_int(sign)));
                }
            };
            for i in 1..=n as u8 {
                for j in 1..=n as u8 {
                    let gs = if i == j { vec![Gen::h(i), Gen::HBar(i)] } else { vec![Gen::X { i, j, s: 1 }, Gen::XBar { i, j }] };
                    for g in gs {
                        check(&crep.letter(&g).unwrap(), g.parity(), &sg);
                    }
                }
            }
            for &i in &index_set(n) {
                for &j in &index_set(n) {
                    if i <= j {
                        let g = Gen::L { i, j };
                        check(&qrep.letter(&g).unwrap(), g.parity(), &hg);
                    }
                }
            }
        }
    }
}
