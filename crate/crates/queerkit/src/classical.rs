//! q(n) as matrices, the enveloping superalgebra straightening system, the Kostant
//! PBW basis and the Schur quotient Q(n,r).

use crate::freealg::{inversions, AlgebraError, Element, Gen, RewriteSystem, Rule};
use crate::quotient::{self, TriangularEngine};
use crate::scalar::{binom, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// (ε_k, α_{i,j}) = δ_{ki} − δ_{kj}.
pub fn pair_eps(k: u8, i: u8, j: u8) -> i64 {
    (k == i) as i64 - (k == j) as i64
}

/// Element of q(n): block matrix [[A, B], [B, A]] in gl(n|n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QnMatrix {
    pub n: usize,
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<Vec<BigRational>>,
}

impl QnMatrix {
    pub fn zero(n: usize) -> Self {
        let z = vec![vec![BigRational::zero(); n]; n];
        QnMatrix { n, a: z.clone(), b: z }
    }

    fn unit(n: usize, i: u8, j: u8, odd: bool) -> Self {
        let mut m = QnMatrix::zero(n);
        let blk = if odd { &mut m.b } else { &mut m.a };
        blk[i as usize - 1][j as usize - 1] = BigRational::one();
        m
    }

    pub fn h(n: usize, i: u8) -> Self {
        Self::unit(n, i, i, false)
    }
    pub fn hbar(n: usize, i: u8) -> Self {
        Self::unit(n, i, i, true)
    }
    pub fn x(n: usize, i: u8, j: u8) -> Self {
        Self::unit(n, i, j, false)
    }
    pub fn xbar(n: usize, i: u8, j: u8) -> Self {
        Self::unit(n, i, j, true)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|r| r.iter().all(|x| x.is_zero()))
    }

    /// 0 even, 1 odd, None if mixed.
    pub fn parity(&self) -> Option<u8> {
        let az = self.a.iter().all(|r| r.iter().all(|x| x.is_zero()));
        let bz = self.b.iter().all(|r| r.iter().all(|x| x.is_zero()));
        match (az, bz) {
            (_, true) => Some(0),
            (true, false) => Some(1),
            _ => None,
        }
    }

    /// Full 2n×2n matrix, rows/columns ordered 1..n, −1..−n.
    pub fn to_gl(&self) -> Vec<Vec<BigRational>> {
        let n = self.n;
        let mut m = vec![vec![BigRational::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = self.a[i][j].clone();
                m[n + i][n + j] = self.a[i][j].clone();
                m[i][n + j] = self.b[i][j].clone();
                m[n + i][j] = self.b[i][j].clone();
            }
        }
        m
    }

    pub fn from_gl(n: usize, m: &[Vec<BigRational>]) -> Option<Self> {
        let mut r = QnMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                if m[i][j] != m[n + i][n + j] || m[i][n + j] != m[n + i][j] {
                    return None;
                }
                r.a[i][j] = m[i][j].clone();
                r.b[i][j] = m[i][n + j].clone();
            }
        }
        Some(r)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                r.a[i][j] += &o.a[i][j];
                r.b[i][j] += &o.b[i][j];
            }
        }
        r
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut r = self.clone();
        for row in r.a.iter_mut().chain(r.b.iter_mut()) {
            for x in row.iter_mut() {
                *x = &*x * c;
            }
        }
        r
    }
}

fn mat_mul(x: &[Vec<BigRational>], y: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let d = x.len();
    let mut r = vec![vec![BigRational::zero(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if x[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                if !y[k][j].is_zero() {
                    r[i][j] += &x[i][k] * &y[k][j];
                }
            }
        }
    }
    r
}

/// Super bracket [x, y] = xy − (−1)^{x̂ŷ} yx computed in gl(n|n).
pub fn qn_bracket(x: &QnMatrix, y: &QnMatrix) -> Result<QnMatrix, AlgebraError> {
    let px = x.parity().ok_or(AlgebraError::NonHomogeneous)?;
    let py = y.parity().ok_or(AlgebraError::NonHomogeneous)?;
    let (gx, gy) = (x.to_gl(), y.to_gl());
    let xy = mat_mul(&gx, &gy);
    let yx = mat_mul(&gy, &gx);
    let sign = if px * py == 1 { BigRational::one() } else { -BigRational::one() };
    let d = xy.len();
    let mut r = xy;
    for i in 0..d {
        for j in 0..d {
            r[i][j] = &r[i][j] + &(&sign * &yx[i][j]);
        }
    }
    QnMatrix::from_gl(x.n, &r).ok_or_else(|| AlgebraError::Invalid("bracket left q(n)".into()))
}

/// Matrix of a degree-one classical generator (h_i, h̄_i, x_{ij}, x̄_{ij}).
pub fn generator_matrix(n: usize, g: &Gen) -> Option<QnMatrix> {
    match g {
        Gen::HBinom { i, s: 1 } => Some(QnMatrix::h(n, *i)),
        Gen::HBar(i) => Some(QnMatrix::hbar(n, *i)),
        Gen::X { i, j, s: 1 } => Some(QnMatrix::x(n, *i, *j)),
        Gen::XBar { i, j } => Some(QnMatrix::xbar(n, *i, *j)),
        _ => None,
    }
}

/// Right-hand side of the root-vector commutator table, as an element of q(n).
pub fn lemma_bracket(n: usize, a: &Gen, b: &Gen) -> Option<QnMatrix> {
    let z = QnMatrix::zero(n);
    let one = BigRational::one();
    let neg = -BigRational::one();
    let eps_sign = |i: u8, j: u8, k: u8, l: u8| -> Option<(u8, u8, BigRational)> {
        if j == k && i != l {
            Some((i, l, one.clone()))
        } else if i == l && j != k {
            Some((k, j, neg.clone()))
        } else {
            None
        }
    };
    Some(match (a, b) {
        (Gen::HBinom { s: 1, .. }, Gen::HBinom { s: 1, .. }) => z,
        (Gen::HBinom { i: k, s: 1 }, Gen::HBar(_)) => {
            let _ = k;
            z
        }
        (Gen::HBar(i), Gen::HBar(j)) => {
            if i == j {
                QnMatrix::h(n, *i).scale(&BigRational::from_integer(2.into()))
            } else {
                z
            }
        }
        (Gen::X { i, j, s: 1 }, Gen::X { i: k, j: l, s: 1 }) => {
            if *i == *l && *j == *k {
                QnMatrix::h(n, *i).add(&QnMatrix::h(n, *j).scale(&neg))
            } else if let Some((p, r, e)) = eps_sign(*i, *j, *k, *l) {
                QnMatrix::x(n, p, r).scale(&e)
            } else {
                z
            }
        }
        (Gen::X { i, j, s: 1 }, Gen::XBar { i: k, j: l }) => {
            if *i == *l && *j == *k {
                QnMatrix::hbar(n, *i).add(&QnMatrix::hbar(n, *j).scale(&neg))
            } else if let Some((p, r, e)) = eps_sign(*i, *j, *k, *l) {
                QnMatrix::xbar(n, p, r).scale(&e)
            } else {
                z
            }
        }
        (Gen::XBar { i, j }, Gen::XBar { i: k, j: l }) => {
            if *i == *l && *j == *k {
                QnMatrix::h(n, *i).add(&QnMatrix::h(n, *j))
            } else if let Some((p, r, _)) = eps_sign(*i, *j, *k, *l) {
                QnMatrix::x(n, p, r)
            } else {
                z
            }
        }
        (Gen::HBinom { i: k, s: 1 }, Gen::X { i, j, s: 1 }) => {
            QnMatrix::x(n, *i, *j).scale(&BigRational::from_integer(pair_eps(*k, *i, *j).into()))
        }
        (Gen::HBinom { i: k, s: 1 }, Gen::XBar { i, j }) => {
            QnMatrix::xbar(n, *i, *j).scale(&BigRational::from_integer(pair_eps(*k, *i, *j).into()))
        }
        (Gen::HBar(k), Gen::X { i, j, s: 1 }) => {
            QnMatrix::xbar(n, *i, *j).scale(&BigRational::from_integer(pair_eps(*k, *i, *j).into()))
        }
        (Gen::HBar(k), Gen::XBar { i, j }) => {
            QnMatrix::x(n, *i, *j).scale(&BigRational::from_integer(pair_eps(*k, *i, *j).abs().into()))
        }
        _ => return None,
    })
}

// ---------------------------------------------------------------------------
// PBW order

/// Negative roots (row > col) in the f_{A-} order: columns left to right, each read upwards.
pub fn neg_root_order(n: u8) -> Vec<(u8, u8)> {
    let mut v = Vec::new();
    for col in 1..n {
        for row in (col + 1..=n).rev() {
            v.push((row, col));
        }
    }
    v
}

/// Positive roots (row < col) in the e_{A+} order: rows bottom to top, each read rightwards.
pub fn pos_root_order(n: u8) -> Vec<(u8, u8)> {
    let mut v = Vec::new();
    for row in (1..n).rev() {
        for col in row + 1..=n {
            v.push((row, col));
        }
    }
    v
}

fn root_index(n: u8, i: u8, j: u8) -> i64 {
    if i > j {
        neg_root_order(n).iter().position(|&p| p == (i, j)).unwrap() as i64
    } else {
        pos_root_order(n).iter().position(|&p| p == (i, j)).unwrap() as i64
    }
}

/// Position of a classical letter in the PBW order f < 1_λ < binom(h) < h̄ < e.
pub fn classical_rank(n: u8, g: &Gen) -> i64 {
    let nr = (n as i64) * (n as i64 - 1) / 2;
    let nn = n as i64;
    match g {
        Gen::X { i, j, .. } if i > j => 2 * root_index(n, *i, *j),
        Gen::XBar { i, j } if i > j => 2 * root_index(n, *i, *j) + 1,
        Gen::Idem(_) => 2 * nr,
        Gen::HBinom { i, .. } => 2 * nr + *i as i64,
        Gen::HBar(i) => 2 * nr + nn + *i as i64,
        Gen::X { i, j, .. } => 2 * nr + 2 * nn + 1 + 2 * root_index(n, *i, *j),
        Gen::XBar { i, j } => 2 * nr + 2 * nn + 1 + 2 * root_index(n, *i, *j) + 1,
        _ => i64::MAX / 2,
    }
}

/// Filtration degree of a classical letter.
pub fn classical_letter_degree(g: &Gen) -> i64 {
    match g {
        Gen::X { i, j, s } => *s as i64 * (*j as i64 - *i as i64).abs(),
        Gen::XBar { i, j } => (*j as i64 - *i as i64).abs(),
        Gen::HBar(_) => 1,
        _ => 0,
    }
}

pub fn classical_degree(w: &[Gen]) -> i64 {
    w.iter().map(classical_letter_degree).sum()
}

// ---------------------------------------------------------------------------
// binomials in the Cartan elements

fn int(c: impl Into<BigInt>) -> Scalar {
    Scalar::from_int(c.into())
}

fn gx(i: u8, j: u8, s: u32) -> Element {
    if s == 0 {
        Element::one()
    } else {
        Element::gen(Gen::X { i, j, s })
    }
}

fn gxb(i: u8, j: u8) -> Element {
    Element::gen(Gen::XBar { i, j })
}

fn hb(i: u8, s: u32) -> Element {
    if s == 0 {
        Element::one()
    } else {
        Element::gen(Gen::HBinom { i, s })
    }
}

/// binom(h_k + c, s) expanded as Σ_a C(c, s−a) binom(h_k, a).
pub fn binom_shift(k: u8, c: i64, s: u32) -> Element {
    let mut r = Element::zero();
    for a in 0..=s {
        r.add_scaled(&hb(k, a), &int(binom(c, s - a)));
    }
    r
}

/// binom(−h_k, b) = (−1)^b binom(h_k + b − 1, b).
fn binom_neg(k: u8, b: u32) -> Element {
    if b == 0 {
        return Element::one();
    }
    let e = binom_shift(k, b as i64 - 1, b);
    if b % 2 == 1 {
        -&e
    } else {
        e
    }
}

/// binom(h_i − h_j + c, t) expanded in binom(h_i, ·) binom(h_j, ·).
pub fn binom_diff(i: u8, j: u8, c: i64, t: u32) -> Element {
    let mut r = Element::zero();
    for a in 0..=t {
        for b in 0..=t - a {
            let d = t - a - b;
            let cf = binom(c, d);
            if cf.is_zero() {
                continue;
            }
            let term = &hb(i, a) * &binom_neg(j, b);
            r.add_scaled(&term, &int(cf));
        }
    }
    r
}

/// binom(h, s) binom(h, t) = Σ_j C(s+t−j, s) C(s, j) binom(h, s+t−j).
pub fn binom_product(k: u8, s: u32, t: u32) -> Element {
    let mut r = Element::zero();
    for j in 0..=s.min(t) {
        let c = binom((s + t - j) as i64, s) * binom(s as i64, j);
        r.add_scaled(&hb(k, s + t - j), &int(c));
    }
    r
}

// ---------------------------------------------------------------------------
// the straightening rules

fn is_neg(g: &Gen) -> bool {
    matches!(g, Gen::X { i, j, .. } | Gen::XBar { i, j } if i > j)
}

/// ε_{i,j;k,l} and β when α_{ij} + α_{kl} is a root.
fn beta(i: u8, j: u8, k: u8, l: u8) -> Option<(i64, u8, u8)> {
    if i == l && j == k {
        None
    } else if j == k {
        Some((1, i, l))
    } else if i == l {
        Some((-1, k, j))
    } else {
        None
    }
}

/// x^{(m)}_{ij} x^{(s)}_{kl} rewritten with x^{(s)}_{kl} first.
fn rule_xx(i: u8, j: u8, m: u32, k: u8, l: u8, s: u32) -> Element {
    let mut r = &gx(k, l, s) * &gx(i, j, m);
    if i == l && j == k {
        for t in 1..=m.min(s) {
            let mid = binom_diff(i, j, -(m as i64) - (s as i64) + 2 * t as i64, t);
            r += &(&(&gx(k, l, s - t) * &mid) * &gx(i, j, m - t));
        }
    } else if let Some((eps, bi, bj)) = beta(i, j, k, l) {
        for t in 1..=m.min(s) {
            let c = if eps < 0 && t % 2 == 1 { -1 } else { 1 };
            let w = &(&gx(k, l, s - t) * &gx(bi, bj, t)) * &gx(i, j, m - t);
            r.add_scaled(&w, &int(c));
        }
    }
    r
}

/// Tail T with x^{(m)}_{ij} x̄_{kl} = x̄_{kl} x^{(m)}_{ij} + T.
fn tail_xxb(i: u8, j: u8, m: u32, k: u8, l: u8) -> Element {
    let mut r = Element::zero();
    if i == l && j == k {
        let hdiff = &Element::gen(Gen::HBar(i)) - &Element::gen(Gen::HBar(j));
        r += &(&hdiff * &gx(i, j, m - 1));
        if m >= 2 {
            r -= &(&gxb(i, j) * &gx(i, j, m - 2));
        }
    } else if let Some((eps, bi, bj)) = beta(i, j, k, l) {
        r.add_scaled(&(&gxb(bi, bj) * &gx(i, j, m - 1)), &int(eps));
    }
    r
}

/// Tail T with x̄_{ij} x̄_{kl} = −x̄_{kl} x̄_{ij} + T.
fn tail_xbxb(i: u8, j: u8, k: u8, l: u8) -> Element {
    if i == l && j == k {
        &hb(i, 1) + &hb(j, 1)
    } else if let Some((_, bi, bj)) = beta(i, j, k, l) {
        gx(bi, bj, 1)
    } else {
        Element::zero()
    }
}

fn classical_pair(n: u8, a: &Gen, b: &Gen) -> Option<Element> {
    if classical_single(a).is_some() || classical_single(b).is_some() {
        return None;
    }
    let ra = classical_rank(n, a);
    let rb = classical_rank(n, b);
    if ra < rb {
        return None;
    }
    let hbar = |k: u8| Element::gen(Gen::HBar(k));
    match (a, b) {
        (Gen::X { i, j, s: m }, Gen::X { i: k, j: l, s }) => {
            if (i, j) == (k, l) {
                Some(gx(*i, *j, m + s).scale(&int(binom((m + s) as i64, *m))))
            } else {
                Some(rule_xx(*i, *j, *m, *k, *l, *s))
            }
        }
        (Gen::X { i, j, s: m }, Gen::XBar { i: k, j: l }) => {
            Some(&(&gxb(*k, *l) * &gx(*i, *j, *m)) + &tail_xxb(*i, *j, *m, *k, *l))
        }
        (Gen::XBar { i: k, j: l }, Gen::X { i, j, s: m }) => {
            Some(&(&gx(*i, *j, *m) * &gxb(*k, *l)) - &tail_xxb(*i, *j, *m, *k, *l))
        }
        (Gen::XBar { i, j }, Gen::XBar { i: k, j: l }) => {
            if (i, j) == (k, l) {
                Some(Element::zero())
            } else {
                Some(&(-&(&gxb(*k, *l) * &gxb(*i, *j))) + &tail_xbxb(*i, *j, *k, *l))
            }
        }
        // positive root letter before h̄_k
        (Gen::X { i, j, s: m }, Gen::HBar(k)) => {
            let e = pair_eps(*k, *i, *j);
            let mut r = &hbar(*k) * &gx(*i, *j, *m);
            r.add_scaled(&(&gxb(*i, *j) * &gx(*i, *j, m - 1)), &int(-e));
            Some(r)
        }
        (Gen::XBar { i, j }, Gen::HBar(k)) => {
            let e = pair_eps(*k, *i, *j).abs();
            let mut r = -&(&hbar(*k) * &gxb(*i, *j));
            r.add_scaled(&gx(*i, *j, 1), &int(e));
            Some(r)
        }
        // h̄_k before a negative root letter
        (Gen::HBar(k), Gen::X { i, j, s: m }) => {
            let e = pair_eps(*k, *i, *j);
            let mut r = &gx(*i, *j, *m) * &hbar(*k);
            r.add_scaled(&(&gxb(*i, *j) * &gx(*i, *j, m - 1)), &int(e));
            Some(r)
        }
        (Gen::HBar(k), Gen::XBar { i, j }) => {
            let e = pair_eps(*k, *i, *j).abs();
            let mut r = -&(&gxb(*i, *j) * &hbar(*k));
            r.add_scaled(&gx(*i, *j, 1), &int(e));
            Some(r)
        }
        (Gen::X { i, j, s: m }, Gen::HBinom { i: k, s }) => {
            let c = -(*m as i64) * pair_eps(*k, *i, *j);
            Some(&binom_shift(*k, c, *s) * &gx(*i, *j, *m))
        }
        (Gen::XBar { i, j }, Gen::HBinom { i: k, s }) => {
            let c = -pair_eps(*k, *i, *j);
            Some(&binom_shift(*k, c, *s) * &gxb(*i, *j))
        }
        (Gen::HBinom { i: k, s }, Gen::X { i, j, s: m }) => {
            let c = *m as i64 * pair_eps(*k, *i, *j);
            Some(&gx(*i, *j, *m) * &binom_shift(*k, c, *s))
        }
        (Gen::HBinom { i: k, s }, Gen::XBar { i, j }) => {
            let c = pair_eps(*k, *i, *j);
            Some(&gxb(*i, *j) * &binom_shift(*k, c, *s))
        }
        (Gen::HBar(k), Gen::HBinom { i, s }) => Some(&hb(*i, *s) * &hbar(*k)),
        (Gen::HBinom { i, s }, Gen::HBinom { i: k, s: t }) => {
            if i == k {
                Some(binom_product(*i, *s, *t))
            } else {
                Some(&hb(*k, *t) * &hb(*i, *s))
            }
        }
        (Gen::HBar(i), Gen::HBar(j)) => {
            if i == j {
                Some(hb(*i, 1))
            } else {
                Some(-&(&hbar(*j) * &hbar(*i)))
            }
        }
        _ => None,
    }
}

fn classical_single(g: &Gen) -> Option<Element> {
    match g {
        Gen::X { s: 0, .. } | Gen::HBinom { s: 0, .. } => Some(Element::one()),
        _ => None,
    }
}

fn classical_order(n: u8) -> impl Fn(&[Gen]) -> Vec<i64> + Send + Sync {
    move |w: &[Gen]| vec![classical_degree(w), inversions(w, |g| classical_rank(n, g)), w.len() as i64]
}

/// Straightening system for U(q(n)) whose irreducible words are the m_A.
pub fn classical_rules(n: u8) -> RewriteSystem {
    let rules = vec![
        Rule::single("zero-power", classical_single),
        Rule::pair("div-root", move |a, b| classical_pair(n, a, b)),
    ];
    RewriteSystem::new("classical", rules, classical_order(n))
}

// ---------------------------------------------------------------------------
// matrices A ∈ M_n(N|Z_2) and PBW monomials

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SuperMatrix {
    #[serde(rename = "A0")]
    pub a0: Vec<Vec<u32>>,
    #[serde(rename = "A1")]
    pub a1: Vec<Vec<u32>>,
}

impl SuperMatrix {
    pub fn zero(n: usize) -> Self {
        SuperMatrix { a0: vec![vec![0; n]; n], a1: vec![vec![0; n]; n] }
    }

    pub fn n(&self) -> usize {
        self.a0.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.a0[i][j] + self.a1[i][j]
    }

    pub fn total(&self) -> u32 {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.entry(i, j)).sum()
    }

    /// χ(A)_k = a_kk + Σ_{j>k} (a_kj + a_jk).
    pub fn chi(&self) -> Vec<u32> {
        let n = self.n();
        (0..n).map(|k| self.entry(k, k) + (k + 1..n).map(|j| self.entry(k, j) + self.entry(j, k)).sum::<u32>()).collect()
    }

    pub fn degree(&self) -> i64 {
        let n = self.n();
        let mut d = 0i64;
        for i in 0..n {
            d += self.a1[i][i] as i64;
            for j in 0..n {
                if i != j {
                    d += self.entry(i, j) as i64 * (j as i64 - i as i64).abs();
                }
            }
        }
        d
    }

    /// Same matrix with the even diagonal cleared.
    pub fn without_even_diagonal(&self) -> Self {
        let mut c = self.clone();
        for i in 0..self.n() {
            c.a0[i][i] = 0;
        }
        c
    }
}

/// All A ∈ M_n(N|Z_2) with total entry sum r.
pub fn enumerate_matrices(n: usize, r: u32) -> Vec<SuperMatrix> {
    let cells = n * n;
    let mut out = Vec::new();
    let mut a0 = vec![0u32; cells];
    let mut a1 = vec![0u32; cells];
    fn rec(pos: usize, left: u32, cells: usize, n: usize, a0: &mut Vec<u32>, a1: &mut Vec<u32>, out: &mut Vec<SuperMatrix>) {
        if pos == cells {
            if left == 0 {
                let mut m = SuperMatrix::zero(n);
                for c in 0..cells {
                    m.a0[c / n][c % n] = a0[c];
                    m.a1[c / n][c % n] = a1[c];
                }
                out.push(m);
            }
            return;
        }
        for odd in 0..=1u32.min(left) {
            for even in 0..=left - odd {
                a0[pos] = even;
                a1[pos] = odd;
                rec(pos + 1, left - odd - even, cells, n, a0, a1, out);
            }
        }
        a0[pos] = 0;
        a1[pos] = 0;
    }
    rec(0, r, cells, n, &mut a0, &mut a1, &mut out);
    out
}

/// Compositions of r into n parts, lexicographically decreasing.
pub fn compositions(n: usize, r: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, r: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(r);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=r).rev() {
            cur.push(a);
            rec(n, r - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, r, &mut Vec::new(), &mut out);
    out
}

/// f_{A-} as a word, honoring the column/upward order.
pub fn f_word(a: &SuperMatrix) -> Vec<Gen> {
    let n = a.n() as u8;
    let mut w = Vec::new();
    for (row, col) in neg_root_order(n) {
        let (r, c) = (row as usize - 1, col as usize - 1);
        if a.a0[r][c] > 0 {
            w.push(Gen::X { i: row, j: col, s: a.a0[r][c] });
        }
        if a.a1[r][c] > 0 {
            w.push(Gen::XBar { i: row, j: col });
        }
    }
    w
}

/// e_{A+} as a word, honoring the bottom-up row order.
pub fn e_word(a: &SuperMatrix) -> Vec<Gen> {
    let n = a.n() as u8;
    let mut w = Vec::new();
    for (row, col) in pos_root_order(n) {
        let (r, c) = (row as usize - 1, col as usize - 1);
        if a.a0[r][c] > 0 {
            w.push(Gen::X { i: row, j: col, s: a.a0[r][c] });
        }
        if a.a1[r][c] > 0 {
            w.push(Gen::XBar { i: row, j: col });
        }
    }
    w
}

pub fn hbar_word(a: &SuperMatrix) -> Vec<Gen> {
    (0..a.n()).filter(|&i| a.a1[i][i] > 0).map(|i| Gen::HBar(i as u8 + 1)).collect()
}

/// m_A = f_{A-} binom(h, A00) h̄_{A01} e_{A+}.
pub fn pbw_monomial(a: &SuperMatrix) -> Vec<Gen> {
    let mut w = f_word(a);
    for i in 0..a.n() {
        if a.a0[i][i] > 0 {
            w.push(Gen::HBinom { i: i as u8 + 1, s: a.a0[i][i] });
        }
    }
    w.extend(hbar_word(a));
    w.extend(e_word(a));
    w
}

/// Reads a PBW word back into its matrix.
pub fn pbw_matrix(n: usize, w: &[Gen]) -> Option<SuperMatrix> {
    let mut a = SuperMatrix::zero(n);
    for g in w {
        match g {
            Gen::X { i, j, s } => a.a0[*i as usize - 1][*j as usize - 1] += s,
            Gen::XBar { i, j } => a.a1[*i as usize - 1][*j as usize - 1] += 1,
            Gen::HBinom { i, s } => a.a0[*i as usize - 1][*i as usize - 1] += s,
            Gen::HBar(i) => a.a1[*i as usize - 1][*i as usize - 1] += 1,
            _ => return None,
        }
    }
    if pbw_monomial(&a) == w {
        Some(a)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// the Schur quotient

pub fn dim_schur(n: u32, r: u32) -> BigInt {
    let n2 = (n * n) as i64;
    (0..=r).map(|k| binom(n2 + k as i64 - 1, k) * binom(n2, r - k)).sum()
}

pub fn dim_schur_zero(n: u32, r: u32) -> BigInt {
    compositions(n as usize, r)
        .iter()
        .map(|l| BigInt::from(1u64 << l.iter().filter(|&&x| x > 0).count()))
        .sum()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisEntry {
    #[serde(flatten)]
    pub a: SuperMatrix,
    pub lambda: Vec<u32>,
    #[serde(skip)]
    pub element: Element,
}

/// 𝔲_A = f_{A-} 1_{χ(A)} h̄_{A01} e_{A+} for all A ∈ M_n(N|Z_2)_r.
pub fn schur_basis(n: usize, r: u32) -> Vec<BasisEntry> {
    enumerate_matrices(n, r)
        .into_iter()
        .map(|a| {
            let lambda = a.chi();
            let mut w = f_word(&a);
            w.push(Gen::Idem(lambda.clone()));
            w.extend(hbar_word(&a));
            w.extend(e_word(&a));
            BasisEntry { a, lambda, element: Element::word(w) }
        })
        .collect()
}

fn weight_of(n: usize, g: &Gen) -> Option<Vec<i64>> {
    let root = |i: u8, j: u8, s: i64| {
        let mut v = vec![0i64; n];
        v[i as usize - 1] += s;
        v[j as usize - 1] -= s;
        v
    };
    match g {
        Gen::X { i, j, s } => Some(root(*i, *j, *s as i64)),
        Gen::XBar { i, j } => Some(root(*i, *j, 1)),
        _ => None,
    }
}

fn idem_pair(n: usize, a: &Gen, b: &Gen) -> Option<Element> {
    let valid = |lam: &[u32], wt: &[i64], sign: i64| -> Option<Vec<u32>> {
        let v: Vec<i64> = lam.iter().zip(wt).map(|(x, y)| *x as i64 + sign * y).collect();
        if v.iter().any(|&x| x < 0) {
            None
        } else {
            Some(v.iter().map(|&x| x as u32).collect())
        }
    };
    match (a, b) {
        (Gen::Idem(l), Gen::Idem(m)) => Some(if l == m { Element::gen(a.clone()) } else { Element::zero() }),
        (Gen::HBinom { i, s }, Gen::Idem(l)) | (Gen::Idem(l), Gen::HBinom { i, s }) => {
            Some(Element::gen(Gen::Idem(l.clone())).scale(&int(binom(l[*i as usize - 1] as i64, *s))))
        }
        (Gen::HBar(i), Gen::Idem(l)) => Some(if l[*i as usize - 1] == 0 {
            Element::zero()
        } else {
            Element::monomial(&[b.clone(), a.clone()])
        }),
        (Gen::Idem(l), Gen::HBar(i)) if l[*i as usize - 1] == 0 => Some(Element::zero()),
        (g, Gen::Idem(l)) => {
            let wt = weight_of(n, g)?;
            Some(match valid(l, &wt, 1) {
                Some(nl) => Element::monomial(&[Gen::Idem(nl), g.clone()]),
                None => Element::zero(),
            })
        }
        (Gen::Idem(l), g) => {
            let wt = weight_of(n, g)?;
            match valid(l, &wt, -1) {
                Some(_) => None,
                None => Some(Element::zero()),
            }
        }
        _ => None,
    }
}

/// Extends `classical_rules` by the idempotent calculus of Q(n,r); idempotents move left.
pub fn schur_rules(n: u8, r: u32) -> RewriteSystem {
    let nn = n as usize;
    let rules = vec![
        Rule::single("zero-power", classical_single),
        Rule::single("binom-bound", move |g| match g {
            Gen::HBinom { s, .. } if *s > r => Some(Element::zero()),
            _ => None,
        }),
        Rule::pair("binom-bound", move |a, b| match (a, b) {
            (Gen::HBinom { i, s }, Gen::HBinom { i: k, s: t }) if i != k && s + t > r => Some(Element::zero()),
            _ => None,
        }),
        Rule::pair("root-idem", move |a, b| idem_pair(nn, a, b)),
        Rule::pair("div-root", move |a, b| classical_pair(n, a, b)),
    ];
    let rank = move |g: &Gen| match g {
        Gen::Idem(_) => -1,
        g => classical_rank(n, g),
    };
    RewriteSystem::new("schur", rules, move |w: &[Gen]| vec![classical_degree(w), inversions(w, rank), w.len() as i64])
}

/// Engine adaptor for the Schur-quotient reduction.
#[derive(Clone)]
pub struct ClassicalEngine {
    pub n: u8,
    pub sys: Arc<RewriteSystem>,
}

impl ClassicalEngine {
    pub fn new(n: u8) -> Self {
        ClassicalEngine { n, sys: Arc::new(classical_rules(n)) }
    }
}

impl TriangularEngine for ClassicalEngine {
    fn n(&self) -> usize {
        self.n as usize
    }
    fn nf(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.sys.normal_form(x)
    }
    fn idem(&self, lambda: &[u32]) -> Gen {
        Gen::Idem(lambda.to_vec())
    }
    fn as_idem<'a>(&self, g: &'a Gen) -> Option<&'a [u32]> {
        match g {
            Gen::Idem(l) => Some(l),
            _ => None,
        }
    }
    fn root_weight(&self, g: &Gen) -> Option<Vec<i64>> {
        weight_of(self.n as usize, g)
    }
    fn is_negative(&self, g: &Gen) -> bool {
        is_neg(g)
    }
    fn odd_cartan_index(&self, g: &Gen) -> Option<usize> {
        match g {
            Gen::HBar(i) => Some(*i as usize),
            _ => None,
        }
    }
    fn cartan_value(&self, g: &Gen, lambda: &[u32]) -> Option<Scalar> {
        match g {
            Gen::HBinom { i, s } => Some(int(binom(lambda[*i as usize - 1] as i64, *s))),
            _ => None,
        }
    }
    fn degree(&self, w: &[Gen]) -> i64 {
        classical_degree(w)
    }
    fn split_matrix(&self, w: &[Gen]) -> Option<SuperMatrix> {
        let n = self.n as usize;
        let mut a = SuperMatrix::zero(n);
        for g in w {
            match g {
                Gen::X { i, j, s } => a.a0[*i as usize - 1][*j as usize - 1] += s,
                Gen::XBar { i, j } => a.a1[*i as usize - 1][*j as usize - 1] += 1,
                Gen::HBar(i) => a.a1[*i as usize - 1][*i as usize - 1] += 1,
                _ => return None,
            }
        }
        Some(a)
    }
    fn f_word(&self, a: &SuperMatrix) -> Vec<Gen> {
        f_word(a)
    }
    fn e_word(&self, a: &SuperMatrix) -> Vec<Gen> {
        e_word(a)
    }
    fn hbar_word(&self, a: &SuperMatrix) -> Vec<Gen> {
        hbar_word(a)
    }
}

/// Normal form in Q(n,r): a combination of the basis words 𝔲_A.
pub fn schur_normal_form(n: u8, r: u32, x: &Element) -> Result<Element, AlgebraError> {
    quotient::schur_normal_form(&ClassicalEngine::new(n), r, x)
}

// ---------------------------------------------------------------------------
// presentations

fn g(x: Gen) -> Element {
    Element::gen(x)
}

fn sc(a: &Element, b: &Element) -> Element {
    crate::freealg::super_commutator(a, b).expect("homogeneous")
}

fn sint(c: i64) -> Element {
    Element::scalar(Scalar::from_int(c))
}

/// Named relations QS1–QS6 at rank n, each as an element vanishing in U(q(n)).
pub fn qs_relations(n: u8) -> Vec<(String, Element)> {
    let (h, hb) = (|i: u8| g(Gen::h(i)), |i: u8| g(Gen::HBar(i)));
    let (e, f, eb, fb) = (|j: u8| g(Gen::e(j)), |j: u8| g(Gen::f(j)), |j: u8| g(Gen::eb(j)), |j: u8| g(Gen::fb(j)));
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            out.push((format!("QS1/hh/{i},{j}"), sc(&h(i), &h(j))));
            out.push((format!("QS1/hhb/{i},{j}"), sc(&h(i), &hb(j))));
            let d = if i == j { &h(i) * &sint(2) } else { Element::zero() };
            out.push((format!("QS1/hbhb/{i},{j}"), &sc(&hb(i), &hb(j)) - &d));
        }
    }
    for i in 1..=n {
        for j in 1..n {
            let c = sint(pair_eps(i, j, j + 1));
            out.push((format!("QS2/he/{i},{j}"), &sc(&h(i), &e(j)) - &(&c * &e(j))));
            out.push((format!("QS2/heb/{i},{j}"), &sc(&h(i), &eb(j)) - &(&c * &eb(j))));
            out.push((format!("QS2/hf/{i},{j}"), &sc(&h(i), &f(j)) + &(&c * &f(j))));
            out.push((format!("QS2/hfb/{i},{j}"), &sc(&h(i), &fb(j)) + &(&c * &fb(j))));
            out.push((format!("QS3/hbe/{i},{j}"), &sc(&hb(i), &e(j)) - &(&c * &eb(j))));
            out.push((format!("QS3/hbf/{i},{j}"), &sc(&hb(i), &f(j)) + &(&c * &fb(j))));
            let adj = i == j || i == j + 1;
            let (te, tf) = if adj { (e(j), f(j)) } else { (Element::zero(), Element::zero()) };
            out.push((format!("QS3/hbeb/{i},{j}"), &sc(&hb(i), &eb(j)) - &te));
            out.push((format!("QS3/hbfb/{i},{j}"), &sc(&hb(i), &fb(j)) - &tf));
        }
    }
    for i in 1..n {
        for j in 1..n {
            let d = i == j;
            let v = |x: Element| if d { x } else { Element::zero() };
            out.push((format!("QS4/ef/{i},{j}"), &sc(&e(i), &f(j)) - &v(&h(i) - &h(i + 1))));
            out.push((format!("QS4/ebfb/{i},{j}"), &sc(&eb(i), &fb(j)) - &v(&h(i) + &h(i + 1))));
            out.push((format!("QS4/ebf/{i},{j}"), &sc(&eb(i), &f(j)) - &v(&hb(i) - &hb(i + 1))));
            out.push((format!("QS4/efb/{i},{j}"), &sc(&e(i), &fb(j)) - &v(&hb(i) - &hb(i + 1))));
            let dist = i.abs_diff(j);
            if dist != 1 {
                out.push((format!("QS5/eeb/{i},{j}"), sc(&e(i), &eb(j))));
                out.push((format!("QS5/ebeb/{i},{j}"), sc(&eb(i), &eb(j))));
                out.push((format!("QS5/ffb/{i},{j}"), sc(&f(i), &fb(j))));
                out.push((format!("QS5/fbfb/{i},{j}"), sc(&fb(i), &fb(j))));
            }
            if dist > 1 {
                out.push((format!("QS5/ee/{i},{j}"), sc(&e(i), &e(j))));
                out.push((format!("QS5/ff/{i},{j}"), sc(&f(i), &f(j))));
            }
            if dist == 1 {
                out.push((format!("QS6/e/{i},{j}"), sc(&e(i), &sc(&e(i), &e(j)))));
                out.push((format!("QS6/eb/{i},{j}"), sc(&eb(i), &sc(&e(i), &e(j)))));
                out.push((format!("QS6/f/{i},{j}"), sc(&f(i), &sc(&f(i), &f(j)))));
                out.push((format!("QS6/fb/{i},{j}"), sc(&fb(i), &sc(&f(i), &f(j)))));
            }
        }
        if i + 1 < n {
            let j = i + 1;
            out.push((format!("QS5/ee+/{i}"), &sc(&e(i), &e(j)) - &sc(&eb(i), &eb(j))));
            out.push((format!("QS5/eeb+/{i}"), &sc(&e(i), &eb(j)) - &sc(&eb(i), &e(j))));
            out.push((format!("QS5/ff+/{i}"), &sc(&f(j), &f(i)) - &sc(&fb(j), &fb(i))));
            out.push((format!("QS5/ffb+/{i}"), &sc(&f(j), &fb(i)) - &sc(&fb(j), &f(i))));
        }
    }
    out
}

/// QS7 and QS8: h_1 + ⋯ + h_n = r and h̄_i (h_i − 1)⋯(h_i − r) = 0.
pub fn qs_ideal_relations(n: u8, r: u32) -> Vec<(String, Element)> {
    let mut sum = sint(-(r as i64));
    for i in 1..=n {
        sum += &g(Gen::h(i));
    }
    let mut out = vec![("QS7".to_string(), sum)];
    for i in 1..=n {
        let mut p = g(Gen::HBar(i));
        for k in 1..=r as i64 {
            p = &p * &(&g(Gen::h(i)) - &sint(k));
        }
        out.push((format!("QS8/{i}"), p));
    }
    out
}

/// λ ± α_j when it stays in Λ(n, r).
pub(crate) fn shift_simple(l: &[u32], j: u8, sign: i64) -> Option<Vec<u32>> {
    let mut v: Vec<i64> = l.iter().map(|&x| x as i64).collect();
    v[j as usize - 1] += sign;
    v[j as usize] -= sign;
    v.iter().all(|&x| x >= 0).then(|| v.into_iter().map(|x| x as u32).collect())
}

/// The exchange relations of a simple root letter with idempotents:
/// x 1_λ = 1_{λ±α} x (or 0) and 1_λ x = x 1_{λ∓α} (or 0); `sign` is +1 for raising letters.
pub(crate) fn idem_exchange(
    name: &str,
    x: &Element,
    j: u8,
    sign: i64,
    lams: &[Vec<u32>],
    idem: &dyn Fn(&[u32]) -> Element,
    out: &mut Vec<(String, Element)>,
) {
    for (a, l) in lams.iter().enumerate() {
        let rhs = shift_simple(l, j, sign).map_or(Element::zero(), |m| &idem(&m) * x);
        out.push((format!("{name}-right/{j},{a}"), &(x * &idem(l)) - &rhs));
        let rhs = shift_simple(l, j, -sign).map_or(Element::zero(), |m| x * &idem(&m));
        out.push((format!("{name}-left/{j},{a}"), &(&idem(l) * x) - &rhs));
    }
}

/// Idempotent presentation QS1′–QS4′ of Q(n, r).
pub fn qs_idem_relations(n: u8, r: u32) -> Vec<(String, Element)> {
    let lams = compositions(n as usize, r);
    let idem = |l: &[u32]| g(Gen::Idem(l.to_vec()));
    let hb = |i: u8| g(Gen::HBar(i));
    let mut out = Vec::new();
    let mut total = sint(-1);
    for (a, l) in lams.iter().enumerate() {
        total += &idem(l);
        for (b, m) in lams.iter().enumerate() {
            let rhs = if a == b { idem(l) } else { Element::zero() };
            out.push((format!("QS1'/orth/{a},{b}"), &(&idem(l) * &idem(m)) - &rhs));
        }
        for i in 1..=n {
            out.push((format!("QS1'/hb-idem/{i},{a}"), sc(&hb(i), &idem(l))));
            if l[i as usize - 1] == 0 {
                out.push((format!("QS1'/hb-zero/{i},{a}"), &hb(i) * &idem(l)));
            }
        }
    }
    out.push(("QS1'/sum".to_string(), total));
    for i in 1..=n {
        for j in 1..=n {
            let mut r = sc(&hb(i), &hb(j));
            if i == j {
                for l in &lams {
                    r -= &(&idem(l) * &sint(2 * l[i as usize - 1] as i64));
                }
            }
            out.push((format!("QS1'/hbhb/{i},{j}"), r));
        }
    }
    for j in 1..n {
        idem_exchange("QS2'/e", &g(Gen::e(j)), j, 1, &lams, &idem, &mut out);
        idem_exchange("QS2'/eb", &g(Gen::eb(j)), j, 1, &lams, &idem, &mut out);
        idem_exchange("QS2'/f", &g(Gen::f(j)), j, -1, &lams, &idem, &mut out);
        idem_exchange("QS2'/fb", &g(Gen::fb(j)), j, -1, &lams, &idem, &mut out);
    }
    for i in 1..n {
        for j in 1..n {
            let (mut a, mut b) = (sc(&g(Gen::e(i)), &g(Gen::f(j))), sc(&g(Gen::eb(i)), &g(Gen::fb(j))));
            let (mut c, mut d) = (sc(&g(Gen::e(i)), &g(Gen::fb(j))), sc(&g(Gen::eb(i)), &g(Gen::f(j))));
            if i == j {
                let k = i as usize;
                for l in &lams {
                    a -= &(&idem(l) * &sint(l[k - 1] as i64 - l[k] as i64));
                    b -= &(&idem(l) * &sint((l[k - 1] + l[k]) as i64));
                }
                let t = &hb(i) - &hb(i + 1);
                c -= &t;
                d -= &t;
            }
            out.push((format!("QS4'/ef/{i},{j}"), a));
            out.push((format!("QS4'/ebfb/{i},{j}"), b));
            out.push((format!("QS4'/efb/{i},{j}"), c));
            out.push((format!("QS4'/ebf/{i},{j}"), d));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(g: Gen) -> Element {
        Element::gen(g)
    }

    #[test]
    fn bracket_examples() {
        let n = 3;
        let b = qn_bracket(&QnMatrix::x(n, 1, 3), &QnMatrix::x(n, 3, 1)).unwrap();
        assert_eq!(b, QnMatrix::h(n, 1).add(&QnMatrix::h(n, 3).scale(&-BigRational::one())));
        let b = qn_bracket(&QnMatrix::xbar(n, 1, 3), &QnMatrix::xbar(n, 3, 1)).unwrap();
        assert_eq!(b, QnMatrix::h(n, 1).add(&QnMatrix::h(n, 3)));
        assert!(qn_bracket(&QnMatrix::h(n, 1), &QnMatrix::h(n, 2)).unwrap().is_zero());
        let mixed = QnMatrix::h(n, 1).add(&QnMatrix::hbar(n, 1));
        assert!(qn_bracket(&mixed, &QnMatrix::h(n, 1)).is_err());
    }

    #[test]
    fn e1f1() {
        let sys = classical_rules(2);
        let x = Element::monomial(&[Gen::e(1), Gen::f(1)]);
        let want = &(&Element::monomial(&[Gen::f(1), Gen::e(1)]) + &e(Gen::h(1))) - &e(Gen::h(2));
        assert_eq!(sys.normal_form(&x).unwrap(), want);
        assert_eq!(sys.normal_form(&x).unwrap().to_string(), "f1*e1 + h1 - h2");
    }

    #[test]
    fn rule_examples() {
        let sys = classical_rules(3);
        // x^{(2)}_{12} h_1 = (h_1 - 2) x^{(2)}_{12}
        let x = Element::monomial(&[Gen::X { i: 1, j: 2, s: 2 }, Gen::h(1)]);
        let want = &Element::monomial(&[Gen::h(1), Gen::X { i: 1, j: 2, s: 2 }])
            - &Element::gen(Gen::X { i: 1, j: 2, s: 2 }).scale(&Scalar::from_int(2));
        assert_eq!(sys.normal_form(&x).unwrap(), want);
        // x̄_{12} x̄_{21} = -x̄_{21} x̄_{12} + h1 + h2
        let x = Element::monomial(&[Gen::XBar { i: 1, j: 2 }, Gen::XBar { i: 2, j: 1 }]);
        let want = &(&(-&Element::monomial(&[Gen::XBar { i: 2, j: 1 }, Gen::XBar { i: 1, j: 2 }])) + &e(Gen::h(1))) + &e(Gen::h(2));
        assert_eq!(sys.normal_form(&x).unwrap(), want);
        let sq = Element::monomial(&[Gen::XBar { i: 1, j: 3 }, Gen::XBar { i: 1, j: 3 }]);
        assert!(sys.normal_form(&sq).unwrap().is_zero());
        let hh = Element::monomial(&[Gen::HBar(2), Gen::HBar(2)]);
        assert_eq!(sys.normal_form(&hh).unwrap(), e(Gen::h(2)));
    }

    #[test]
    fn binom_oracles() {
        // evaluate binom letters at integer points h = v
        fn eval(x: &Element, v: &[i64]) -> BigRational {
            let mut tot = BigRational::zero();
            for (w, c) in x.terms() {
                let mut p = c.to_rational().unwrap();
                for g in w {
                    match g {
                        Gen::HBinom { i, s } => p *= BigRational::from_integer(binom(v[*i as usize - 1], *s)),
                        _ => panic!(),
                    }
                }
                tot += p;
            }
            tot
        }
        for v1 in -4i64..6 {
            for v2 in -4i64..6 {
                for s in 0..4 {
                    for t in 0..4 {
                        let p = binom_product(1, s, t);
                        assert_eq!(eval(&p, &[v1, v2]), BigRational::from_integer(binom(v1, s) * binom(v1, t)));
                    }
                    for c in -3..4 {
                        let d = binom_diff(1, 2, c, s);
                        assert_eq!(eval(&d, &[v1, v2]), BigRational::from_integer(binom(v1 - v2 + c, s)));
                        let sh = binom_shift(2, c, s);
                        assert_eq!(eval(&sh, &[v1, v2]), BigRational::from_integer(binom(v2 + c, s)));
                    }
                }
            }
        }
    }

    #[test]
    fn dims() {
        assert_eq!(dim_schur(2, 2), BigInt::from(32));
        assert_eq!(dim_schur_zero(2, 2), BigInt::from(8));
        for n in 1..4 {
            assert_eq!(dim_schur(n, 0), BigInt::from(1));
        }
        // brute-force enumeration oracle
        for (n, r) in [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)] {
            assert_eq!(dim_schur(n, r), BigInt::from(enumerate_matrices(n as usize, r).len()));
        }
    }

    #[test]
    fn basis_examples() {
        let b = schur_basis(1, 0);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].element, Element::gen(Gen::Idem(vec![0])));
        let b = schur_basis(1, 1);
        assert_eq!(b.len(), 2);
        let els: Vec<_> = b.iter().map(|x| x.element.clone()).collect();
        assert!(els.contains(&Element::gen(Gen::Idem(vec![1]))));
        assert!(els.contains(&Element::monomial(&[Gen::Idem(vec![1]), Gen::HBar(1)])));
        assert_eq!(schur_basis(2, 2).len(), 32);
    }

    #[test]
    fn pbw_roundtrip() {
        for a in enumerate_matrices(2, 3) {
            let w = pbw_monomial(&a);
            assert_eq!(pbw_matrix(2, &w), Some(a.clone()));
            assert_eq!(classical_degree(&w), a.degree());
        }
    }

    #[test]
    fn idempotent_examples() {
        let l = vec![1u32, 1];
        let one = Element::gen(Gen::Idem(l.clone()));
        let sq = Element::monomial(&[Gen::Idem(l.clone()), Gen::Idem(l.clone())]);
        assert_eq!(schur_normal_form(2, 2, &sq).unwrap(), one);
        let x = Element::monomial(&[Gen::e(1), Gen::Idem(vec![2, 0])]);
        assert!(schur_normal_form(2, 2, &x).unwrap().is_zero());
        let x = Element::monomial(&[Gen::HBar(2), Gen::Idem(vec![2, 0])]);
        assert!(schur_normal_form(2, 2, &x).unwrap().is_zero());
        let sys = schur_rules(2, 2);
        assert!(sys.normal_form(&x).unwrap().is_zero());
    }

    #[test]
    fn quotient_relations() {
        for (n, r) in [(1u8, 1u32), (2, 1), (2, 2), (2, 3), (3, 2)] {
            let mut sum = Element::scalar(Scalar::from_int(-(r as i64)));
            for i in 1..=n {
                sum += &e(Gen::h(i));
            }
            assert!(schur_normal_form(n, r, &sum).unwrap().is_zero());
            for i in 1..=n {
                let mut p = e(Gen::HBar(i));
                for k in 1..=r {
                    p = &p * &(&e(Gen::h(i)) - &Element::scalar(Scalar::from_int(k as i64)));
                }
                assert!(schur_normal_form(n, r, &p).unwrap().is_zero(), "QS8 at n={n} r={r}");
            }
        }
    }

    #[test]
    fn quotient_basis_products_close() {
        let basis = schur_basis(2, 2);
        for a in basis.iter().step_by(3) {
            for b in basis.iter().step_by(5) {
                let p = &a.element * &b.element;
                let nf = schur_normal_form(2, 2, &p).unwrap();
                for (w, _) in nf.terms() {
                    assert!(basis.iter().any(|x| x.element.coeff(w) == Scalar::one()));
                }
                assert_eq!(schur_normal_form(2, 2, &nf).unwrap(), nf);
            }
        }
        for a in &basis {
            assert_eq!(schur_normal_form(2, 2, &a.element).unwrap(), a.element);
        }
    }

    #[test]
    fn matrix_oracle_soundness() {
        for n in 1..=4u8 {
            let nn = n as usize;
            let mut gens = Vec::new();
            for i in 1..=n {
                gens.push(Gen::h(i));
                gens.push(Gen::HBar(i));
                for j in 1..=n {
                    if i != j {
                        gens.push(Gen::X { i, j, s: 1 });
                        gens.push(Gen::XBar { i, j });
                    }
                }
            }
            let sys = classical_rules(n);
            for a in &gens {
                for b in &gens {
                    let want = qn_bracket(&generator_matrix(nn, a).unwrap(), &generator_matrix(nn, b).unwrap()).unwrap();
                    if let Some(m) = lemma_bracket(nn, a, b) {
                        assert_eq!(m, want, "table [{a}, {b}]");
                    }
                    let nf = sys.normal_form(&crate::freealg::super_commutator(&e(a.clone()), &e(b.clone())).unwrap()).unwrap();
                    let mut got = QnMatrix::zero(nn);
                    for (w, c) in nf.terms() {
                        assert_eq!(w.len(), 1, "[{a}, {b}] = {nf}");
                        got = got.add(&generator_matrix(nn, &w[0]).unwrap().scale(&c.to_rational().unwrap()));
                    }
                    assert_eq!(got, want, "[{a}, {b}]");
                }
            }
        }
    }

    #[test]
    fn idempotent_presentation() {
        for (n, r) in [(1u8, 1u32), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)] {
            for (name, x) in qs_idem_relations(n, r) {
                assert!(schur_normal_form(n, r, &x).unwrap().is_zero(), "{name} at ({n},{r})");
            }
            for (name, x) in qs_ideal_relations(n, r) {
                assert!(schur_normal_form(n, r, &x).unwrap().is_zero(), "{name} at ({n},{r})");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use std::sync::OnceLock;

        fn sys() -> &'static RewriteSystem {
            static S: OnceLock<RewriteSystem> = OnceLock::new();
            S.get_or_init(|| classical_rules(3))
        }

        fn letter() -> impl Strategy<Value = Gen> {
            (1u8..=3, 1u8..=3, 0u8..5, 1u32..=3).prop_map(|(i, j, k, s)| {
                let j = if i == j { i % 3 + 1 } else { j };
                match k {
                    0 => Gen::HBinom { i, s },
                    1 => Gen::HBar(i),
                    2 | 3 => Gen::X { i, j, s },
                    _ => Gen::XBar { i, j },
                }
            })
        }

        fn matrix() -> impl Strategy<Value = SuperMatrix> {
            (1u32..=3).prop_flat_map(|r| {
                let all = enumerate_matrices(3, r);
                (0..all.len()).prop_map(move |k| all[k].clone())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]
            #[test]
            fn pbw_spanning_and_integrality(w in prop::collection::vec(letter(), 1..=6), c in -5i64..=5) {
                let x = Element::term(w, Scalar::from_int(c));
                let nf = sys().normal_form(&x).unwrap();
                for (w, c) in nf.terms() {
                    prop_assert!(c.is_integer(), "{} in {}", c, nf);
                    prop_assert!(pbw_matrix(3, w).is_some(), "{:?} is not a PBW monomial", w);
                }
            }

            #[test]
            fn degree_filtration(a in matrix(), b in matrix()) {
                let mut w = pbw_monomial(&a);
                w.extend(pbw_monomial(&b));
                let nf = sys().normal_form(&Element::word(w)).unwrap();
                for (w, _) in nf.terms() {
                    prop_assert!(classical_degree(w) <= a.degree() + b.degree());
                }
            }
        }
    }
}
