//! U_q(q(n)): Olshanski and Drinfeld–Jimbo presentations, root vectors, Ω, Δ,
//! the Lusztig form and the quantum Schur quotient.

use crate::classical::{self, neg_root_order, pos_root_order, BasisEntry, SuperMatrix};
use crate::quotient::{self, TriangularEngine};
use crate::freealg::{inversions, AlgebraError, Element, Gen, RewriteSystem, Rule};
use crate::linalg::Echelon;
use crate::scalar::{bracket_eval, q_minus_qinv, qfactorial, Scalar};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// sgn on I(n|n).
pub fn sgn(i: i8) -> i64 {
    if i > 0 {
        1
    } else {
        -1
    }
}

/// φ(i,j) = δ_{|i|,|j|} sgn(j).
pub fn phi(i: i8, j: i8) -> i64 {
    if i.abs() == j.abs() {
        sgn(j)
    } else {
        0
    }
}

/// θ(i,j,k) = sgn(sgn(i)+sgn(j)+sgn(k)).
pub fn theta(i: i8, j: i8, k: i8) -> i64 {
    (sgn(i) + sgn(j) + sgn(k)).signum()
}

fn lg(i: i8, j: i8) -> Element {
    Element::gen(Gen::L { i, j })
}

fn inv_qq() -> Scalar {
    q_minus_qinv().inv().expect("q - q^-1 is invertible")
}

fn sc(x: &Element, c: &Scalar) -> Element {
    x.scale(c)
}

/// L-expression of X_{i,j} (even) or X̄_{i,j} (odd), i ≠ j.
pub fn xl_form(i: u8, j: u8, odd: bool) -> Element {
    let (ii, jj) = (i as i8, j as i8);
    let c = inv_qq();
    let k = |a: u8, e: i8| Element::gen(Gen::K { i: a, e });
    if i < j {
        let l = if odd { lg(-jj, ii) } else { lg(-jj, -ii) };
        sc(&(&k(j, 1) * &l), &-&c)
    } else {
        // X_{j',i'} with i' = j < j' = i
        if odd {
            sc(&(&lg(-jj, ii) * &k(i, -1)), &-&c)
        } else {
            sc(&(&lg(jj, ii) * &k(i, -1)), &c)
        }
    }
}

/// [K_i; c / t] as a Laurent polynomial in K_i^{±1}.
pub fn bracket_element(i: u8, c: i64, t: u32) -> Element {
    let mut r = Element::one();
    for s in 1..=t as i64 {
        let num = &Element::gen(Gen::K { i, e: 1 }).scale(&Scalar::q_pow(c - s + 1))
            - &Element::gen(Gen::K { i, e: -1 }).scale(&Scalar::q_pow(-c + s - 1));
        let den = (&Scalar::q_pow(s) - &Scalar::q_pow(-s)).inv().unwrap();
        r = &r * &num.scale(&den);
    }
    r
}

/// Rewrites a quantum letter into the L-alphabet (K^{±1} kept as L_{±i,±i}).
pub fn l_form(g: &Gen) -> Option<Element> {
    Some(match g {
        Gen::L { .. } => Element::gen(g.clone()),
        Gen::K { i, e } => {
            let a = *i as i8;
            if *e > 0 {
                lg(a, a)
            } else {
                lg(-a, -a)
            }
        }
        Gen::KBar(i) => sc(&lg(-(*i as i8), *i as i8), &-&inv_qq()),
        Gen::QX { i, j, s } => {
            let x = xl_form(*i, *j, false);
            let mut p = Element::one();
            for _ in 0..*s {
                p = &p * &x;
            }
            p.scale(&qfactorial(*s).inv().unwrap())
        }
        Gen::QXBar { i, j } => xl_form(*i, *j, true),
        Gen::KBracket { i, c, t } => bracket_element(*i, *c as i64, *t),
        Gen::QIdem(lam) => {
            let mut p = Element::one();
            for (k, l) in lam.iter().enumerate() {
                p = &p * &bracket_element(k as u8 + 1, 0, *l);
            }
            p
        }
        _ => return None,
    }
    .substitute(&|h: &Gen| match h {
        Gen::K { i, e } => {
            let a = *i as i8;
            if *e > 0 {
                lg(a, a)
            } else {
                lg(-a, -a)
            }
        }
        other => Element::gen(other.clone()),
    }))
}

/// Whole-element version of `l_form`.
pub fn to_l_alphabet(x: &Element) -> Option<Element> {
    let bad = std::cell::Cell::new(false);
    let r = x.substitute(&|g| match l_form(g) {
        Some(e) => e,
        None => {
            bad.set(true);
            Element::zero()
        }
    });
    if bad.get() {
        None
    } else {
        Some(r)
    }
}

// ---------------------------------------------------------------------------
// Olshanski presentation

/// p(i,j).
pub fn p_par(i: i8, j: i8) -> u8 {
    crate::freealg::l_parity(i, j)
}

/// Position of a negative root (i > j) or positive root (i < j) in the PBW order.
fn root_idx(n: u8, i: u8, j: u8) -> i64 {
    let v = if i > j { neg_root_order(n) } else { pos_root_order(n) };
    v.iter().position(|&p| p == (i, j)).expect("root in range") as i64
}

/// Rank of L_{i,j} in the PBW order: K^{±1}, F-type, K̄, E-type.
pub fn l_rank(n: u8, i: i8, j: i8) -> i64 {
    let nn = n as i64;
    let nr = nn * (nn - 1) / 2;
    let (a, b) = (i.unsigned_abs(), j.unsigned_abs());
    if i == j {
        2 * (a as i64 - 1) + (i < 0) as i64
    } else if a == b {
        2 * nn + 2 * nr + a as i64 - 1
    } else if j > 0 && a < b {
        // L_{a,b} ~ X_{b,a}, L_{-a,b} ~ X̄_{b,a}
        2 * nn + 2 * root_idx(n, b, a) + (i < 0) as i64
    } else {
        // L_{-b,-a} ~ X_{a,b}, L_{-b,a} ~ X̄_{a,b}
        let (lo, hi) = (b, a);
        3 * nn + 2 * nr + 2 * root_idx(n, lo, hi) + (j > 0) as i64
    }
}

/// All L_{i,j}, i ≤ j, sorted by rank.
pub fn l_letters(n: u8) -> Vec<(i8, i8)> {
    let idx: Vec<i8> = (-(n as i8)..=n as i8).filter(|&x| x != 0).collect();
    let mut v: Vec<(i8, i8)> = Vec::new();
    for &i in &idx {
        for &j in &idx {
            if i <= j {
                v.push((i, j));
            }
        }
    }
    v.sort_by_key(|&(i, j)| l_rank(n, i, j));
    v
}

type LWord = Vec<(i8, i8)>;

/// Left side minus right side of the exchange relation for L_{i,j}, L_{k,l}.
pub fn olshanski_relation(i: i8, j: i8, k: i8, l: i8) -> BTreeMap<LWord, Scalar> {
    let qq = q_minus_qinv();
    let mut rel: BTreeMap<LWord, Scalar> = BTreeMap::new();
    let mut add = |w: LWord, c: Scalar| {
        debug_assert!(w.iter().all(|&(a, b)| a <= b));
        let e = rel.entry(w).or_insert_with(Scalar::zero);
        *e = &*e + &c;
    };
    let sign = if p_par(i, j) * p_par(k, l) == 1 { -1 } else { 1 };
    add(vec![(i, j), (k, l)], &Scalar::q_pow(phi(j, l)) * &Scalar::from_int(sign));
    if k <= j && j < l {
        add(vec![(i, l), (k, j)], &qq * &Scalar::from_int(theta(i, j, k)));
    }
    if i <= -l && -l < j && j <= -k {
        add(vec![(i, -l), (k, -j)], &qq * &Scalar::from_int(theta(-i, -j, k)));
    }
    add(vec![(k, l), (i, j)], -Scalar::q_pow(phi(i, k)));
    if k < i && i <= l {
        add(vec![(i, l), (k, j)], -(&qq * &Scalar::from_int(theta(i, j, k))));
    }
    if -l <= i && i < -k && -k <= j {
        add(vec![(-i, l), (-k, j)], -(&qq * &Scalar::from_int(theta(-i, -j, k))));
    }
    rel.retain(|_, v| !v.is_zero());
    rel
}

/// Solved exchange rules of the L-presentation.
pub struct OlshanskiData {
    pub n: u8,
    pub letters: Vec<(i8, i8)>,
    pub rules: HashMap<((i8, i8), (i8, i8)), Element>,
}

fn lgen(p: (i8, i8)) -> Gen {
    Gen::L { i: p.0, j: p.1 }
}

impl OlshanskiData {
    fn build(n: u8) -> Result<Self, AlgebraError> {
        let letters = l_letters(n);
        let m = letters.len();
        let pos: HashMap<(i8, i8), usize> = letters.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        // larger word ↦ smaller column; the empty word is last
        let col = |w: &LWord| -> usize {
            match w.len() {
                0 => m * m,
                _ => m * m - 1 - (pos[&w[0]] * m + pos[&w[1]]),
            }
        };
        let mut ech = Echelon::<Scalar>::new();
        for &(i, j) in &letters {
            for &(k, l) in &letters {
                let rel = olshanski_relation(i, j, k, l);
                ech.insert(rel.iter().map(|(w, c)| (col(w), c.clone())).collect());
            }
        }
        for a in 1..=n as i8 {
            for w in [vec![(a, a), (-a, -a)], vec![(-a, -a), (a, a)]] {
                let mut row = BTreeMap::new();
                row.insert(col(&w), Scalar::one());
                row.insert(m * m, -Scalar::one());
                ech.insert(row);
            }
        }
        let word_of = |c: usize| -> LWord {
            if c == m * m {
                vec![]
            } else {
                let x = m * m - 1 - c;
                vec![letters[x / m], letters[x % m]]
            }
        };
        let mut rules = HashMap::new();
        for (c, row) in ech.rref() {
            let w = word_of(c);
            let (a, b) = (w[0], w[1]);
            let (ra, rb) = (pos[&a], pos[&b]);
            let expected = ra > rb || (ra == rb && p_par(a.0, a.1) == 1) || (a.0 == -b.0 && a.0 == a.1 && b.0 == b.1);
            if !expected {
                return Err(AlgebraError::Invalid(format!("relation leads with ordered word L{:?} L{:?}", a, b)));
            }
            let mut rhs = Element::zero();
            for (k, v) in row.iter().skip(1) {
                rhs.add_term(word_of(*k).into_iter().map(lgen).collect(), -v);
            }
            rules.insert((a, b), rhs);
        }
        let expected_count = m * (m - 1) / 2 + letters.iter().filter(|p| p_par(p.0, p.1) == 1).count() + n as usize;
        if rules.len() != expected_count {
            return Err(AlgebraError::Invalid(format!("{} exchange rules, expected {}", rules.len(), expected_count)));
        }
        Ok(OlshanskiData { n, letters, rules })
    }

    /// Cached data for rank n.
    pub fn get(n: u8) -> Arc<OlshanskiData> {
        static CACHE: OnceLock<Mutex<HashMap<u8, Arc<OlshanskiData>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(d) = cache.lock().unwrap().get(&n) {
            return d.clone();
        }
        let d = Arc::new(OlshanskiData::build(n).expect("the exchange relations solve into PBW rules"));
        cache.lock().unwrap().insert(n, d.clone());
        d
    }
}

/// Exchange system on the L-alphabet; irreducible words are ordered PBW monomials.
pub fn olshanski_rules(n: u8) -> RewriteSystem {
    let data = OlshanskiData::get(n);
    let d2 = data.clone();
    let rules = vec![
        Rule::single("K-letter", move |g| match g {
            Gen::K { .. } => l_form(g),
            _ => None,
        }),
        Rule::pair("exchange", move |a, b| match (a, b) {
            (Gen::L { i, j }, Gen::L { i: k, j: l }) => d2.rules.get(&((*i, *j), (*k, *l))).cloned(),
            _ => None,
        }),
    ];
    let order = move |w: &[Gen]| {
        let mut v = vec![w.len() as i64];
        v.extend(w.iter().map(|g| match g {
            Gen::L { i, j } => l_rank(n, *i, *j),
            _ => -1,
        }));
        v
    };
    let _ = data;
    RewriteSystem::new("olshanski", rules, order)
}

/// Normal form over the L-alphabet; other quantum letters are first rewritten via `l_form`.
pub fn l_normal_form(n: u8, x: &Element) -> Result<Element, AlgebraError> {
    let y = to_l_alphabet(x).ok_or_else(|| AlgebraError::Invalid("element is not over the quantum alphabet".into()))?;
    for (w, _) in y.terms() {
        for g in w {
            if let Gen::L { i, j } = g {
                if i.unsigned_abs() > n || j.unsigned_abs() > n || *i == 0 || *j == 0 || i > j {
                    return Err(AlgebraError::Invalid(format!("L_({},{}) is not a generator for n = {}", i, j, n)));
                }
            }
        }
    }
    olshanski_rules(n).normal_form(&y)
}


// ---------------------------------------------------------------------------
// Drinfeld–Jimbo generators and root vectors

/// L-expression of K_i^{±1}, K̄_i, E_j, F_j, Ē_j, F̄_j (and root vectors X, X̄).
pub fn dj_generator(g: &Gen) -> Option<Element> {
    match g {
        Gen::K { .. } | Gen::KBar(_) | Gen::QX { s: 1, .. } | Gen::QXBar { .. } => l_form(g),
        _ => None,
    }
}

fn qx(i: u8, j: u8) -> Element {
    Element::gen(Gen::QX { i, j, s: 1 })
}

fn qxb(i: u8, j: u8) -> Element {
    Element::gen(Gen::QXBar { i, j })
}

/// X_{i,j} or X̄_{i,j} as a polynomial in E, F, Ē, F̄ with intermediate index k.
pub fn root_vector_via(i: u8, j: u8, odd: bool, k: u8) -> Element {
    if i.abs_diff(j) == 1 {
        return if odd { qxb(i, j) } else { qx(i, j) };
    }
    let left = root_vector(i, k, false);
    let (a, b, c) = if i < j {
        (left.clone(), root_vector(k, j, odd), Scalar::q())
    } else {
        (root_vector(i, k, odd), root_vector(k, j, false), Scalar::q_pow(-1))
    };
    &(&a * &b) - &(&b * &a).scale(&c)
}

/// Root vector with the default intermediate index k = i ± 1.
pub fn root_vector(i: u8, j: u8, odd: bool) -> Element {
    let k = if i < j { i + 1 } else { i - 1 };
    root_vector_via(i, j, odd, k)
}

/// (ε_a, α_{i,j}).
fn pair_root(a: u8, i: u8, j: u8) -> i64 {
    (a == i) as i64 - (a == j) as i64
}

/// Ω on a single letter; None for letters outside the DJ/X alphabet.
fn omega_letter(g: &Gen) -> Option<Gen> {
    Some(match g {
        Gen::K { i, e } => Gen::K { i: *i, e: -*e },
        Gen::KBar(_) | Gen::KBracket { .. } | Gen::QIdem(_) => g.clone(),
        Gen::QX { i, j, s } => Gen::QX { i: *j, j: *i, s: *s },
        Gen::QXBar { i, j } => Gen::QXBar { i: *j, j: *i },
        _ => return None,
    })
}

/// The anti-involution Ω: reverses words, swaps E and F, inverts K and q.
pub fn omega(x: &Element) -> Result<Element, AlgebraError> {
    let mut out = Element::zero();
    for (w, c) in x.terms() {
        let mut nw = Vec::with_capacity(w.len());
        for g in w.iter().rev() {
            nw.push(omega_letter(g).ok_or_else(|| AlgebraError::Invalid(format!("Ω is not defined on {}", g)))?);
        }
        out.add_term(nw, c.bar());
    }
    Ok(out)
}

/// Twisted degree of a quantum letter.
pub fn quantum_letter_degree(g: &Gen) -> i64 {
    match g {
        Gen::QX { i, j, s } => 2 * *s as i64 * (*i as i64 - *j as i64).abs(),
        Gen::QXBar { i, j } => 2 * (*i as i64 - *j as i64).abs(),
        Gen::KBar(_) => 1,
        _ => 0,
    }
}

pub fn quantum_degree(w: &[Gen]) -> i64 {
    w.iter().map(quantum_letter_degree).sum()
}

// ---------------------------------------------------------------------------
// X-alphabet normal forms

/// Coefficient and X-letters of a single off-diagonal L_{i,j}; K letters are kept separate.
fn l_to_x(i: i8, j: i8) -> (Scalar, Vec<Gen>) {
    let qq = q_minus_qinv();
    let (a, b) = (i.unsigned_abs(), j.unsigned_abs());
    if i == j {
        return (Scalar::one(), vec![Gen::K { i: a, e: i.signum() }]);
    }
    if a == b {
        return (-&qq, vec![Gen::KBar(a)]);
    }
    if j > 0 && a < b {
        if i > 0 {
            (qq, vec![Gen::QX { i: b, j: a, s: 1 }, Gen::K { i: b, e: 1 }])
        } else {
            (-&qq, vec![Gen::QXBar { i: b, j: a }, Gen::K { i: b, e: 1 }])
        }
    } else if j < 0 {
        // L_{-b',-a'} with a' = |j| < b' = |i|
        (-&qq, vec![Gen::K { i: a, e: -1 }, Gen::QX { i: b, j: a, s: 1 }])
    } else {
        (-&qq, vec![Gen::K { i: a, e: -1 }, Gen::QXBar { i: b, j: a }])
    }
}

fn root_of(g: &Gen) -> Option<(u8, u8, u32)> {
    match g {
        Gen::QX { i, j, s } => Some((*i, *j, *s)),
        Gen::QXBar { i, j } => Some((*i, *j, 1)),
        _ => None,
    }
}

/// A PBW word split into its F-part, Cartan exponents, K̄-part and E-part.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct XMonomial {
    f: Vec<Gen>,
    sigma: Vec<i64>,
    kbar: Vec<Gen>,
    e: Vec<Gen>,
}

/// Converts one ordered L-monomial into X-form: scalar times F K^σ K̄ E.
fn l_monomial_to_x(n: u8, w: &[Gen]) -> (Scalar, XMonomial) {
    let mut coeff = Scalar::one();
    let mut letters: Vec<Gen> = Vec::new();
    for g in w {
        if let Gen::L { i, j } = g {
            let (c, ls) = l_to_x(*i, *j);
            coeff = &coeff * &c;
            letters.extend(ls);
        }
    }
    // middle: after the last F-type or K̄ letter that precedes the E part
    let first_e = letters.iter().position(|g| matches!(root_of(g), Some((i, j, _)) if i < j)).unwrap_or(letters.len());
    let split = letters[..first_e].iter().rposition(|g| !matches!(g, Gen::K { .. })).map_or(0, |p| p + 1);
    let split = {
        // K̄ letters belong to the middle; K's move to just before them
        let kb = letters[..split].iter().position(|g| matches!(g, Gen::KBar(_))).unwrap_or(split);
        kb.min(split)
    };
    let mut sigma = vec![0i64; n as usize];
    let mut qpow = 0i64;
    let mut out = XMonomial { f: vec![], sigma: vec![], kbar: vec![], e: vec![] };
    for (p, g) in letters.iter().enumerate() {
        match g {
            Gen::K { i, e } => {
                sigma[*i as usize - 1] += *e as i64;
                let ei = *e as i64;
                if p < split {
                    for h in &letters[p + 1..split] {
                        if let Some((a, b, _)) = root_of(h) {
                            qpow += ei * pair_root(*i, a, b);
                        }
                    }
                } else {
                    for h in &letters[split..p] {
                        if let Some((a, b, _)) = root_of(h) {
                            qpow -= ei * pair_root(*i, a, b);
                        }
                    }
                }
            }
            Gen::KBar(_) => out.kbar.push(g.clone()),
            _ => {
                if p < split {
                    out.f.push(g.clone())
                } else {
                    out.e.push(g.clone())
                }
            }
        }
    }
    out.sigma = sigma;
    out.f = group_powers(&out.f, &mut coeff);
    out.e = group_powers(&out.e, &mut coeff);
    (&coeff * &Scalar::q_pow(qpow), out)
}

/// Merges runs X X ... X into [m]! X^{(m)}.
fn group_powers(w: &[Gen], coeff: &mut Scalar) -> Vec<Gen> {
    let mut out: Vec<Gen> = Vec::new();
    for g in w {
        if let (Some(Gen::QX { i, j, s }), Gen::QX { i: i2, j: j2, s: s2 }) = (out.last_mut(), g) {
            if i == i2 && j == j2 {
                let t = *s + *s2;
                *coeff = &(&*coeff * &qfactorial(t)) * &(&qfactorial(*s) * &qfactorial(*s2)).inv().unwrap();
                *s = t;
                continue;
            }
        }
        out.push(g.clone());
    }
    out
}

/// Normal form in the X-alphabet basis F_{C-} K_σ K̄_{C01} E_{C+} (σ ∈ Z^n).
pub fn x_normal_form(n: u8, x: &Element) -> Result<Element, AlgebraError> {
    let lnf = l_normal_form(n, x)?;
    let mut out = Element::zero();
    for (w, c) in lnf.terms() {
        let (k, m) = l_monomial_to_x(n, w);
        let mut word = m.f.clone();
        for (i, &s) in m.sigma.iter().enumerate() {
            for _ in 0..s.unsigned_abs() {
                word.push(Gen::K { i: i as u8 + 1, e: s.signum() as i8 });
            }
        }
        word.extend(m.kbar.iter().cloned());
        word.extend(m.e.iter().cloned());
        out.add_term(word, c * &k);
    }
    Ok(out)
}

/// Laurent polynomial [K; 0 / t] as exponent ↦ coefficient.
fn bracket_poly(c: i64, t: u32) -> BTreeMap<i64, Scalar> {
    let mut p: BTreeMap<i64, Scalar> = BTreeMap::new();
    p.insert(0, Scalar::one());
    for s in 1..=t as i64 {
        let den = (&Scalar::q_pow(s) - &Scalar::q_pow(-s)).inv().unwrap();
        let a = &Scalar::q_pow(c - s + 1) * &den;
        let b = -&(&Scalar::q_pow(-c + s - 1) * &den);
        let mut np: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (e, v) in &p {
            for (de, f) in [(1, &a), (-1, &b)] {
                let x = np.entry(e + de).or_insert_with(Scalar::zero);
                *x = &*x + &(v * f);
            }
        }
        np.retain(|_, v| !v.is_zero());
        p = np;
    }
    p
}

/// K^m = Σ c · K^δ [K; 0 / t] with δ ∈ {0,1}.
pub fn cartan_expand(m: i64) -> Vec<(bool, u32, Scalar)> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Vec<(bool, u32, Scalar)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&m) {
        return v.clone();
    }
    let t_max = (m.abs() + 1) as u32;
    let off = t_max as i64 + 2;
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for t in 0..=t_max {
        for d in [false, true] {
            let p = bracket_poly(0, t);
            let col: BTreeMap<usize, Scalar> = p.into_iter().map(|(e, v)| ((e + d as i64 + off) as usize, v)).collect();
            basis.push(col);
            labels.push((d, t));
        }
    }
    let mut target = BTreeMap::new();
    target.insert((m + off) as usize, Scalar::one());
    let x = crate::linalg::solve_columns(&basis, &target).expect("K^δ[K;0/t] spans the Laurent polynomials");
    let v: Vec<(bool, u32, Scalar)> = labels.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|((d, t), c)| (d, t, c)).collect();
    cache.lock().unwrap().insert(m, v.clone());
    v
}

/// Normal form in the integral PBW basis F_{A-} K^τ [K; 0 / A00] K̄_{A01} E_{A+}, τ ∈ Z_2^n.
pub fn lusztig_normal_form(n: u8, x: &Element) -> Result<Element, AlgebraError> {
    let xnf = x_normal_form(n, x)?;
    let mut out = Element::zero();
    for (w, c) in xnf.terms() {
        let f: Vec<Gen> = w.iter().take_while(|g| matches!(root_of(g), Some((i, j, _)) if i > j)).cloned().collect();
        let mut sigma = vec![0i64; n as usize];
        let mut rest = &w[f.len()..];
        while let Some(Gen::K { i, e }) = rest.first() {
            sigma[*i as usize - 1] += *e as i64;
            rest = &rest[1..];
        }
        // Σ over products of per-index expansions
        let mut parts: Vec<(Vec<Gen>, Scalar)> = vec![(f.clone(), c.clone())];
        for (i, &s) in sigma.iter().enumerate() {
            let exp = cartan_expand(s);
            let mut next = Vec::new();
            for (pw, pc) in &parts {
                for (d, t, k) in &exp {
                    let mut nw = pw.clone();
                    if *d {
                        nw.push(Gen::K { i: i as u8 + 1, e: 1 });
                    }
                    if *t > 0 {
                        nw.push(Gen::KBracket { i: i as u8 + 1, c: 0, t: *t });
                    }
                    next.push((nw, pc * k));
                }
            }
            parts = next;
        }
        for (mut pw, pc) in parts {
            pw.extend(rest.iter().cloned());
            out.add_term(pw, pc);
        }
    }
    Ok(out)
}

/// Position of a letter in the integral PBW order F < K < [K] < K̄ < E.
pub fn lusztig_rank(n: u8, g: &Gen) -> i64 {
    let nn = n as i64;
    let nr = nn * (nn - 1) / 2;
    match g {
        Gen::QX { i, j, .. } if i > j => 2 * root_idx(n, *i, *j),
        Gen::QXBar { i, j } if i > j => 2 * root_idx(n, *i, *j) + 1,
        Gen::QIdem(_) => 2 * nr,
        Gen::K { i, .. } => 2 * nr + 2 * *i as i64 - 1,
        Gen::KBracket { i, .. } => 2 * nr + 2 * *i as i64,
        Gen::KBar(i) => 2 * nr + 2 * nn + *i as i64,
        Gen::QX { i, j, .. } => 2 * nr + 3 * nn + 1 + 2 * root_idx(n, *i, *j),
        Gen::QXBar { i, j } => 2 * nr + 3 * nn + 2 + 2 * root_idx(n, *i, *j),
        _ => i64::MAX / 2,
    }
}

fn is_quantum_letter(g: &Gen) -> bool {
    matches!(g, Gen::K { .. } | Gen::KBar(_) | Gen::QX { .. } | Gen::QXBar { .. } | Gen::KBracket { .. })
}

type PairCache = Mutex<HashMap<(Gen, Gen), Element>>;
type BlockCache = Mutex<HashMap<Vec<Gen>, Element>>;

fn is_cartan_letter(g: &Gen) -> bool {
    matches!(g, Gen::K { .. } | Gen::KBracket { .. })
}

/// A Cartan run is irreducible when it reads K^δ [K;0/t] index by index.
fn cartan_run_irreducible(n: u8, run: &[Gen]) -> bool {
    run.iter().all(|g| matches!(g, Gen::K { e: 1, .. } | Gen::KBracket { c: 0, t: 1.., .. }))
        && run.windows(2).all(|p| lusztig_rank(n, &p[0]) < lusztig_rank(n, &p[1]))
}

/// Straightening system on the X-alphabet with divided powers and brackets.
/// Each out-of-order pair is rewritten to its integral PBW expansion; runs of
/// Cartan letters are rewritten as a whole, since pairwise Cartan products do not terminate.
pub fn lusztig_rules(n: u8) -> RewriteSystem {
    let cache: Arc<PairCache> = Arc::new(Mutex::new(HashMap::new()));
    let c1 = cache.clone();
    let blocks: Arc<BlockCache> = Arc::new(Mutex::new(HashMap::new()));
    let rules = vec![
        Rule::single("basis-letter", move |g| match g {
            Gen::QX { s: 0, .. } | Gen::KBracket { t: 0, .. } => Some(Element::one()),
            Gen::K { e: -1, .. } => Some(lusztig_normal_form(n, &Element::gen(g.clone())).expect("letter in range")),
            Gen::KBracket { c, .. } if *c != 0 => Some(lusztig_normal_form(n, &Element::gen(g.clone())).expect("letter in range")),
            _ => None,
        }),
        Rule::run("cartan-run", move |w| {
            let len = w.iter().take_while(|g| is_cartan_letter(g)).count();
            if len < 2 || cartan_run_irreducible(n, &w[..len]) {
                return None;
            }
            let key = w[..len].to_vec();
            if let Some(e) = blocks.lock().unwrap().get(&key) {
                return Some((len, e.clone()));
            }
            let e = lusztig_normal_form(n, &Element::monomial(&key)).expect("letters in range");
            blocks.lock().unwrap().insert(key, e.clone());
            Some((len, e))
        }),
        Rule::pair("straighten", move |a, b| {
            if !is_quantum_letter(a) || !is_quantum_letter(b) || lusztig_rank(n, a) < lusztig_rank(n, b) {
                return None;
            }
            let key = (a.clone(), b.clone());
            if let Some(e) = c1.lock().unwrap().get(&key) {
                return Some(e.clone());
            }
            let e = lusztig_normal_form(n, &Element::monomial(&[a.clone(), b.clone()])).expect("letters in range");
            c1.lock().unwrap().insert(key, e.clone());
            Some(e)
        }),
    ];
    let rank = move |g: &Gen| lusztig_rank(n, g);
    RewriteSystem::new("lusztig", rules, move |w: &[Gen]| vec![quantum_degree(w), inversions(w, rank), w.len() as i64])
}

fn quantum_weight(n: usize, g: &Gen) -> Option<Vec<i64>> {
    let (i, j, s) = match g {
        Gen::QX { i, j, s } => (*i, *j, *s as i64),
        Gen::QXBar { i, j } => (*i, *j, 1),
        _ => return None,
    };
    let mut v = vec![0i64; n];
    v[i as usize - 1] += s;
    v[j as usize - 1] -= s;
    Some(v)
}

fn quantum_cartan_value(g: &Gen, lambda: &[u32]) -> Option<Scalar> {
    match g {
        Gen::K { i, e } => Some(Scalar::q_pow(*e as i64 * lambda[*i as usize - 1] as i64)),
        Gen::KBracket { i, c, t } => Some(bracket_eval(lambda[*i as usize - 1] as i64, *c as i64, *t)),
        _ => None,
    }
}

fn shifted(lam: &[u32], wt: &[i64], sign: i64) -> Option<Vec<u32>> {
    let v: Vec<i64> = lam.iter().zip(wt).map(|(x, y)| *x as i64 + sign * y).collect();
    if v.iter().any(|&x| x < 0) {
        None
    } else {
        Some(v.iter().map(|&x| x as u32).collect())
    }
}

fn quantum_idem_pair(n: usize, a: &Gen, b: &Gen) -> Option<Element> {
    match (a, b) {
        (Gen::QIdem(l), Gen::QIdem(m)) => Some(if l == m { Element::gen(a.clone()) } else { Element::zero() }),
        (g, Gen::QIdem(l)) | (Gen::QIdem(l), g) if quantum_cartan_value(g, l).is_some() => {
            Some(Element::gen(Gen::QIdem(l.clone())).scale(&quantum_cartan_value(g, l).unwrap()))
        }
        (Gen::KBar(i), Gen::QIdem(l)) => Some(if l[*i as usize - 1] == 0 {
            Element::zero()
        } else {
            Element::monomial(&[b.clone(), a.clone()])
        }),
        (Gen::QIdem(l), Gen::KBar(i)) if l[*i as usize - 1] == 0 => Some(Element::zero()),
        (g, Gen::QIdem(l)) => {
            let wt = quantum_weight(n, g)?;
            Some(match shifted(l, &wt, 1) {
                Some(nl) => Element::monomial(&[Gen::QIdem(nl), g.clone()]),
                None => Element::zero(),
            })
        }
        (Gen::QIdem(l), g) => {
            let wt = quantum_weight(n, g)?;
            match shifted(l, &wt, -1) {
                Some(_) => None,
                None => Some(Element::zero()),
            }
        }
        _ => None,
    }
}

/// `lusztig_rules` extended by the idempotent calculus of U_q(n,r); idempotents move left.
pub fn quantum_schur_rules(n: u8, r: u32) -> RewriteSystem {
    let base = lusztig_rules(n);
    let nn = n as usize;
    let mut rules = vec![
        Rule::single("bound", move |g| match g {
            Gen::QX { s, .. } if *s > r => Some(Element::zero()),
            Gen::KBracket { c: 0, t, .. } if *t > r => Some(Element::zero()),
            _ => None,
        }),
        Rule::pair("root-idem", move |a, b| quantum_idem_pair(nn, a, b)),
    ];
    rules.extend(base.rules.iter().cloned());
    let rank = move |g: &Gen| match g {
        Gen::QIdem(_) => -1,
        g => lusztig_rank(n, g),
    };
    RewriteSystem::new("quantum-schur", rules, move |w: &[Gen]| vec![quantum_degree(w), inversions(w, rank), w.len() as i64])
}

/// Engine adaptor for the quantum Schur-quotient reduction.
#[derive(Clone, Copy)]
pub struct QuantumEngine {
    pub n: u8,
}

impl TriangularEngine for QuantumEngine {
    fn n(&self) -> usize {
        self.n as usize
    }
    fn nf(&self, x: &Element) -> Result<Element, AlgebraError> {
        lusztig_normal_form(self.n, x)
    }
    fn idem(&self, lambda: &[u32]) -> Gen {
        Gen::QIdem(lambda.to_vec())
    }
    fn as_idem<'a>(&self, g: &'a Gen) -> Option<&'a [u32]> {
        match g {
            Gen::QIdem(l) => Some(l),
            _ => None,
        }
    }
    fn root_weight(&self, g: &Gen) -> Option<Vec<i64>> {
        quantum_weight(self.n as usize, g)
    }
    fn is_negative(&self, g: &Gen) -> bool {
        matches!(g, Gen::QX { i, j, .. } | Gen::QXBar { i, j } if i > j)
    }
    fn odd_cartan_index(&self, g: &Gen) -> Option<usize> {
        match g {
            Gen::KBar(i) => Some(*i as usize),
            _ => None,
        }
    }
    fn cartan_value(&self, g: &Gen, lambda: &[u32]) -> Option<Scalar> {
        quantum_cartan_value(g, lambda)
    }
    fn degree(&self, w: &[Gen]) -> i64 {
        quantum_degree(w)
    }
    fn split_matrix(&self, w: &[Gen]) -> Option<SuperMatrix> {
        let mut a = SuperMatrix::zero(self.n as usize);
        for g in w {
            match g {
                Gen::QX { i, j, s } => a.a0[*i as usize - 1][*j as usize - 1] += s,
                Gen::QXBar { i, j } => a.a1[*i as usize - 1][*j as usize - 1] += 1,
                Gen::KBar(i) => a.a1[*i as usize - 1][*i as usize - 1] += 1,
                _ => return None,
            }
        }
        Some(a)
    }
    fn f_word(&self, a: &SuperMatrix) -> Vec<Gen> {
        to_quantum_word(&classical::f_word(a))
    }
    fn e_word(&self, a: &SuperMatrix) -> Vec<Gen> {
        to_quantum_word(&classical::e_word(a))
    }
    fn hbar_word(&self, a: &SuperMatrix) -> Vec<Gen> {
        to_quantum_word(&classical::hbar_word(a))
    }
}

/// Classical root letters to their quantum counterparts.
fn to_quantum_word(w: &[Gen]) -> Vec<Gen> {
    w.iter()
        .map(|g| match g {
            Gen::X { i, j, s } => Gen::QX { i: *i, j: *j, s: *s },
            Gen::XBar { i, j } => Gen::QXBar { i: *i, j: *j },
            Gen::HBar(i) => Gen::KBar(*i),
            other => other.clone(),
        })
        .collect()
}

/// Normal form in U_q(n,r): a combination of F_{A-} 1_{χ(A)} K̄_{A01} E_{A+}.
pub fn quantum_schur_normal_form(n: u8, r: u32, x: &Element) -> Result<Element, AlgebraError> {
    quotient::schur_normal_form(&QuantumEngine { n }, r, x)
}

/// 𝔲^q_A = F_{A-} 1_{χ(A)} K̄_{A01} E_{A+} for all A ∈ M_n(N|Z_2)_r.
pub fn quantum_schur_basis(n: usize, r: u32) -> Vec<BasisEntry> {
    classical::schur_basis(n, r)
        .into_iter()
        .map(|b| {
            let w: Vec<Gen> = b
                .element
                .terms()
                .next()
                .map(|(w, _)| w.clone())
                .unwrap_or_default()
                .iter()
                .map(|g| match g {
                    Gen::Idem(l) => Gen::QIdem(l.clone()),
                    g => to_quantum_word(std::slice::from_ref(g)).remove(0),
                })
                .collect();
            BasisEntry { a: b.a, lambda: b.lambda, element: Element::word(w) }
        })
        .collect()
}

/// Relations of the ideal I_q: K_1⋯K_n = q^r, Π_{s=0}^r (K_i − q^s), K̄_i Π_{s=1}^r (K_i − q^s).
pub fn ideal_relations(n: u8, r: u32) -> Vec<(String, Element)> {
    let mut out = Vec::new();
    let mut prod = Element::one();
    for i in 1..=n {
        prod = &prod * &kk(i, 1);
    }
    out.push(("QQ7".to_string(), &prod - &scal(Scalar::q_pow(r as i64))));
    for i in 1..=n {
        let mut p = Element::one();
        for s in 1..=r as i64 {
            p = &p * &(&kk(i, 1) - &scal(Scalar::q_pow(s)));
        }
        out.push((format!("QQ8/{i}"), &(&kk(i, 1) - &Element::one()) * &p));
        out.push((format!("QQ9/{i}"), &kb(i) * &p));
    }
    out
}

// ---------------------------------------------------------------------------
// comultiplication

fn slot_of(g: &Gen) -> u8 {
    match g {
        Gen::Slot { slot, .. } => *slot,
        _ => 0,
    }
}

/// Stable sort of a tensor word by slot, with the Koszul sign of the reordering.
fn canonical_tensor_word(w: &[Gen]) -> (i64, Vec<Gen>) {
    let mut sign = 1i64;
    for a in 0..w.len() {
        for b in a + 1..w.len() {
            if slot_of(&w[a]) > slot_of(&w[b]) && w[a].parity() * w[b].parity() == 1 {
                sign = -sign;
            }
        }
    }
    let mut v = w.to_vec();
    v.sort_by_key(slot_of);
    (sign, v)
}

/// Product in the tensor power: (u1 ⊗ u2)(v1 ⊗ v2) = (−1)^{û2 v̂1} u1 v1 ⊗ u2 v2.
pub fn tensor_mul(a: &Element, b: &Element) -> Element {
    let mut out = Element::zero();
    for (u, c) in a.terms() {
        for (v, d) in b.terms() {
            let mut w = u.clone();
            w.extend(v.iter().cloned());
            let (sign, w) = canonical_tensor_word(&w);
            out.add_term(w, &(c * d) * &Scalar::from_int(sign));
        }
    }
    out
}

fn in_slot(slot: u8, g: Gen) -> Gen {
    Gen::Slot { slot, g: Box::new(g) }
}

/// Δ(L_{i,j}) = Σ_{i≤k≤j} L_{i,k} ⊗ L_{k,j}, placed in slots s and s+1.
fn delta_l(i: i8, j: i8, s: u8) -> Element {
    let mut out = Element::zero();
    for k in i..=j {
        if k != 0 {
            out.add_term(vec![in_slot(s, Gen::L { i, j: k }), in_slot(s + 1, Gen::L { i: k, j })], Scalar::one());
        }
    }
    out
}

/// Applies Δ to tensor factor `s` of an element of the tensor power, shifting later slots.
pub fn comultiply_slot(x: &Element, s: u8) -> Result<Element, AlgebraError> {
    let mut out = Element::zero();
    for (w, c) in x.terms() {
        let mut acc = Element::one();
        for g in w {
            let piece = match g {
                Gen::Slot { slot, g: inner } if *slot == s => match inner.as_ref() {
                    Gen::L { i, j } => delta_l(*i, *j, s),
                    other => return Err(AlgebraError::Invalid(format!("Δ needs L-letters, found {}", other))),
                },
                Gen::Slot { slot, g: inner } if *slot > s => Element::gen(in_slot(slot + 1, (**inner).clone())),
                g => Element::gen(g.clone()),
            };
            acc = tensor_mul(&acc, &piece);
        }
        out.add_scaled(&acc, c);
    }
    Ok(out)
}

/// Δ(x) ∈ U ⊗ U with slots 1 and 2; quantum letters are first rewritten into the L-alphabet.
pub fn comultiply(x: &Element) -> Result<Element, AlgebraError> {
    let y = to_l_alphabet(x).ok_or_else(|| AlgebraError::Invalid("Δ is defined on quantum letters".into()))?;
    let lifted = y.substitute(&|g| Element::gen(in_slot(1, g.clone())));
    comultiply_slot(&lifted, 1)
}

/// Normalizes each tensor factor with the L-engine.
pub fn tensor_normal_form(n: u8, x: &Element) -> Result<Element, AlgebraError> {
    let mut out = Element::zero();
    for (w, c) in x.terms() {
        let (sign, w) = canonical_tensor_word(w);
        let mut acc = Element::scalar(c * &Scalar::from_int(sign));
        let mut start = 0;
        while start < w.len() {
            let s = slot_of(&w[start]);
            let end = start + w[start..].iter().take_while(|g| slot_of(g) == s).count();
            let inner: Vec<Gen> = w[start..end]
                .iter()
                .map(|g| match g {
                    Gen::Slot { g, .. } => (**g).clone(),
                    g => g.clone(),
                })
                .collect();
            let nf = l_normal_form(n, &Element::word(inner))?;
            acc = tensor_mul(&acc, &nf.substitute(&|g| Element::gen(in_slot(s, g.clone()))));
            start = end;
        }
        out += &acc;
    }
    Ok(out)
}

/// a ⊗ b for elements over the quantum alphabet.
pub fn tensor2(a: &Element, b: &Element) -> Element {
    tensor_mul(&a.substitute(&|g| Element::gen(in_slot(1, g.clone()))), &b.substitute(&|g| Element::gen(in_slot(2, g.clone()))))
}

// ---------------------------------------------------------------------------
// defining relations of the DJ presentation

fn kk(i: u8, e: i8) -> Element {
    Element::gen(Gen::K { i, e })
}

fn kb(i: u8) -> Element {
    Element::gen(Gen::KBar(i))
}

fn sq(x: &Element) -> Element {
    x * x
}

fn scal(c: Scalar) -> Element {
    Element::scalar(c)
}

/// Named relations QQ1–QQ6 at rank n, each as an element that vanishes in U_q(q(n)).
pub fn dj_relations(n: u8) -> Vec<(String, Element)> {
    let q = Scalar::q();
    let qi = Scalar::q_pow(-1);
    let cinv = inv_qq();
    let e = |j: u8| qx(j, j + 1);
    let f = |j: u8| qx(j + 1, j);
    let eb = |j: u8| qxb(j, j + 1);
    let fb = |j: u8| qxb(j + 1, j);
    let comm = |a: &Element, b: &Element| &(a * b) - &(b * a);
    let acomm = |a: &Element, b: &Element| &(a * b) + &(b * a);
    let mut out: Vec<(String, Element)> = Vec::new();
    let mut push = |name: String, x: Element| out.push((name, x));
    for i in 1..=n {
        push(format!("QQ1/KKinv/{i}"), &(&kk(i, 1) * &kk(i, -1)) - &Element::one());
        push(format!("QQ1/KinvK/{i}"), &(&kk(i, -1) * &kk(i, 1)) - &Element::one());
        for j in 1..=n {
            push(format!("QQ1/KK/{i},{j}"), comm(&kk(i, 1), &kk(j, 1)));
            push(format!("QQ1/KKbar/{i},{j}"), comm(&kk(i, 1), &kb(j)));
            let mut r = acomm(&kb(i), &kb(j));
            if i == j {
                let d = (&Scalar::q_pow(2) - &Scalar::q_pow(-2)).inv().unwrap();
                r -= &(&sq(&kk(i, 1)) - &sq(&kk(i, -1))).scale(&(&Scalar::from_int(2) * &d));
            }
            push(format!("QQ1/KbarKbar/{i},{j}"), r);
        }
    }
    for i in 1..=n {
        for j in 1..n {
            let c = pair_root(i, j, j + 1);
            let up = Scalar::q_pow(c);
            let dn = Scalar::q_pow(-c);
            push(format!("QQ2/KE/{i},{j}"), &(&kk(i, 1) * &e(j)) - &(&e(j) * &kk(i, 1)).scale(&up));
            push(format!("QQ2/KEbar/{i},{j}"), &(&kk(i, 1) * &eb(j)) - &(&eb(j) * &kk(i, 1)).scale(&up));
            push(format!("QQ2/KF/{i},{j}"), &(&kk(i, 1) * &f(j)) - &(&f(j) * &kk(i, 1)).scale(&dn));
            push(format!("QQ2/KFbar/{i},{j}"), &(&kk(i, 1) * &fb(j)) - &(&fb(j) * &kk(i, 1)).scale(&dn));
        }
    }
    for i in 1..=n {
        let k = kb(i);
        for j in 1..n {
            if j == i {
                push(format!("QQ3/KbarE/{i}"), &(&(&k * &e(i)) - &(&e(i) * &k).scale(&q)) - &(&eb(i) * &kk(i, -1)));
                push(format!("QQ3/KbarF/{i}"), &(&(&k * &f(i)) - &(&f(i) * &k).scale(&q)) + &(&fb(i) * &kk(i, 1)));
                push(format!("QQ3/KbarEbar/{i}"), &(&(&k * &eb(i)) + &(&eb(i) * &k).scale(&q)) - &(&e(i) * &kk(i, -1)));
                push(format!("QQ3/KbarFbar/{i}"), &(&(&k * &fb(i)) + &(&fb(i) * &k).scale(&q)) - &(&f(i) * &kk(i, 1)));
            } else if j + 1 == i {
                push(format!("QQ3/KbarE-/{i}"), &(&(&k * &e(j)).scale(&q) - &(&e(j) * &k)) + &(&kk(i, -1) * &eb(j)));
                push(format!("QQ3/KbarF-/{i}"), &(&(&k * &f(j)).scale(&q) - &(&f(j) * &k)) - &(&kk(i, 1) * &fb(j)));
                push(format!("QQ3/KbarEbar-/{i}"), &(&(&k * &eb(j)).scale(&q) + &(&eb(j) * &k)) - &(&kk(i, -1) * &e(j)));
                push(format!("QQ3/KbarFbar-/{i}"), &(&(&k * &fb(j)).scale(&q) + &(&fb(j) * &k)) - &(&kk(i, 1) * &f(j)));
            } else {
                push(format!("QQ3/KbarE0/{i},{j}"), comm(&k, &e(j)));
                push(format!("QQ3/KbarF0/{i},{j}"), comm(&k, &f(j)));
                push(format!("QQ3/KbarEbar0/{i},{j}"), acomm(&k, &eb(j)));
                push(format!("QQ3/KbarFbar0/{i},{j}"), acomm(&k, &fb(j)));
            }
        }
    }
    for i in 1..n {
        for j in 1..n {
            let d = i == j;
            let mut r = comm(&e(i), &f(j));
            if d {
                r -= &(&(&kk(i, 1) * &kk(i + 1, -1)) - &(&kk(i, -1) * &kk(i + 1, 1))).scale(&cinv);
            }
            push(format!("QQ4/EF/{i},{j}"), r);
            let mut r = acomm(&eb(i), &fb(j));
            if d {
                r -= &(&(&kk(i, 1) * &kk(i + 1, 1)) - &(&kk(i, -1) * &kk(i + 1, -1))).scale(&cinv);
                r -= &(&kb(i) * &kb(i + 1)).scale(&q_minus_qinv());
            }
            push(format!("QQ4/EbarFbar/{i},{j}"), r);
            let mut r = comm(&e(i), &fb(j));
            if d {
                r -= &(&(&kk(i + 1, -1) * &kb(i)) - &(&kb(i + 1) * &kk(i, -1)));
            }
            push(format!("QQ4/EFbar/{i},{j}"), r);
            let mut r = comm(&eb(i), &f(j));
            if d {
                r -= &(&(&kk(i + 1, 1) * &kb(i)) - &(&kb(i + 1) * &kk(i, 1)));
            }
            push(format!("QQ4/EbarF/{i},{j}"), r);
        }
    }
    let ratio = &q_minus_qinv() * &(&q + &qi).inv().unwrap();
    for i in 1..n {
        push(format!("QQ5/Ebar2/{i}"), &sq(&eb(i)) + &sq(&e(i)).scale(&ratio));
        push(format!("QQ5/Fbar2/{i}"), &sq(&fb(i)) - &sq(&f(i)).scale(&ratio));
        for j in 1..n {
            let dist = i.abs_diff(j);
            if dist != 1 {
                push(format!("QQ5/EEbar/{i},{j}"), comm(&e(i), &eb(j)));
                push(format!("QQ5/FFbar/{i},{j}"), comm(&f(i), &fb(j)));
            }
            if dist > 1 {
                push(format!("QQ5/EE/{i},{j}"), comm(&e(i), &e(j)));
                push(format!("QQ5/FF/{i},{j}"), comm(&f(i), &f(j)));
                push(format!("QQ5/EbarEbar/{i},{j}"), acomm(&eb(i), &eb(j)));
                push(format!("QQ5/FbarFbar/{i},{j}"), acomm(&fb(i), &fb(j)));
            }
        }
        if i + 1 < n {
            let j = i + 1;
            let lhs = &(&e(i) * &e(j)) - &(&e(j) * &e(i)).scale(&q);
            let rhs = &(&eb(i) * &eb(j)) + &(&eb(j) * &eb(i)).scale(&q);
            push(format!("QQ5/EE+/{i}"), &lhs - &rhs);
            let lhs = &(&e(i) * &eb(j)) - &(&eb(j) * &e(i)).scale(&q);
            let rhs = &(&eb(i) * &e(j)) - &(&e(j) * &eb(i)).scale(&q);
            push(format!("QQ5/EEbar+/{i}"), &lhs - &rhs);
            let lhs = &(&f(j) * &f(i)).scale(&q) - &(&f(i) * &f(j));
            let rhs = &(&fb(j) * &fb(i)).scale(&q) + &(&fb(i) * &fb(j));
            push(format!("QQ5/FF+/{i}"), &lhs - &rhs);
            let lhs = &(&fb(j) * &f(i)).scale(&q) - &(&f(i) * &fb(j));
            let rhs = &(&f(j) * &fb(i)).scale(&q) - &(&fb(i) * &f(j));
            push(format!("QQ5/FFbar+/{i}"), &lhs - &rhs);
        }
    }
    let qpq = &q + &qi;
    let serre = |a: &Element, b: &Element| &(&(&sq(a) * b) - &(&(a * b) * a).scale(&qpq)) + &(b * &sq(a));
    for i in 1..n {
        for j in 1..n {
            if i.abs_diff(j) == 1 {
                push(format!("QQ6/E/{i},{j}"), serre(&e(i), &e(j)));
                push(format!("QQ6/F/{i},{j}"), serre(&f(i), &f(j)));
                push(format!("QQ6/Ebar/{i},{j}"), serre(&e(i), &eb(j)));
                push(format!("QQ6/Fbar/{i},{j}"), serre(&f(i), &fb(j)));
            }
        }
    }
    out
}

/// Idempotent presentation QQ1′–QQ4′ of the quantum queer Schur superalgebra.
pub fn qq_idem_relations(n: u8, r: u32) -> Vec<(String, Element)> {
    use crate::classical::{compositions, idem_exchange};
    use crate::scalar::signed_qint;
    let lams = compositions(n as usize, r);
    let idem = |l: &[u32]| Element::gen(Gen::QIdem(l.to_vec()));
    let e = |j: u8| qx(j, j + 1);
    let f = |j: u8| qx(j + 1, j);
    let eb = |j: u8| qxb(j, j + 1);
    let fb = |j: u8| qxb(j + 1, j);
    let qp = |k: i64| Scalar::q_pow(k);
    let lam = |l: &[u32], i: u8| l[i as usize - 1] as i64;
    // Σ_λ c(λ) x 1_λ  or  Σ_λ c(λ) 1_λ x
    let sum_right = |x: &Element, c: &dyn Fn(&[u32]) -> Scalar| {
        let mut s = Element::zero();
        for l in &lams {
            s += &(x * &idem(l)).scale(&c(l));
        }
        s
    };
    let sum_left = |x: &Element, c: &dyn Fn(&[u32]) -> Scalar| {
        let mut s = Element::zero();
        for l in &lams {
            s += &(&idem(l) * x).scale(&c(l));
        }
        s
    };
    let comm = |a: &Element, b: &Element| &(a * b) - &(b * a);
    let acomm = |a: &Element, b: &Element| &(a * b) + &(b * a);
    let q = Scalar::q();
    let mut out = Vec::new();
    let mut total = -&Element::one();
    for (a, l) in lams.iter().enumerate() {
        total += &idem(l);
        for (b, m) in lams.iter().enumerate() {
            let rhs = if a == b { idem(l) } else { Element::zero() };
            out.push((format!("QQ1'/orth/{a},{b}"), &(&idem(l) * &idem(m)) - &rhs));
        }
        for i in 1..=n {
            out.push((format!("QQ1'/Kb-idem/{i},{a}"), comm(&kb(i), &idem(l))));
            if l[i as usize - 1] == 0 {
                out.push((format!("QQ1'/Kb-zero/{i},{a}"), &kb(i) * &idem(l)));
            }
        }
    }
    out.push(("QQ1'/sum".to_string(), total));
    let den = (&qp(2) - &qp(-2)).inv().unwrap();
    for i in 1..=n {
        for j in 1..=n {
            let mut x = acomm(&kb(i), &kb(j));
            if i == j {
                x -= &sum_right(&Element::one(), &|l| &(&Scalar::from_int(2) * &(&qp(2 * lam(l, i)) - &qp(-2 * lam(l, i)))) * &den);
            }
            out.push((format!("QQ1'/KbKb/{i},{j}"), x));
        }
    }
    for j in 1..n {
        idem_exchange("QQ2'/E", &e(j), j, 1, &lams, &idem, &mut out);
        idem_exchange("QQ2'/Ebar", &eb(j), j, 1, &lams, &idem, &mut out);
        idem_exchange("QQ2'/F", &f(j), j, -1, &lams, &idem, &mut out);
        idem_exchange("QQ2'/Fbar", &fb(j), j, -1, &lams, &idem, &mut out);
    }
    for i in 1..=n {
        let k = kb(i);
        let dn = |l: &[u32]| qp(-lam(l, i));
        let up = |l: &[u32]| qp(lam(l, i));
        if i < n {
            out.push((format!("QQ3'/KbE/{i}"), &(&(&k * &e(i)) - &(&e(i) * &k).scale(&q)) - &sum_right(&eb(i), &dn)));
            out.push((format!("QQ3'/KbF/{i}"), &(&(&k * &f(i)) - &(&f(i) * &k).scale(&q)) + &sum_right(&fb(i), &up)));
            out.push((format!("QQ3'/KbEb/{i}"), &(&(&k * &eb(i)) + &(&eb(i) * &k).scale(&q)) - &sum_right(&e(i), &dn)));
            out.push((format!("QQ3'/KbFb/{i}"), &(&(&k * &fb(i)) + &(&fb(i) * &k).scale(&q)) - &sum_right(&f(i), &up)));
        }
        if i > 1 {
            let j = i - 1;
            out.push((format!("QQ3'/KbE-/{i}"), &(&(&k * &e(j)).scale(&q) - &(&e(j) * &k)) + &sum_left(&eb(j), &dn)));
            out.push((format!("QQ3'/KbF-/{i}"), &(&(&k * &f(j)).scale(&q) - &(&f(j) * &k)) - &sum_left(&fb(j), &up)));
            out.push((format!("QQ3'/KbEb-/{i}"), &(&(&k * &eb(j)).scale(&q) + &(&eb(j) * &k)) - &sum_left(&e(j), &dn)));
            out.push((format!("QQ3'/KbFb-/{i}"), &(&(&k * &fb(j)).scale(&q) + &(&fb(j) * &k)) - &sum_left(&f(j), &up)));
        }
        for j in 1..n {
            if j != i && j + 1 != i {
                out.push((format!("QQ3'/KbE0/{i},{j}"), comm(&k, &e(j))));
                out.push((format!("QQ3'/KbF0/{i},{j}"), comm(&k, &f(j))));
                out.push((format!("QQ3'/KbEb0/{i},{j}"), acomm(&k, &eb(j))));
                out.push((format!("QQ3'/KbFb0/{i},{j}"), acomm(&k, &fb(j))));
            }
        }
    }
    for i in 1..n {
        for j in 1..n {
            let (mut a, mut b, mut c, mut d) = (comm(&e(i), &f(j)), acomm(&eb(i), &fb(j)), comm(&e(i), &fb(j)), comm(&eb(i), &f(j)));
            if i == j {
                a -= &sum_right(&Element::one(), &|l| signed_qint(lam(l, i) - lam(l, i + 1)));
                b -= &sum_right(&Element::one(), &|l| signed_qint(lam(l, i) + lam(l, i + 1)));
                b -= &(&kb(i) * &kb(i + 1)).scale(&q_minus_qinv());
                for l in &lams {
                    let t = &kb(i).scale(&qp(-lam(l, i + 1))) - &kb(i + 1).scale(&qp(-lam(l, i)));
                    c -= &(&t * &idem(l));
                    let t = &kb(i).scale(&qp(lam(l, i + 1))) - &kb(i + 1).scale(&qp(lam(l, i)));
                    d -= &(&t * &idem(l));
                }
            }
            out.push((format!("QQ4'/EF/{i},{j}"), a));
            out.push((format!("QQ4'/EbFb/{i},{j}"), b));
            out.push((format!("QQ4'/EFb/{i},{j}"), c));
            out.push((format!("QQ4'/EbF/{i},{j}"), d));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(i: i8, j: i8) -> Element {
        Element::gen(Gen::L { i, j })
    }

    #[test]
    fn olshanski_solves() {
        for n in 1..=3u8 {
            let d = OlshanskiData::get(n);
            assert_eq!(d.letters.len(), 2 * (n as usize) * (n as usize) + n as usize);
        }
        let sys = olshanski_rules(2);
        assert_eq!(sys.normal_form(&(&l(1, 1) * &l(-1, -1))).unwrap(), Element::one());
        // K_a L_{i,j}, |i| = a
        let lhs = sys.normal_form(&(&l(1, 1) * &l(1, 2))).unwrap();
        let rhs = sys.normal_form(&(&l(1, 2) * &l(1, 1)).scale(&Scalar::q_pow(-1))).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dj_relations_hold() {
        for n in 1..=3u8 {
            for (name, r) in dj_relations(n) {
                assert!(l_normal_form(n, &r).unwrap().is_zero(), "{name} at n = {n}");
            }
        }
    }

    #[test]
    fn root_vectors_match_closed_form() {
        for n in 2..=4u8 {
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    for odd in [false, true] {
                        let closed = l_normal_form(n, &xl_form(i, j, odd)).unwrap();
                        let (lo, hi) = (i.min(j), i.max(j));
                        for k in lo + 1..hi {
                            let rec = l_normal_form(n, &root_vector_via(i, j, odd, k)).unwrap();
                            assert_eq!(rec, closed, "({i},{j},{odd}) via {k}");
                        }
                        assert_eq!(l_normal_form(n, &root_vector(i, j, odd)).unwrap(), closed);
                    }
                }
            }
        }
    }

    #[test]
    fn ideal_relations_vanish() {
        for (n, r) in [(1u8, 1u32), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)] {
            for (name, x) in ideal_relations(n, r) {
                assert!(quantum_schur_normal_form(n, r, &x).unwrap().is_zero(), "{name} at ({n},{r})");
            }
        }
    }

    #[test]
    fn comultiplication() {
        let n = 3;
        let d = |x: &Element| tensor_normal_form(n, &comultiply(x).unwrap()).unwrap();
        let t = |a: &Element, b: &Element| tensor_normal_form(n, &tensor2(a, b)).unwrap();
        assert_eq!(d(&kk(2, 1)), t(&kk(2, 1), &kk(2, 1)));
        for j in 1..n {
            let e = qx(j, j + 1);
            let f = qx(j + 1, j);
            let rhs = &t(&Element::one(), &e) + &t(&e, &(&kk(j, -1) * &kk(j + 1, 1)));
            assert_eq!(d(&e), rhs);
            let rhs = &t(&(&kk(j, 1) * &kk(j + 1, -1)), &f) + &t(&f, &Element::one());
            assert_eq!(d(&f), rhs);
        }
        for &(i, j) in &l_letters(n) {
            let x = Element::gen(Gen::L { i, j });
            let dx = comultiply(&x).unwrap();
            assert_eq!(comultiply_slot(&dx, 1).unwrap(), comultiply_slot(&dx, 2).unwrap());
        }
        // Δ is multiplicative on a product with odd factors
        let a = kb(1);
        let b = qxb(1, 2);
        let lhs = d(&(&a * &b));
        let rhs = tensor_normal_form(n, &tensor_mul(&comultiply(&a).unwrap(), &comultiply(&b).unwrap())).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn comultiplication_respects_relations() {
        for (name, r) in dj_relations(2) {
            let d = tensor_normal_form(2, &comultiply(&r).unwrap()).unwrap();
            assert!(d.is_zero(), "{name}");
        }
    }

    #[test]
    fn quantum_basis_shape() {
        assert_eq!(quantum_schur_basis(2, 2).len(), 32);
        assert_eq!(quantum_schur_basis(1, 2).len(), 2);
        let b = quantum_schur_basis(3, 0);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].element, Element::gen(Gen::QIdem(vec![0, 0, 0])));
    }

    #[test]
    fn basis_elements_are_normal() {
        for (n, r) in [(2u8, 2u32), (2, 3)] {
            for b in quantum_schur_basis(n as usize, r) {
                assert_eq!(quantum_schur_normal_form(n, r, &b.element).unwrap(), b.element);
            }
        }
    }

    #[test]
    fn dj_relations_through_generators_at_rank_four() {
        let sys = olshanski_rules(4);
        for (name, r) in dj_relations(4) {
            let y = r.substitute(&|g| dj_generator(g).unwrap_or_else(|| Element::gen(g.clone())));
            assert!(sys.normal_form(&y).unwrap().is_zero(), "{name}");
        }
    }

    #[test]
    fn primed_generator_relations() {
        let c = |x: &Element, y: &Element| &(x * y) - &(y * x);
        for n in 2..=4u8 {
            let ep = |j: u8, odd: bool| &kk(j + 1, -1) * &if odd { qxb(j, j + 1) } else { qx(j, j + 1) };
            let fp = |j: u8, odd: bool| &(if odd { qxb(j + 1, j) } else { qx(j + 1, j) }) * &kk(j + 1, 1);
            let zero = |x: Element, what: String| assert!(l_normal_form(n, &x).unwrap().is_zero(), "{what} at n = {n}");
            for k in 1..n.saturating_sub(1) {
                zero(&c(&ep(k + 1, false), &ep(k, true)) - &c(&ep(k + 1, true), &ep(k, false)), format!("E' k = {k}"));
                zero(&c(&fp(k + 1, false), &fp(k, true)) - &c(&fp(k + 1, true), &fp(k, false)), format!("F' k = {k}"));
            }
            for a in 1..=n {
                for i in 1..n {
                    let p = pair_root(a, i, i + 1);
                    for odd in [false, true] {
                        let e = ep(i, odd);
                        let f = fp(i, odd);
                        zero(&(&kk(a, 1) * &e) - &(&e * &kk(a, 1)).scale(&Scalar::q_pow(p)), format!("K{a} E'{i}"));
                        zero(&(&kk(a, 1) * &f) - &(&f * &kk(a, 1)).scale(&Scalar::q_pow(-p)), format!("K{a} F'{i}"));
                    }
                }
            }
            for i in 1..n {
                for j in 1..n {
                    if i.abs_diff(j) > 1 {
                        zero(c(&ep(i, false), &ep(j, false)), format!("E'{i} E'{j}"));
                        zero(c(&fp(i, false), &fp(j, false)), format!("F'{i} F'{j}"));
                    }
                }
            }
        }
    }

    #[test]
    fn weight_relation() {
        for n in 2..=4u8 {
            for a in 1..=n {
                for i in 1..=n {
                    for j in 1..=n {
                        if i == j {
                            continue;
                        }
                        for x in [qx(i, j), qxb(i, j)] {
                            let lhs = &(&kk(a, 1) * &x) * &kk(a, -1);
                            let d = &lhs - &x.scale(&Scalar::q_pow(pair_root(a, i, j)));
                            assert!(l_normal_form(n, &d).unwrap().is_zero(), "K{a} X({i},{j}) at n = {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_relations_vanish_in_the_schur_quotient() {
        for (n, r) in [(1u8, 1u32), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)] {
            for (name, x) in ideal_relations(n, r) {
                assert!(quantum_schur_normal_form(n, r, &x).unwrap().is_zero(), "{name} at ({n},{r})");
            }
            for (name, x) in qq_idem_relations(n, r) {
                assert!(quantum_schur_normal_form(n, r, &x).unwrap().is_zero(), "{name} at ({n},{r})");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn letter() -> impl Strategy<Value = Gen> {
            (1u8..=3, 1u8..=3, 0u8..5, 1u32..=2, prop::bool::ANY).prop_map(|(i, j, k, s, b)| {
                let j = if i == j { i % 3 + 1 } else { j };
                match k {
                    0 => Gen::K { i, e: if b { 1 } else { -1 } },
                    1 => Gen::KBar(i),
                    2 => Gen::QX { i, j, s },
                    3 => Gen::QXBar { i, j },
                    _ => Gen::KBracket { i, c: 0, t: s },
                }
            })
        }

        fn word(max: usize) -> impl Strategy<Value = Element> {
            prop::collection::vec(letter(), 1..=max).prop_map(Element::word)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(150))]
            #[test]
            fn omega_is_an_anti_automorphism(x in word(3), y in word(2)) {
                let nf = |z: &Element| x_normal_form(3, z).unwrap();
                let a = nf(&omega(&(&x * &y)).unwrap());
                let b = nf(&(&omega(&y).unwrap() * &omega(&x).unwrap()));
                prop_assert_eq!(&a, &b);
                prop_assert_eq!(nf(&omega(&nf(&(&x * &y))).unwrap()), a);
            }

            #[test]
            fn lusztig_forms_are_integral(x in word(4)) {
                let nf = lusztig_normal_form(3, &x).unwrap();
                prop_assert!(nf.terms().all(|(_, c)| c.is_laurent()), "{}", nf);
            }
        }
    }
}
