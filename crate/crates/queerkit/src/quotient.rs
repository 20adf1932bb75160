//! Normal forms in a Schur quotient U(n,r), shared by the classical and quantum engines.
//!
//! An element is first written as a combination of f_C 1_λ h̄_C e_C. Terms with
//! χ(C) ⋠ λ are rewritten by subtracting a word that vanishes in the quotient and
//! whose leading part is the same term, which strictly lowers the degree.

use crate::classical::{compositions, SuperMatrix};
use crate::freealg::{AlgebraError, Element, Gen};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Interface an enveloping-algebra engine provides to the quotient reduction.
pub trait TriangularEngine {
    fn n(&self) -> usize;
    /// Normal form in the enveloping algebra (words in PBW order).
    fn nf(&self, x: &Element) -> Result<Element, AlgebraError>;
    fn idem(&self, lambda: &[u32]) -> Gen;
    fn as_idem<'a>(&self, g: &'a Gen) -> Option<&'a [u32]>;
    /// Weight of a root letter (divided powers included).
    fn root_weight(&self, g: &Gen) -> Option<Vec<i64>>;
    fn is_negative(&self, g: &Gen) -> bool;
    /// 1-based index of an odd Cartan letter.
    fn odd_cartan_index(&self, g: &Gen) -> Option<usize>;
    /// Scalar by which an even Cartan letter acts on 1_λ.
    fn cartan_value(&self, g: &Gen, lambda: &[u32]) -> Option<Scalar>;
    fn degree(&self, w: &[Gen]) -> i64;
    /// Matrix C of a word built from root letters and odd Cartan letters.
    fn split_matrix(&self, w: &[Gen]) -> Option<SuperMatrix>;
    fn f_word(&self, a: &SuperMatrix) -> Vec<Gen>;
    fn e_word(&self, a: &SuperMatrix) -> Vec<Gen>;
    fn hbar_word(&self, a: &SuperMatrix) -> Vec<Gen>;
}

type Key = (i64, SuperMatrix, Vec<u32>);

fn shift(lambda: &[u32], wt: &[i64], sign: i64) -> Option<Vec<u32>> {
    let mut out = Vec::with_capacity(lambda.len());
    for (l, w) in lambda.iter().zip(wt) {
        let v = *l as i64 + sign * w;
        if v < 0 {
            return None;
        }
        out.push(v as u32);
    }
    Some(out)
}

type Gathered = (Option<Vec<u32>>, Vec<Gen>, Scalar);

/// Moves all idempotents in `w` to the front; None if the word vanishes.
fn gather_idempotent<E: TriangularEngine>(eng: &E, w: &[Gen]) -> Result<Option<Gathered>, AlgebraError> {
    let mut cur: Option<Vec<u32>> = None;
    let mut rest: Vec<Gen> = Vec::new();
    let mut c = Scalar::one();
    for g in w.iter().rev() {
        if let Some(l) = eng.as_idem(g) {
            match &cur {
                None => cur = Some(l.to_vec()),
                Some(m) if m.as_slice() == l => {}
                Some(_) => return Ok(None),
            }
            continue;
        }
        let Some(lam) = cur.clone() else {
            rest.push(g.clone());
            continue;
        };
        if let Some(wt) = eng.root_weight(g) {
            match shift(&lam, &wt, 1) {
                Some(nl) => cur = Some(nl),
                None => return Ok(None),
            }
            rest.push(g.clone());
        } else if let Some(i) = eng.odd_cartan_index(g) {
            if lam[i - 1] == 0 {
                return Ok(None);
            }
            rest.push(g.clone());
        } else if let Some(v) = eng.cartan_value(g, &lam) {
            if v.is_zero() {
                return Ok(None);
            }
            c = &c * &v;
        } else {
            return Err(AlgebraError::Invalid(format!("letter {} outside the quotient alphabet", g)));
        }
    }
    rest.reverse();
    Ok(Some((cur, rest, c)))
}

/// Writes x as Σ c·f_C 1_λ h̄_C e_C.
fn expand<E: TriangularEngine>(eng: &E, r: u32, x: &Element) -> Result<BTreeMap<Key, Scalar>, AlgebraError> {
    let all = compositions(eng.n(), r);
    let mut fronts: BTreeMap<Vec<u32>, Element> = BTreeMap::new();
    for (w, c) in x.terms() {
        let Some((mu, rest, k)) = gather_idempotent(eng, w)? else { continue };
        let coeff = c * &k;
        match mu {
            Some(m) => {
                if m.len() != eng.n() || m.iter().sum::<u32>() != r {
                    return Err(AlgebraError::Invalid(format!("idempotent {:?} is not in Λ({},{})", m, eng.n(), r)));
                }
                fronts.entry(m).or_insert_with(Element::zero).add_term(rest, coeff)
            }
            None => {
                for m in &all {
                    fronts.entry(m.clone()).or_insert_with(Element::zero).add_term(rest.clone(), coeff.clone());
                }
            }
        }
    }
    let mut out: BTreeMap<Key, Scalar> = BTreeMap::new();
    for (mu, body) in fronts {
        if body.is_zero() {
            continue;
        }
        let nfb = eng.nf(&body)?;
        for (w, c) in nfb.terms() {
            if let Some((key, k)) = place_idempotent(eng, &mu, w)? {
                let v = c * &k;
                let e = out.entry(key).or_insert_with(Scalar::zero);
                *e = &*e + &v;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// 1_μ · (PBW word) → scalar · f_C 1_λ h̄_C e_C, or None if zero.
fn place_idempotent<E: TriangularEngine>(eng: &E, mu: &[u32], w: &[Gen]) -> Result<Option<(Key, Scalar)>, AlgebraError> {
    let mut lam = mu.to_vec();
    let mut pos = 0;
    let mut letters = Vec::new();
    while pos < w.len() && eng.is_negative(&w[pos]) {
        let wt = eng.root_weight(&w[pos]).ok_or_else(|| AlgebraError::Invalid("negative letter without weight".into()))?;
        match shift(&lam, &wt, -1) {
            Some(nl) => lam = nl,
            None => return Ok(None),
        }
        letters.push(w[pos].clone());
        pos += 1;
    }
    let mut c = Scalar::one();
    while pos < w.len() && eng.root_weight(&w[pos]).is_none() {
        let g = &w[pos];
        if let Some(i) = eng.odd_cartan_index(g) {
            if lam[i - 1] == 0 {
                return Ok(None);
            }
            letters.push(g.clone());
        } else if let Some(v) = eng.cartan_value(g, &lam) {
            c = &c * &v;
        } else {
            return Err(AlgebraError::Invalid(format!("unexpected letter {} in PBW word", g)));
        }
        pos += 1;
    }
    if c.is_zero() {
        return Ok(None);
    }
    let mut nu = lam.clone();
    for g in &w[pos..] {
        if eng.is_negative(g) {
            return Err(AlgebraError::Invalid(format!("word {:?} is not in PBW order", w)));
        }
        let wt = eng.root_weight(g).ok_or_else(|| AlgebraError::Invalid(format!("unexpected letter {} in PBW word", g)))?;
        match shift(&nu, &wt, -1) {
            Some(nl) => nu = nl,
            None => return Ok(None),
        }
        letters.push(g.clone());
    }
    let cm = eng.split_matrix(&letters).ok_or_else(|| AlgebraError::Invalid("cannot read matrix of PBW word".into()))?;
    Ok(Some(((eng.degree(&letters), cm, lam), c)))
}

fn chi_le(chi: &[u32], lam: &[u32]) -> bool {
    chi.iter().zip(lam).all(|(a, b)| a <= b)
}

/// Splits C into its bottom-right block from index i and the remainder.
fn block_from(c: &SuperMatrix, i: usize) -> (SuperMatrix, SuperMatrix) {
    let n = c.n();
    let mut g = SuperMatrix::zero(n);
    let mut rest = c.clone();
    for k in i..n {
        for l in i..n {
            g.a0[k][l] = c.a0[k][l];
            g.a1[k][l] = c.a1[k][l];
            rest.a0[k][l] = 0;
            rest.a1[k][l] = 0;
        }
    }
    (g, rest)
}

/// Normal form in the Schur quotient: a combination of f_A 1_{χ(A)} h̄_A e_A.
pub fn schur_normal_form<E: TriangularEngine>(eng: &E, r: u32, x: &Element) -> Result<Element, AlgebraError> {
    let mut pending = expand(eng, r, x)?;
    let mut out = Element::zero();
    while let Some(((deg, cm, lam), coeff)) = pending.pop_last() {
        let chi = cm.chi();
        if chi_le(&chi, &lam) {
            let mut w = eng.f_word(&cm);
            w.push(eng.idem(&lam));
            w.extend(eng.hbar_word(&cm));
            w.extend(eng.e_word(&cm));
            out.add_term(w, coeff);
            continue;
        }
        let i = (0..lam.len()).rev().find(|&k| lam[k] < chi[k]).unwrap();
        let (g, rest) = block_from(&cm, i);
        // f_C = m1' f_G, e_C = e_G m1, h̄_C = h̄' h̄_G
        let f_all = eng.f_word(&cm);
        let f_g = eng.f_word(&g);
        let m1p = f_all[..f_all.len() - f_g.len()].to_vec();
        let e_all = eng.e_word(&cm);
        let e_g = eng.e_word(&g);
        let m1 = e_all[e_g.len()..].to_vec();
        let mut lp = lam.clone();
        let mut dead = false;
        for gg in f_g.iter().rev() {
            match shift(&lp, &eng.root_weight(gg).unwrap(), 1) {
                Some(v) => lp = v,
                None => {
                    dead = true;
                    break;
                }
            }
        }
        if dead {
            continue;
        }
        // m1' h̄' 1_λ' e_G h̄_G f_G m1 vanishes in the quotient
        let mut y = m1p;
        y.extend(eng.hbar_word(&rest));
        y.push(eng.idem(&lp));
        y.extend(e_g);
        y.extend(eng.hbar_word(&g));
        y.extend(f_g);
        y.extend(m1);
        let ym = expand(eng, r, &Element::word(y))?;
        let key = (deg, cm, lam);
        let lead = ym.get(&key).cloned().ok_or_else(|| AlgebraError::Invalid("quotient reduction lost its leading term".into()))?;
        let factor = (&-&coeff / &lead)?;
        for (k, v) in ym {
            if k == key {
                continue;
            }
            if k.0 >= deg {
                return Err(AlgebraError::Invalid("quotient reduction did not lower the degree".into()));
            }
            let e = pending.entry(k.clone()).or_insert_with(Scalar::zero);
            *e = &*e + &(&v * &factor);
            if e.is_zero() {
                pending.remove(&k);
            }
        }
    }
    Ok(out)
}
