//! Exact linear algebra over a field: incremental echelon forms and dense solves.

use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Coefficient field for operators and linear solves.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_int(k: i64) -> Self;
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self).ok()
    }
    fn from_int(k: i64) -> Self {
        Scalar::from_int(k)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_int(k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
}

/// Incremental row echelon form keyed by leading column.
pub struct Echelon<F: Field> {
    pivots: BTreeMap<usize, BTreeMap<usize, F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { pivots: BTreeMap::new() }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the pivots; returns the remainder.
    pub fn reduce(&self, mut row: BTreeMap<usize, F>) -> BTreeMap<usize, F> {
        let mut done: BTreeMap<usize, F> = BTreeMap::new();
        while let Some((&c, _)) = row.iter().next() {
            let v = row.remove(&c).unwrap();
            match self.pivots.get(&c) {
                Some(p) => {
                    for (j, a) in p.iter().skip(1) {
                        let e = row.entry(*j).or_insert_with(F::zero);
                        *e = e.sub(&a.mul(&v));
                        if e.is_zero() {
                            row.remove(j);
                        }
                    }
                }
                None => {
                    done.insert(c, v);
                }
            }
        }
        done
    }

    /// Inserts a row; returns true if it was independent.
    pub fn insert(&mut self, row: BTreeMap<usize, F>) -> bool {
        let mut row: BTreeMap<usize, F> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        loop {
            let Some((&c, v)) = row.iter().next() else { return false };
            let v = v.clone();
            match self.pivots.get(&c) {
                Some(p) => {
                    for (j, a) in p {
                        let e = row.entry(*j).or_insert_with(F::zero);
                        *e = e.sub(&a.mul(&v));
                        if e.is_zero() {
                            row.remove(j);
                        }
                    }
                }
                None => {
                    let inv = v.inv().expect("nonzero pivot is invertible");
                    let norm = row.into_iter().map(|(j, a)| (j, a.mul(&inv))).collect();
                    self.pivots.insert(c, norm);
                    return true;
                }
            }
        }
    }
}


impl<F: Field> Echelon<F> {
    /// Pivot rows, fully reduced against each other, keyed by leading column.
    pub fn rref(&self) -> BTreeMap<usize, BTreeMap<usize, F>> {
        let mut done: BTreeMap<usize, BTreeMap<usize, F>> = BTreeMap::new();
        for (&c, row) in self.pivots.iter().rev() {
            let mut acc: BTreeMap<usize, F> = BTreeMap::new();
            acc.insert(c, F::one());
            for (j, a) in row.iter().skip(1) {
                match done.get(j) {
                    Some(p) => {
                        for (k, b) in p.iter().skip(1) {
                            let e = acc.entry(*k).or_insert_with(F::zero);
                            *e = e.sub(&a.mul(b));
                        }
                    }
                    None => {
                        let e = acc.entry(*j).or_insert_with(F::zero);
                        *e = e.add(a);
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            done.insert(c, acc);
        }
        done
    }
}

/// Solves Σ_k x_k cols[k] = target; None if inconsistent.
pub fn solve_columns<F: Field>(cols: &[BTreeMap<usize, F>], target: &BTreeMap<usize, F>) -> Option<Vec<F>> {
    // rows are indexed by coordinates; unknowns are column indices, target is column cols.len()
    let m = cols.len();
    let mut coords: BTreeMap<usize, BTreeMap<usize, F>> = BTreeMap::new();
    for (k, c) in cols.iter().enumerate() {
        for (i, v) in c {
            coords.entry(*i).or_default().insert(k, v.clone());
        }
    }
    for (i, v) in target {
        coords.entry(*i).or_default().insert(m, v.clone());
    }
    let mut ech = Echelon::new();
    for (_, row) in coords {
        ech.insert(row);
    }
    let red = ech.rref();
    if red.contains_key(&m) {
        return None;
    }
    let mut x = vec![F::zero(); m];
    for (c, row) in red {
        x[c] = row.get(&m).cloned().unwrap_or_else(F::zero);
    }
    Some(x)
}
