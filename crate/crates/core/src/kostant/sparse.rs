use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sparse matrix over the rationals. Zeros are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl SparseRationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// Adds `v` to entry `(i, j)`, dropping it if the sum cancels.
    pub fn add_to(&mut self, i: usize, j: usize, v: BigRational) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((i, j)).or_insert_with(BigRational::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        assert!(i < self.rows && j < self.cols);
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, v * c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigRational)>> = BTreeMap::new();
        for (&(k, j), v) in &rhs.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add_to(i, j, a * b);
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.entries {
            out.add_to(i, j, -v.clone());
        }
        out
    }

    pub fn is_nilpotent(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let mut p = self.clone();
        for _ in 0..self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self);
        }
        p.is_zero()
    }

    /// Exact rank by fraction-free elimination on integer rows.
    pub fn rank(&self) -> usize {
        let mut rows: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            rows.entry(i).or_default().insert(j, v.clone());
        }
        let mut pivots: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
        for row in rows.into_values() {
            let mut r = integer_row(row);
            while let Some((&lead, _)) = r.iter().next() {
                match pivots.get(&lead) {
                    Some(p) => r = eliminate(&r, p, lead),
                    None => {
                        pivots.insert(lead, r);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

fn integer_row(row: BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigInt> {
    let lcm = row.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let r = row.into_iter().map(|(j, v)| (j, (v * BigRational::from_integer(lcm.clone())).to_integer())).collect();
    primitive(r)
}

fn primitive(mut r: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
    let g = r.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in r.values_mut() {
            *v /= &g;
        }
    }
    r
}

/// `a*r - b*p` where `a`, `b` are the entries of `p`, `r` in column `lead`.
fn eliminate(r: &BTreeMap<usize, BigInt>, p: &BTreeMap<usize, BigInt>, lead: usize) -> BTreeMap<usize, BigInt> {
    let a = &p[&lead];
    let b = &r[&lead];
    let g = a.gcd(b);
    let (a, b) = (a / &g, b / &g);
    let mut out: BTreeMap<usize, BigInt> = r.iter().map(|(&j, v)| (j, v * &a)).collect();
    for (&j, v) in p {
        let e = out.entry(j).or_insert_with(BigInt::zero);
        *e -= v * &b;
    }
    out.retain(|_, v| !v.is_zero());
    let mut out = primitive(out);
    if out.values().next().is_some_and(|v| v.is_negative()) {
        for v in out.values_mut() {
            *v = -v.clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_dense(d: &[Vec<i64>]) -> SparseRationalMatrix {
        let mut m = SparseRationalMatrix::zeros(d.len(), d.first().map_or(0, Vec::len));
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigRational::from_integer(v.into()));
            }
        }
        m
    }

    /// Rank by plain rational Gaussian elimination on a dense copy.
    fn dense_rank(d: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<BigRational>> =
            d.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(rank, p);
            for i in 0..a.len() {
                if i != rank && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[rank][c];
                    let pr = a[rank].clone();
                    for (x, y) in a[i].iter_mut().zip(pr) {
                        *x -= &f * y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn no_stored_zeros() {
        let mut m = SparseRationalMatrix::zeros(2, 2);
        m.add_to(0, 0, BigRational::one());
        m.add_to(0, 0, -BigRational::one());
        assert_eq!(m.nnz(), 0);
        m.set(1, 1, BigRational::zero());
        assert!(m.is_zero());
    }

    #[test]
    fn small_ranks() {
        assert_eq!(from_dense(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(from_dense(&[vec![0, 0], vec![0, 0]]).rank(), 0);
        assert_eq!(from_dense(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).rank(), 2);
        assert_eq!(from_dense(&[vec![2, 0, 1], vec![0, 3, 0], vec![1, 0, 5]]).rank(), 3);
    }

    #[test]
    fn nilpotency() {
        assert!(from_dense(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).is_nilpotent());
        assert!(!from_dense(&[vec![0, 1], vec![1, 0]]).is_nilpotent());
    }

    proptest! {
        #[test]
        fn rank_matches_dense_elimination(
            d in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..8)
        ) {
            prop_assert_eq!(from_dense(&d).rank(), dense_rank(&d));
        }
    }
}
