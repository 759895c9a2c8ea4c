use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }
}

/// A word in the generators, written `1,-2,3` (1-based, minus for inverses).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(generator: usize, inverse: bool) -> Self {
        Word(vec![Letter { generator, inverse }])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last().is_some_and(|&last| last == l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| if l.inverse { format!("-{}", l.generator + 1) } else { (l.generator + 1).to_string() })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::identity());
        }
        s.split(',')
            .map(|t| {
                let v: i64 = t.trim().parse().map_err(|_| Error::Config(format!("bad letter {t:?} in word {s:?}")))?;
                if v == 0 {
                    return Err(Error::Config("generators are numbered from 1".into()));
                }
                Ok(Letter { generator: v.unsigned_abs() as usize - 1, inverse: v < 0 })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relator: Word,
}

impl GroupPresentation {
    /// One-relator presentation `[x1, x2] ⋯ [x_{2g-1}, x_{2g}]`.
    pub fn surface(genus: usize) -> Self {
        let mut r = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            let (a, b) = (2 * i, 2 * i + 1);
            r.push(Letter { generator: a, inverse: false });
            r.push(Letter { generator: b, inverse: false });
            r.push(Letter { generator: a, inverse: true });
            r.push(Letter { generator: b, inverse: true });
        }
        Self { generators: 2 * genus, relator: Word(r) }
    }

    pub fn genus(&self) -> usize {
        self.generators / 2
    }

    /// Rank of `ℤ^{gens} / ⟨exponent sums of the relator⟩`, free part.
    pub fn abelianization_rank(&self) -> usize {
        let mut e = vec![0i64; self.generators];
        for l in &self.relator.0 {
            e[l.generator] += if l.inverse { -1 } else { 1 };
        }
        self.generators - usize::from(e.iter().any(|&v| v != 0))
    }

    /// Fox derivative `∂w/∂x_i` as a signed list of prefixes:
    /// `+ y_1⋯y_{p-1}` where `y_p = x_i`, `- y_1⋯y_p` where `y_p = x_i^{-1}`.
    pub fn fox_derivative(word: &Word, i: usize) -> Vec<(f64, Word)> {
        let mut out = Vec::new();
        for (p, l) in word.0.iter().enumerate() {
            if l.generator != i {
                continue;
            }
            if l.inverse {
                out.push((-1.0, Word(word.0[..=p].to_vec())));
            } else {
                out.push((1.0, Word(word.0[..p].to_vec())));
            }
        }
        out
    }
}

/// Evaluates words in a matrix representation given generator matrices and
/// their inverses.
pub fn evaluate(word: &Word, mats: &[DMatrix<f64>], inverses: &[DMatrix<f64>]) -> DMatrix<f64> {
    let d = mats.first().map_or(0, DMatrix::nrows);
    word.0.iter().fold(DMatrix::identity(d, d), |acc, l| {
        acc * if l.inverse { &inverses[l.generator] } else { &mats[l.generator] }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_relator_shape() {
        let p = GroupPresentation::surface(2);
        assert_eq!(p.relator.to_string(), "1,2,-1,-2,3,4,-3,-4");
        assert!(p.relator.is_reduced());
        assert_eq!(p.abelianization_rank(), 4);
    }

    #[test]
    fn parse_and_reduce() {
        let w: Word = "1,2,-2,3".parse().unwrap();
        assert_eq!(w.reduced().to_string(), "1,3");
        assert_eq!("e".parse::<Word>().unwrap(), Word::identity());
        assert!("0".parse::<Word>().is_err());
        assert_eq!(w.inverse().to_string(), "-3,2,-2,-1");
    }

    #[test]
    fn fox_derivative_of_commutator() {
        // ∂[x,y]/∂x = 1 - x y x^{-1}
        let w: Word = "1,2,-1,-2".parse().unwrap();
        let d = GroupPresentation::fox_derivative(&w, 0);
        assert_eq!(d, vec![(1.0, Word::identity()), (-1.0, "1,2,-1".parse().unwrap())]);
    }

    #[test]
    fn fox_fundamental_formula() {
        // Σ_i (∂w/∂x_i)(x_i - 1) = w - 1 in any representation.
        let g = |t: f64| DMatrix::from_row_slice(2, 2, &[t.cos() * 1.3, -t.sin(), t.sin(), t.cos() / 1.3 + 0.1 * t]);
        let mats: Vec<DMatrix<f64>> = (0..3).map(|i| g(0.4 + i as f64)).collect();
        let invs: Vec<DMatrix<f64>> = mats.iter().map(|m| m.clone().try_inverse().unwrap()).collect();
        let w: Word = "1,-3,2,2,-1,3".parse().unwrap();
        let id = DMatrix::<f64>::identity(2, 2);
        let mut lhs = DMatrix::zeros(2, 2);
        for i in 0..3 {
            for (c, prefix) in GroupPresentation::fox_derivative(&w, i) {
                lhs += evaluate(&prefix, &mats, &invs) * (&mats[i] - &id) * c;
            }
        }
        assert!((lhs - (evaluate(&w, &mats, &invs) - id)).amax() < 1e-12);
    }
}
