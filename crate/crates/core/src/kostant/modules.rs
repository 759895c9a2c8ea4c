//! Concrete `sl(n+1)`-modules restricted to the abelian nilradical `g1`.
//!
//! The distinguished line is `e_0`; `g1` is spanned by `Z_j = E_{0j}`,
//! `j = 1..n`, so `Z_j e_j = e_0` on the defining module.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::sparse::SparseRationalMatrix;
use crate::error::{Error, Result};

pub const MAX_SYM_DEGREE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ModuleFamily {
    Trivial,
    Defining,
    Dual,
    SymKDual(usize),
    SymK(usize),
    Adjoint,
}

impl ModuleFamily {
    /// Highest weight of the module in the fundamental basis of `sl(n+1)`,
    /// in the labelling used by the BGG tables.
    pub fn bgg_label(&self, n: usize) -> Vec<i64> {
        let mut a = vec![0; n];
        match *self {
            ModuleFamily::Trivial => {}
            ModuleFamily::Dual => a[0] = 1,
            ModuleFamily::SymKDual(k) => a[0] = k as i64,
            ModuleFamily::Defining => a[n - 1] = 1,
            ModuleFamily::SymK(k) => a[n - 1] = k as i64,
            ModuleFamily::Adjoint => {
                a[0] += 1;
                a[n - 1] += 1;
            }
        }
        a
    }
}

impl fmt::Display for ModuleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleFamily::Trivial => write!(f, "trivial"),
            ModuleFamily::Defining => write!(f, "defining"),
            ModuleFamily::Dual => write!(f, "dual"),
            ModuleFamily::SymKDual(k) => write!(f, "symk-dual:{k}"),
            ModuleFamily::SymK(k) => write!(f, "symk:{k}"),
            ModuleFamily::Adjoint => write!(f, "adjoint"),
        }
    }
}

impl FromStr for ModuleFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let degree = |t: &str| t.parse::<usize>().map_err(|_| Error::UnsupportedFamily(format!("bad degree in {s:?}")));
        Ok(match s.as_str() {
            "trivial" => ModuleFamily::Trivial,
            "defining" => ModuleFamily::Defining,
            "dual" => ModuleFamily::Dual,
            "adjoint" => ModuleFamily::Adjoint,
            _ => {
                if let Some(t) = s.strip_prefix("symk-dual:") {
                    ModuleFamily::SymKDual(degree(t)?)
                } else if let Some(t) = s.strip_prefix("symk:") {
                    ModuleFamily::SymK(degree(t)?)
                } else {
                    return Err(Error::UnsupportedFamily(s));
                }
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct PModuleRealization {
    pub family: ModuleFamily,
    pub n: usize,
    pub basis_dim: usize,
    pub basis_labels: Vec<String>,
    /// `g1_action[j]` is the matrix of `Z_{j+1}`, columns indexed by input basis vectors.
    pub g1_action: Vec<SparseRationalMatrix>,
}

impl PModuleRealization {
    /// Pairwise commutation and nilpotency of the `g1` action.
    pub fn action_invariants_hold(&self) -> bool {
        let commute = self
            .g1_action
            .iter()
            .enumerate()
            .all(|(i, a)| self.g1_action[i + 1..].iter().all(|b| a.mul(b).sub(&b.mul(a)).is_zero()));
        commute && self.g1_action.iter().all(SparseRationalMatrix::is_nilpotent)
    }

    /// Smallest `p` with every product of `p` action matrices zero.
    pub fn nilpotency_order(&self) -> usize {
        let mut words: Vec<SparseRationalMatrix> = vec![identity(self.basis_dim)];
        for p in 0..=self.basis_dim {
            if words.iter().all(SparseRationalMatrix::is_zero) {
                return p;
            }
            words = words
                .iter()
                .flat_map(|w| self.g1_action.iter().map(move |z| z.mul(w)))
                .filter(|m| !m.is_zero())
                .collect();
        }
        self.basis_dim + 1
    }
}

fn identity(d: usize) -> SparseRationalMatrix {
    let mut m = SparseRationalMatrix::zeros(d, d);
    for i in 0..d {
        m.set(i, i, one());
    }
    m
}

fn one() -> BigRational {
    int(1)
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exponent vectors of degree `k` in `vars` variables, lexicographically descending.
pub fn monomials(vars: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(vars: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == vars {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(vars, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        rec(vars, k, &mut Vec::new(), &mut out);
    }
    out
}

fn monomial_label(prefix: &str, alpha: &[usize]) -> String {
    let parts: Vec<String> = alpha
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("{prefix}{i}") } else { format!("{prefix}{i}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

pub fn realize(family: ModuleFamily, n: usize) -> Result<PModuleRealization> {
    if n < 2 {
        return Err(Error::UnsupportedRootSystem { family: 'A', rank: n });
    }
    if let ModuleFamily::SymK(k) | ModuleFamily::SymKDual(k) = family {
        if k > MAX_SYM_DEGREE {
            return Err(Error::SizeGuard { what: format!("symmetric degree {k}"), limit: MAX_SYM_DEGREE });
        }
    }
    let (labels, g1_action) = match family {
        ModuleFamily::Trivial => (vec!["1".into()], (0..n).map(|_| SparseRationalMatrix::zeros(1, 1)).collect()),
        ModuleFamily::Defining => symmetric(n, 1, false),
        ModuleFamily::Dual => symmetric(n, 1, true),
        ModuleFamily::SymK(k) => symmetric(n, k, false),
        ModuleFamily::SymKDual(k) => symmetric(n, k, true),
        ModuleFamily::Adjoint => adjoint(n),
    };
    Ok(PModuleRealization { family, n, basis_dim: labels.len(), basis_labels: labels, g1_action })
}

/// `S^k V` (or `S^k V*`) with `Z_j` acting as the derivation `e_0 ∂/∂e_j`
/// (respectively `-e^j ∂/∂e^0`).
fn symmetric(n: usize, k: usize, dual: bool) -> (Vec<String>, Vec<SparseRationalMatrix>) {
    let basis = monomials(n + 1, k);
    let index = |alpha: &[usize]| basis.iter().position(|b| b == alpha).expect("monomial in basis");
    let d = basis.len();
    let mut mats = Vec::with_capacity(n);
    for j in 1..=n {
        let mut m = SparseRationalMatrix::zeros(d, d);
        for (col, alpha) in basis.iter().enumerate() {
            let (from, to, sign) = if dual { (0, j, -1) } else { (j, 0, 1) };
            if alpha[from] == 0 {
                continue;
            }
            let mut beta = alpha.clone();
            beta[from] -= 1;
            beta[to] += 1;
            m.add_to(index(&beta), col, int(sign * alpha[from] as i64));
        }
        mats.push(m);
    }
    let prefix = if dual { "f" } else { "e" };
    (basis.iter().map(|a| monomial_label(prefix, a)).collect(), mats)
}

/// `sl(n+1)` under `ad`, basis `E_ij (i != j)` then `H_i = E_ii - E_{i+1,i+1}`.
fn adjoint(n: usize) -> (Vec<String>, Vec<SparseRationalMatrix>) {
    let size = n + 1;
    let mut off = Vec::new();
    for i in 0..size {
        for j in 0..size {
            if i != j {
                off.push((i, j));
            }
        }
    }
    let d = off.len() + n;
    let basis_matrix = |b: usize| -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; size]; size];
        if b < off.len() {
            let (i, j) = off[b];
            m[i][j] = 1;
        } else {
            let h = b - off.len();
            m[h][h] = 1;
            m[h + 1][h + 1] = -1;
        }
        m
    };
    let coords = |m: &[Vec<i64>]| -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> =
            off.iter().enumerate().filter(|(_, &(i, j))| m[i][j] != 0).map(|(b, &(i, j))| (b, m[i][j])).collect();
        let mut c = 0;
        for h in 0..n {
            c += m[h][h];
            if c != 0 {
                out.push((off.len() + h, c));
            }
        }
        debug_assert_eq!(c + m[n][n], 0, "bracket must be trace free");
        out
    };
    let matmul = |a: &[Vec<i64>], b: &[Vec<i64>]| -> Vec<Vec<i64>> {
        (0..size).map(|i| (0..size).map(|j| (0..size).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    let mut mats = Vec::with_capacity(n);
    for j in 1..=n {
        let mut z = vec![vec![0i64; size]; size];
        z[0][j] = 1;
        let mut m = SparseRationalMatrix::zeros(d, d);
        for col in 0..d {
            let x = basis_matrix(col);
            let zx = matmul(&z, &x);
            let xz = matmul(&x, &z);
            let br: Vec<Vec<i64>> =
                zx.iter().zip(&xz).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a - b).collect()).collect();
            for (row, v) in coords(&br) {
                m.add_to(row, col, int(v));
            }
        }
        mats.push(m);
    }
    let mut labels: Vec<String> = off.iter().map(|(i, j)| format!("E{i}{j}")).collect();
    labels.extend((0..n).map(|h| format!("H{h}")));
    (labels, mats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_is_inert() {
        let e = realize(ModuleFamily::Trivial, 3).unwrap();
        assert_eq!(e.basis_dim, 1);
        assert!(e.g1_action.iter().all(SparseRationalMatrix::is_zero));
    }

    #[test]
    fn defining_raises_the_line() {
        let e = realize(ModuleFamily::Defining, 3).unwrap();
        assert_eq!(e.basis_dim, 4);
        for (j, z) in e.g1_action.iter().enumerate() {
            assert_eq!(z.nnz(), 1);
            // basis is e0, e1, ... in this ordering
            assert_eq!(z.get(0, j + 1), one());
        }
    }

    #[test]
    fn adjoint_surface() {
        let e = realize(ModuleFamily::Adjoint, 2).unwrap();
        assert_eq!(e.basis_dim, 8);
        assert!(e.nilpotency_order() <= 3);
        assert!(e.action_invariants_hold());
    }

    #[test]
    fn dimensions_and_invariants() {
        for n in 2..=4 {
            for (f, d) in [
                (ModuleFamily::Dual, n + 1),
                (ModuleFamily::SymK(2), (n + 1) * (n + 2) / 2),
                (ModuleFamily::SymKDual(3), (n + 1) * (n + 2) * (n + 3) / 6),
                (ModuleFamily::Adjoint, (n + 1) * (n + 1) - 1),
            ] {
                let e = realize(f, n).unwrap();
                assert_eq!(e.basis_dim, d, "{f} n={n}");
                assert!(e.action_invariants_hold(), "{f} n={n}");
            }
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(realize(ModuleFamily::SymK(5), 2), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn parse_round_trip() {
        for f in [
            ModuleFamily::Trivial,
            ModuleFamily::Defining,
            ModuleFamily::Dual,
            ModuleFamily::SymKDual(3),
            ModuleFamily::SymK(2),
            ModuleFamily::Adjoint,
        ] {
            assert_eq!(f.to_string().parse::<ModuleFamily>().unwrap(), f);
        }
        assert!("symk:x".parse::<ModuleFamily>().is_err());
        assert!("spin".parse::<ModuleFamily>().is_err());
    }
}
