//! Kostant codifferential on `Λ^k g1 ⊗ E` and its homology.

mod modules;
mod sparse;

pub use modules::{monomials, realize, ModuleFamily, PModuleRealization, MAX_SYM_DEGREE};
pub use sparse::SparseRationalMatrix;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::bgg_complex;
use crate::error::{Error, Result};

/// Largest chain space the exact elimination is asked to handle.
pub const MAX_CHAIN_DIM: usize = 50_000;

/// `k`-element subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

pub fn chain_dim(e: &PModuleRealization, k: usize) -> usize {
    wedge_basis(e.n, k).len() * e.basis_dim
}

/// Matrix of `∂*: Λ^k g1 ⊗ E → Λ^{k-1} g1 ⊗ E`,
/// `Z_{i1}∧…∧Z_{ik} ⊗ v ↦ Σ_r (-1)^{r+1} Z_{i1}∧…Ẑ_{ir}…∧Z_{ik} ⊗ Z_{ir}·v`.
/// Index `(subset, v)` is flattened as `subset * dim E + v`.
pub fn codifferential(e: &PModuleRealization, k: usize) -> Result<SparseRationalMatrix> {
    codifferential_with_signs(e, k, |r| if r % 2 == 0 { 1 } else { -1 })
}

/// Same construction with the sign of the `r`-th term (0-based) supplied.
pub fn codifferential_with_signs(
    e: &PModuleRealization,
    k: usize,
    sign: impl Fn(usize) -> i64,
) -> Result<SparseRationalMatrix> {
    if k > e.n {
        return Err(Error::DegreeOutOfRange { k, n: e.n });
    }
    let d = e.basis_dim;
    let src = wedge_basis(e.n, k);
    if src.len() * d > MAX_CHAIN_DIM {
        return Err(Error::SizeGuard {
            what: format!("chain space of dimension {}", src.len() * d),
            limit: MAX_CHAIN_DIM,
        });
    }
    if k == 0 {
        return Ok(SparseRationalMatrix::zeros(0, d));
    }
    let dst = wedge_basis(e.n, k - 1);
    let mut m = SparseRationalMatrix::zeros(dst.len() * d, src.len() * d);
    for (si, subset) in src.iter().enumerate() {
        for r in 0..k {
            let mut rest = subset.clone();
            let z = rest.remove(r);
            let ti = dst.binary_search(&rest).expect("face of a lexicographic subset");
            let s = BigRational::from_integer(BigInt::from(sign(r)));
            for (w, v, c) in e.g1_action[z].entries() {
                m.add_to(ti * d + w, si * d + v, &s * c);
            }
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KostantReport {
    pub family: String,
    pub n: usize,
    pub module_dim: usize,
    pub chain_dims: Vec<usize>,
    /// `ranks[k]` is the rank of `∂*_k`, `k = 0..=n`.
    pub ranks: Vec<usize>,
    pub homology: Vec<usize>,
}

pub fn kostant_report(e: &PModuleRealization) -> Result<KostantReport> {
    let n = e.n;
    let chain_dims: Vec<usize> = (0..=n).map(|k| chain_dim(e, k)).collect();
    let ranks = (0..=n).map(|k| codifferential(e, k).map(|m| m.rank())).collect::<Result<Vec<_>>>()?;
    let homology = (0..=n).map(|k| chain_dims[k] - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0)).collect();
    Ok(KostantReport { family: e.family.to_string(), n, module_dim: e.basis_dim, chain_dims, ranks, homology })
}

/// `dim H_k = nullity(∂*_k) - rank(∂*_{k+1})`.
pub fn homology_dims(e: &PModuleRealization) -> Result<Vec<usize>> {
    Ok(kostant_report(e)?.homology)
}

/// Exact check that every composite `∂*_{k-1} ∂*_k` vanishes.
pub fn verify_square_zero(e: &PModuleRealization) -> bool {
    square_zero_with(e, |k| codifferential(e, k))
}

pub fn square_zero_with(e: &PModuleRealization, op: impl Fn(usize) -> Result<SparseRationalMatrix>) -> bool {
    (2..=e.n).all(|k| match (op(k - 1), op(k)) {
        (Ok(a), Ok(b)) => a.mul(&b).is_zero(),
        _ => false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BggComparison {
    pub family: String,
    pub n: usize,
    pub label: Vec<i64>,
    pub kostant: Vec<usize>,
    pub bgg: Vec<u64>,
    pub agree: bool,
}

pub fn compare_with_bgg(family: ModuleFamily, n: usize) -> Result<BggComparison> {
    let kostant = homology_dims(&realize(family, n)?)?;
    let label = family.bgg_label(n);
    let bgg = bgg_complex::bgg_weights(n, &label)?.dims;
    let agree = kostant.iter().zip(&bgg).all(|(&a, &b)| a as u64 == b);
    Ok(BggComparison { family: family.to_string(), n, label, kostant, bgg, agree })
}
