//! Vogan–Zuckerman vanishing bands and `SL(n+1) → SO(n,1)` branching for the
//! tensor families used elsewhere in the crate.

use std::collections::BTreeSet;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kostant::ModuleFamily;
use crate::lie_core::{i_lambda, weyl_dim, Basis, Family, RootSystem, Weight};

pub const MAX_BRANCH_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoIrrep {
    pub n: usize,
    pub weight: Weight,
    pub dim: u64,
}

impl SoIrrep {
    /// Irreducible of `so(n,1)` with the given epsilon highest weight.
    pub fn new(n: usize, eps: &[i64]) -> Result<Self> {
        let system = RootSystem::orthogonal_for_dimension(n)?;
        let weight = Weight::from_ints(system, Basis::Epsilon, eps)?;
        let dim = weyl_dim(&weight)?
            .to_u64()
            .ok_or_else(|| Error::SizeGuard { what: "representation dimension".into(), limit: u64::MAX as usize })?;
        Ok(Self { n, weight, dim })
    }

    /// `S^k_0 ℝ^{n+1}`, highest weight `(k, 0, …, 0)`.
    pub fn trace_free_power(n: usize, k: usize) -> Result<Self> {
        let m = RootSystem::orthogonal_for_dimension(n)?.rank();
        let mut eps = vec![0; m];
        eps[0] = k as i64;
        Self::new(n, &eps)
    }

    pub fn is_trivial(&self) -> bool {
        self.weight.coeffs().iter().all(Zero::is_zero)
    }
}

/// Degrees `k` with `H^k(Γ, F) = 0` guaranteed.
pub fn vanishing_profile(f: &SoIrrep) -> BTreeSet<usize> {
    let n = f.n;
    let system = f.weight.system();
    let i = i_lambda(&f.weight).expect("SoIrrep weights are epsilon weights of B or D");
    let all_nonzero = i == system.rank();
    if system.family() == Family::D && n == 2 * system.rank() - 1 && all_nonzero {
        return (0..=n).collect();
    }
    (0..=n).filter(|&k| k < i || k > n - i.min(n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub name: String,
    pub irrep: SoIrrep,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchingResult {
    pub family: String,
    pub n: usize,
    pub source_dim: u64,
    pub summands: Vec<Summand>,
}

impl BranchingResult {
    pub fn total_dim(&self) -> u64 {
        self.summands.iter().map(|s| s.multiplicity * s.irrep.dim).sum()
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim S^k V - dim S^{k-2} V` for `dim V = d`.
pub fn trace_free_dimension(d: usize, k: usize) -> usize {
    let sym = |k: usize| binom((d + k - 1) as u64, k as u64) as usize;
    sym(k) - if k >= 2 { sym(k - 2) } else { 0 }
}

fn power_name(j: usize) -> String {
    match j {
        0 => "ℝ".into(),
        1 => "ℝ^{n+1}".into(),
        _ => format!("S^{j}_0ℝ^{{n+1}}"),
    }
}

/// Second exterior power: `(1,1,0,…)`, except `ℝ³` for `n = 2` and the
/// self-dual/anti-self-dual pair for `n = 3`.
fn exterior_square(n: usize) -> Result<Vec<Summand>> {
    let m = RootSystem::orthogonal_for_dimension(n)?.rank();
    let one = |eps: Vec<i64>, name: &str| -> Result<Summand> {
        Ok(Summand { name: name.into(), irrep: SoIrrep::new(n, &eps)?, multiplicity: 1 })
    };
    match n {
        2 => Ok(vec![one(vec![1], "Λ²ℝ^{n+1}")?]),
        3 => Ok(vec![one(vec![1, 1], "Λ²_+ℝ^{n+1}")?, one(vec![1, -1], "Λ²_-ℝ^{n+1}")?]),
        _ => {
            let mut eps = vec![0; m];
            eps[0] = 1;
            eps[1] = 1;
            Ok(vec![one(eps, "Λ²ℝ^{n+1}")?])
        }
    }
}

/// Branching of the named `SL(n+1)` modules to `SO(n,1)`.
pub fn branch(family: ModuleFamily, n: usize) -> Result<BranchingResult> {
    let powers = |k: usize| -> Result<Vec<Summand>> {
        if k > MAX_BRANCH_DEGREE {
            return Err(Error::SizeGuard { what: format!("symmetric degree {k}"), limit: MAX_BRANCH_DEGREE });
        }
        (0..=k / 2)
            .map(|j| {
                let deg = k - 2 * j;
                Ok(Summand { name: power_name(deg), irrep: SoIrrep::trace_free_power(n, deg)?, multiplicity: 1 })
            })
            .collect()
    };
    let n64 = n as u64;
    let (source_dim, summands) = match family {
        ModuleFamily::Trivial => (1, powers(0)?),
        ModuleFamily::Defining | ModuleFamily::Dual => (n64 + 1, powers(1)?),
        ModuleFamily::SymK(k) | ModuleFamily::SymKDual(k) => (binom(n64 + k as u64, k as u64), powers(k)?),
        ModuleFamily::Adjoint => {
            let mut s = exterior_square(n)?;
            s.push(Summand { name: power_name(2), irrep: SoIrrep::trace_free_power(n, 2)?, multiplicity: 1 });
            ((n64 + 1) * (n64 + 1) - 1, s)
        }
    };
    let out = BranchingResult { family: family.to_string(), n, source_dim, summands };
    debug_assert_eq!(out.total_dim(), source_dim);
    Ok(out)
}
