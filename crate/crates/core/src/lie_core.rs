//! Root systems of types A, B and D with exact weight arithmetic.
//!
//! Weights are carried as exact rationals in either the fundamental-weight
//! basis or the epsilon (Cartesian) basis. For `A_n` the epsilon coordinates
//! are trace-zero `(n+1)`-tuples; for `B_m` and `D_m` they are `m`-tuples.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::D => 'D',
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::MalformedWeight(format!("unknown root system family {other:?}"))),
        }
    }
}

/// A root system of classical type, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootSystem {
    family: Family,
    rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    #[serde(rename = "fund")]
    Fundamental,
    #[serde(rename = "eps")]
    Epsilon,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A | Family::B => rank >= 1,
            Family::D => rank >= 2,
        };
        if !ok {
            return Err(Error::UnsupportedRootSystem { family: family.letter(), rank });
        }
        Ok(Self { family, rank })
    }

    /// Complexified `so(n,1)`: `B_{n/2}` for even `n`, `D_{(n+1)/2}` for odd `n`.
    pub fn orthogonal_for_dimension(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedRootSystem { family: 'B', rank: n / 2 });
        }
        if n.is_multiple_of(2) {
            Self::new(Family::B, n / 2)
        } else {
            Self::new(Family::D, n.div_ceil(2))
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of epsilon coordinates.
    pub fn eps_len(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B | Family::D => self.rank,
        }
    }

    fn unit(&self, i: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.eps_len()];
        v[i] = BigRational::one();
        v
    }

    fn combo(&self, terms: &[(usize, i64)]) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.eps_len()];
        for &(i, c) in terms {
            v[i] += q(c);
        }
        v
    }

    /// Simple roots in epsilon coordinates.
    pub fn simple_roots(&self) -> Vec<Vec<BigRational>> {
        let m = self.rank;
        (0..m)
            .map(|i| match self.family {
                Family::A => self.combo(&[(i, 1), (i + 1, -1)]),
                Family::B if i + 1 == m => self.unit(i),
                Family::D if i + 1 == m => self.combo(&[(m - 2, 1), (m - 1, 1)]),
                _ => self.combo(&[(i, 1), (i + 1, -1)]),
            })
            .collect()
    }

    /// Fundamental weights in epsilon coordinates.
    pub fn fundamental_weights(&self) -> Vec<Vec<BigRational>> {
        let m = self.rank;
        let len = self.eps_len();
        (0..m)
            .map(|i| {
                let mut v = vec![BigRational::zero(); len];
                match self.family {
                    Family::A => {
                        let shift = frac((i + 1) as i64, len as i64);
                        for (j, c) in v.iter_mut().enumerate() {
                            *c = if j <= i { BigRational::one() } else { BigRational::zero() } - &shift;
                        }
                    }
                    Family::B => {
                        let c = if i + 1 == m { frac(1, 2) } else { BigRational::one() };
                        for x in v.iter_mut().take(i + 1) {
                            *x = c.clone();
                        }
                    }
                    Family::D => {
                        if i + 2 < m {
                            for x in v.iter_mut().take(i + 1) {
                                *x = BigRational::one();
                            }
                        } else {
                            for x in v.iter_mut().take(m - 1) {
                                *x = frac(1, 2);
                            }
                            v[m - 1] = if i + 2 == m { frac(-1, 2) } else { frac(1, 2) };
                        }
                    }
                }
                v
            })
            .collect()
    }

    /// Cartan matrix `A_ij = <alpha_i, alpha_j^vee>`; row `i` is `alpha_i` in the
    /// fundamental basis.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let simple = self.simple_roots();
        simple
            .iter()
            .map(|ai| {
                simple
                    .iter()
                    .map(|aj| {
                        let v = q(2) * dot(ai, aj) / dot(aj, aj);
                        v.to_integer().to_i64().expect("Cartan entries are small integers")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn positive_roots(&self) -> Vec<Weight> {
        let len = self.eps_len();
        let mut roots = Vec::new();
        for i in 0..len {
            for j in (i + 1)..len {
                roots.push(self.combo(&[(i, 1), (j, -1)]));
                if self.family != Family::A {
                    roots.push(self.combo(&[(i, 1), (j, 1)]));
                }
            }
            if self.family == Family::B {
                roots.push(self.unit(i));
            }
        }
        roots.into_iter().map(|coeffs| Weight { system: *self, basis: Basis::Epsilon, coeffs }).collect()
    }

    /// Half-sum of positive roots: all ones in the fundamental basis.
    pub fn rho(&self) -> Weight {
        Weight { system: *self, basis: Basis::Fundamental, coeffs: vec![BigRational::one(); self.rank] }
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Returns the positive roots (epsilon basis) of the given system.
pub fn positive_roots(family: Family, rank: usize) -> Result<Vec<Weight>> {
    Ok(RootSystem::new(family, rank)?.positive_roots())
}

/// A weight with exact rational coefficients in a declared basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    system: RootSystem,
    basis: Basis,
    coeffs: Vec<BigRational>,
}

impl Weight {
    pub fn new(system: RootSystem, basis: Basis, coeffs: Vec<BigRational>) -> Result<Self> {
        let expected = match basis {
            Basis::Fundamental => system.rank(),
            Basis::Epsilon => system.eps_len(),
        };
        if coeffs.len() != expected {
            return Err(Error::MalformedWeight(format!(
                "{system} in {basis:?} basis needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        if basis == Basis::Epsilon && system.family() == Family::A {
            let trace = coeffs.iter().fold(BigRational::zero(), |a, c| a + c);
            if !trace.is_zero() {
                return Err(Error::MalformedWeight(format!(
                    "A-type epsilon coordinates must sum to zero (sum is {trace})"
                )));
            }
        }
        Ok(Self { system, basis, coeffs })
    }

    pub fn from_ints(system: RootSystem, basis: Basis, coeffs: &[i64]) -> Result<Self> {
        Self::new(system, basis, coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero(system: RootSystem, basis: Basis) -> Self {
        let len = match basis {
            Basis::Fundamental => system.rank(),
            Basis::Epsilon => system.eps_len(),
        };
        Self { system, basis, coeffs: vec![BigRational::zero(); len] }
    }

    pub fn system(&self) -> RootSystem {
        self.system
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn to_basis(&self, target: Basis) -> Weight {
        convert_basis(self, target)
    }

    fn eps(&self) -> Vec<BigRational> {
        self.to_basis(Basis::Epsilon).coeffs
    }

    /// `(self, other)` computed in epsilon coordinates.
    pub fn inner(&self, other: &Weight) -> BigRational {
        dot(&self.eps(), &other.eps())
    }

    pub fn add(&self, other: &Weight) -> Result<Weight> {
        if self.system != other.system {
            return Err(Error::MalformedWeight("adding weights of different systems".into()));
        }
        let b = other.to_basis(self.basis);
        let coeffs = self.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(Weight { system: self.system, basis: self.basis, coeffs })
    }

    /// Dominant means every fundamental coefficient is nonnegative.
    pub fn is_dominant(&self) -> bool {
        self.to_basis(Basis::Fundamental).coeffs.iter().all(|c| !c.is_negative())
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None }).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        let tag = match self.basis {
            Basis::Fundamental => "fund",
            Basis::Epsilon => "eps",
        };
        write!(f, "{}[{tag}]({})", self.system, parts.join(","))
    }
}

/// Exact change of basis.
pub fn convert_basis(weight: &Weight, target: Basis) -> Weight {
    if weight.basis == target {
        return weight.clone();
    }
    let system = weight.system;
    let coeffs = match target {
        Basis::Epsilon => {
            let mut out = vec![BigRational::zero(); system.eps_len()];
            for (a, w) in weight.coeffs.iter().zip(system.fundamental_weights()) {
                for (o, wj) in out.iter_mut().zip(&w) {
                    *o += a * wj;
                }
            }
            out
        }
        Basis::Fundamental => {
            system.simple_roots().iter().map(|alpha| q(2) * dot(&weight.coeffs, alpha) / dot(alpha, alpha)).collect()
        }
    };
    Weight { system, basis: target, coeffs }
}

/// Weyl dimension formula, evaluated exactly.
pub fn weyl_dim(weight: &Weight) -> Result<BigUint> {
    let fund = weight.to_basis(Basis::Fundamental);
    for (index, c) in fund.coeffs.iter().enumerate() {
        if c.is_negative() {
            return Err(Error::NotDominant { index, value: c.to_string() });
        }
        if !c.is_integer() {
            return Err(Error::MalformedWeight(format!("coefficient {index} = {c} is not integral")));
        }
    }
    let system = weight.system;
    let shifted = fund.add(&system.rho())?.eps();
    let rho = system.rho().eps();
    let mut num = BigRational::one();
    for alpha in system.positive_roots() {
        num *= dot(&shifted, &alpha.coeffs) / dot(&rho, &alpha.coeffs);
    }
    debug_assert!(num.is_integer());
    num.to_integer().to_biguint().ok_or_else(|| Error::MalformedWeight("Weyl product is not a positive integer".into()))
}

/// Convenience: Weyl dimension of the `sl(r+1)` irreducible with the given
/// fundamental labels. An empty label is the trivial representation of `sl(1)`.
pub fn weyl_dim_a(labels: &[i64]) -> Result<BigUint> {
    if labels.is_empty() {
        return Ok(BigUint::one());
    }
    let system = RootSystem::new(Family::A, labels.len())?;
    weyl_dim(&Weight::from_ints(system, Basis::Fundamental, labels)?)
}

/// Number of nonzero epsilon coordinates of a B/D weight.
pub fn i_lambda(weight: &Weight) -> Result<usize> {
    if weight.basis != Basis::Epsilon {
        return Err(Error::WrongBasis { expected: "epsilon" });
    }
    if weight.system.family() == Family::A {
        return Err(Error::UnsupportedRootSystem { family: 'A', rank: weight.system.rank() });
    }
    Ok(weight.coeffs.iter().filter(|c| !c.is_zero()).count())
}

/// JSON form: `{"system":"B","rank":2,"basis":"eps","coeffs":["1","1/2"]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightJson {
    pub system: Family,
    pub rank: usize,
    pub basis: Basis,
    pub coeffs: Vec<String>,
}

impl From<&Weight> for WeightJson {
    fn from(w: &Weight) -> Self {
        WeightJson {
            system: w.system.family(),
            rank: w.system.rank(),
            basis: w.basis,
            coeffs: w
                .coeffs
                .iter()
                .map(|c| if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) })
                .collect(),
        }
    }
}

impl TryFrom<WeightJson> for Weight {
    type Error = Error;

    fn try_from(j: WeightJson) -> Result<Weight> {
        let system = RootSystem::new(j.system, j.rank)?;
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| {
                BigRational::from_str(s.trim())
                    .map_err(|_| Error::MalformedWeight(format!("cannot parse rational {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Weight::new(system, j.basis, coeffs)
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = WeightJson::deserialize(d)?;
        Weight::try_from(j).map_err(serde::de::Error::custom)
    }
}
