//! `H⁰` and `H¹` of a one-relator group through Fox calculus.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::presentation::GroupPresentation;
use super::representation::FlatRepresentation;
use crate::error::Result;
use crate::linalg::{equilibrate, least_squares, numerical_rank, RankDecision, RankTolerance};

/// One coefficient vector per generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCocycle {
    pub values: Vec<DVector<f64>>,
}

impl Serialize for GroupCocycle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[f64]> = self.values.iter().map(|v| v.as_slice()).collect();
        rows.serialize(s)
    }
}

impl GroupCocycle {
    pub fn zero(rep: &FlatRepresentation) -> Self {
        Self { values: vec![DVector::zeros(rep.coefficient_dim()); rep.generator_count()] }
    }

    /// `c(x_i) = ρ(x_i) v - v`.
    pub fn coboundary(rep: &FlatRepresentation, v: &DVector<f64>) -> Self {
        Self { values: rep.matrices.iter().map(|m| m * v - v).collect() }
    }

    pub fn stacked(&self) -> DVector<f64> {
        let d = self.values.first().map_or(0, |v| v.len());
        let mut out = DVector::zeros(d * self.values.len());
        for (i, v) in self.values.iter().enumerate() {
            out.rows_mut(i * d, d).copy_from(v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }
}

/// Ranks behind the dimension counts, for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct CohomologyReport {
    pub coefficient_dim: usize,
    pub generators: usize,
    pub h0: usize,
    pub h1: usize,
    /// `(2g - 2) d + 2 h0`.
    pub euler_prediction: i64,
    pub fox_rank: usize,
    pub coboundary_rank: usize,
    /// Smallest singular-value gap among the rank decisions (infinite when
    /// both maps have full rank).
    #[serde(serialize_with = "finite_or_string")]
    pub min_gap: f64,
    /// Smallest ratio of a kept singular value to the cutoff.
    pub min_margin: f64,
}

/// `(ρ(x_1) - I; …; ρ(x_m) - I)`, the coboundary map `v ↦ (ρ(x_i)v - v)_i`.
pub fn coboundary_matrix(rep: &FlatRepresentation) -> DMatrix<f64> {
    let d = rep.coefficient_dim();
    let m = rep.generator_count();
    let mut out = DMatrix::zeros(m * d, d);
    for (i, g) in rep.matrices.iter().enumerate() {
        out.view_mut((i * d, 0), (d, d)).copy_from(&(g - DMatrix::identity(d, d)));
    }
    out
}

/// `(v_i) ↦ Σ_i ρ(∂R/∂x_i) v_i`.
pub fn fox_matrix(rep: &FlatRepresentation) -> DMatrix<f64> {
    let d = rep.coefficient_dim();
    let m = rep.generator_count();
    let mut out = DMatrix::zeros(d, m * d);
    for i in 0..m {
        let mut block = DMatrix::zeros(d, d);
        for (c, prefix) in GroupPresentation::fox_derivative(&rep.presentation.relator, i) {
            block += rep.eval(&prefix) * c;
        }
        out.view_mut((0, i * d), (d, d)).copy_from(&block);
    }
    out
}

/// Largest entry of `c(R)`.
pub fn relator_constraint_residual(c: &GroupCocycle, rep: &FlatRepresentation) -> f64 {
    (fox_matrix(rep) * c.stacked()).amax()
}

fn finite_or_string<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("inf")
    }
}

/// Rank decisions are taken on the equilibrated matrices: entries of `ρ` on
/// `S^k_0` grow like the `k`-th power of the geometric ones.
fn rank(m: &DMatrix<f64>, tol: RankTolerance) -> Result<RankDecision> {
    numerical_rank(&equilibrate(m), tol)
}

pub fn h0_dim(rep: &FlatRepresentation, tol: RankTolerance) -> Result<usize> {
    let r = rank(&coboundary_matrix(rep), tol)?;
    Ok(rep.coefficient_dim() - r.rank)
}

pub fn h1_dim(rep: &FlatRepresentation, tol: RankTolerance) -> Result<usize> {
    Ok(cohomology_report(rep, tol)?.h1)
}

pub fn cohomology_report(rep: &FlatRepresentation, tol: RankTolerance) -> Result<CohomologyReport> {
    let d = rep.coefficient_dim();
    let m = rep.generator_count();
    let b = rank(&coboundary_matrix(rep), tol)?;
    let f = rank(&fox_matrix(rep), tol)?;
    let h0 = d - b.rank;
    let z1 = m * d - f.rank;
    Ok(CohomologyReport {
        coefficient_dim: d,
        generators: m,
        h0,
        h1: z1 - b.rank,
        euler_prediction: euler_oracle(rep.presentation.genus(), d, h0),
        fox_rank: f.rank,
        coboundary_rank: b.rank,
        min_gap: b.gap.min(f.gap),
        min_margin: b.margin.min(f.margin),
    })
}

/// `dim H¹` of a closed genus-`g` surface group from `χ = 2 - 2g` and
/// Poincaré duality `h² = h⁰`.
pub fn euler_oracle(genus: usize, d: usize, h0: usize) -> i64 {
    (2 * genus as i64 - 2) * d as i64 + 2 * h0 as i64
}

/// Least-squares solve of `c(x_i) = ρ(x_i)v - v`; returns the verdict
/// `residual < tol` and the residual norm.
pub fn is_coboundary(c: &GroupCocycle, rep: &FlatRepresentation, tol: f64) -> (bool, f64) {
    let b = coboundary_matrix(rep);
    let rhs = DMatrix::from_column_slice(b.nrows(), 1, c.stacked().as_slice());
    let (_, residual) = least_squares(&b, &rhs);
    (residual < tol, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_cohomology::octagon::octagon_group;
    use crate::group_cohomology::representation::{coefficient_action, Coefficients};

    #[test]
    fn defining_rep_has_no_invariants() {
        let g = octagon_group();
        let r = cohomology_report(&g, RankTolerance::default()).unwrap();
        assert_eq!((r.h0, r.h1), (0, 6));
    }

    #[test]
    fn trivial_coefficients_give_the_surface() {
        let g = coefficient_action(&octagon_group(), Coefficients::Trivial).unwrap();
        let r = cohomology_report(&g, RankTolerance::default()).unwrap();
        assert_eq!((r.h0, r.h1), (1, 4));
        assert_eq!(r.euler_prediction, 4);
    }

    #[test]
    fn coboundaries_and_zero() {
        let g = octagon_group();
        let v = DVector::from_column_slice(&[0.3, -1.2, 0.7]);
        let c = GroupCocycle::coboundary(&g, &v);
        assert!(relator_constraint_residual(&c, &g) < 1e-9);
        let (yes, res) = is_coboundary(&c, &g, 1e-6);
        assert!(yes && res < 1e-9);
        assert_eq!(is_coboundary(&GroupCocycle::zero(&g), &g, 1e-6), (true, 0.0));
    }
}
