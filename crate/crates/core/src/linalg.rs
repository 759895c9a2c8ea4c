//! Floating-point rank decisions with an explicit gap requirement.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankTolerance {
    /// Singular values below `relative * σ_max` count as zero.
    pub relative: f64,
    /// Required ratio between the last kept and first discarded singular value.
    pub gap: f64,
}

impl Default for RankTolerance {
    fn default() -> Self {
        Self { relative: 1e-7, gap: 1e3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankDecision {
    pub rank: usize,
    /// `σ_{rank-1} / σ_rank`, infinite when nothing was discarded or kept.
    pub gap: f64,
    /// `σ_{rank-1} / (relative · σ_max)`: how far the last kept value sits
    /// above the cutoff. Infinite at rank zero.
    pub margin: f64,
    pub singular_values: Vec<f64>,
}

/// Singular values in decreasing order (zero-padded to `min(rows, cols)`).
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn numerical_rank(m: &DMatrix<f64>, tol: RankTolerance) -> Result<RankDecision> {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(RankDecision { rank: 0, gap: f64::INFINITY, margin: f64::INFINITY, singular_values: s });
    }
    let rank = s.iter().take_while(|&&v| v > tol.relative * top).count();
    let gap = if rank < s.len() {
        if s[rank] == 0.0 {
            f64::INFINITY
        } else {
            s[rank - 1] / s[rank]
        }
    } else {
        f64::INFINITY
    };
    if gap <= tol.gap {
        return Err(Error::RankAmbiguous { gap, required: tol.gap });
    }
    let margin = if rank == 0 { f64::INFINITY } else { s[rank - 1] / (tol.relative * top) };
    Ok(RankDecision { rank, gap, margin, singular_values: s })
}

/// Orthonormal basis (columns) of the kernel, using the same rank rule.
pub fn null_space(m: &DMatrix<f64>, tol: RankTolerance) -> Result<DMatrix<f64>> {
    let cols = m.ncols();
    let padded = if m.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let rank = numerical_rank(&padded, tol)?.rank;
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let kernel: Vec<usize> = order[rank..].to_vec();
    let mut out = DMatrix::zeros(cols, kernel.len());
    for (c, &i) in kernel.iter().enumerate() {
        out.set_column(c, &v_t.row(i).transpose());
    }
    Ok(out)
}

/// Row and column scaling `D₁ M D₂` with positive diagonals that brings
/// every row and column to max-norm close to one (Ruiz iteration). The rank
/// is unchanged while the spread of singular values usually shrinks.
pub fn equilibrate(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut a = m.clone();
    for _ in 0..20 {
        for i in 0..a.nrows() {
            let r = a.row(i).amax();
            if r > 0.0 {
                a.row_mut(i).scale_mut(1.0 / r.sqrt());
            }
        }
        for j in 0..a.ncols() {
            let c = a.column(j).amax();
            if c > 0.0 {
                a.column_mut(j).scale_mut(1.0 / c.sqrt());
            }
        }
    }
    a
}

/// Least-squares solution of `a x = b` and the residual norm `|a x - b|`.
pub fn least_squares(a: &DMatrix<f64>, b: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    if a.ncols() == 0 {
        return (DMatrix::zeros(0, b.ncols()), b.norm());
    }
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.max();
    let x = svd.solve(b, top * 1e-12).expect("U and V were computed");
    let residual = (a * &x - b).norm();
    (x, residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_clear_cases() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        assert_eq!(numerical_rank(&m, RankTolerance::default()).unwrap().rank, 2);
        assert_eq!(numerical_rank(&DMatrix::zeros(2, 4), RankTolerance::default()).unwrap().rank, 0);
    }

    #[test]
    fn ambiguous_gap_is_an_error() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1e-6, 1e-8]));
        assert!(matches!(numerical_rank(&m, RankTolerance::default()), Err(Error::RankAmbiguous { .. })));
    }

    #[test]
    fn kernel_is_orthonormal_and_annihilated() {
        let m = DMatrix::from_row_slice(2, 4, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, -1.0]);
        let k = null_space(&m, RankTolerance::default()).unwrap();
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).norm() < 1e-12);
        assert!((k.transpose() * &k - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn least_squares_consistent_system() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let b = DMatrix::from_column_slice(3, 1, &[1.0, 2.0, 3.0]);
        let (x, r) = least_squares(&a, &b);
        assert!(r < 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
    }
}
