//! Symmetric powers `S^k V` in the monomial basis, and the trace-free part
//! `S^k_0 V` with respect to a diagonal bilinear form.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kostant::monomials;
use crate::linalg::{null_space, RankTolerance};

type Poly = BTreeMap<Vec<usize>, f64>;

#[derive(Debug, Clone)]
pub struct SymmetricPower {
    d: usize,
    k: usize,
    basis: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn multi_factorial(alpha: &[usize]) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}

impl SymmetricPower {
    pub fn new(d: usize, k: usize) -> Self {
        let basis = monomials(d, k);
        let index = basis.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Self { d, k, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    fn to_vector(&self, p: &Poly) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        for (alpha, c) in p {
            v[self.index[alpha]] += c;
        }
        v
    }

    /// `(Σ v_i e_i)^k` in monomial coordinates.
    pub fn power_of(&self, v: &[f64]) -> DVector<f64> {
        let kf = factorial(self.k);
        DVector::from_iterator(
            self.dim(),
            self.basis
                .iter()
                .map(|a| kf / multi_factorial(a) * a.iter().zip(v).map(|(&e, x)| x.powi(e as i32)).product::<f64>()),
        )
    }

    /// Matrix of `S^k A` (substitution `e_i ↦ A e_i`).
    pub fn group(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!((a.nrows(), a.ncols()), (self.d, self.d));
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (col, alpha) in self.basis.iter().enumerate() {
            let mut p: Poly = BTreeMap::from([(vec![0; self.d], 1.0)]);
            for (i, &e) in alpha.iter().enumerate() {
                for _ in 0..e {
                    p = mul_linear(&p, a.column(i).iter().copied());
                }
            }
            out.set_column(col, &self.to_vector(&p));
        }
        out
    }

    /// Matrix of the derivation induced by `X ∈ gl(V)`.
    pub fn derivation(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!((x.nrows(), x.ncols()), (self.d, self.d));
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for (col, alpha) in self.basis.iter().enumerate() {
            let mut p = Poly::new();
            for i in 0..self.d {
                if alpha[i] == 0 {
                    continue;
                }
                let mut beta = alpha.clone();
                beta[i] -= 1;
                for j in 0..self.d {
                    let c = x[(j, i)];
                    if c != 0.0 {
                        let mut g = beta.clone();
                        g[j] += 1;
                        *p.entry(g).or_insert(0.0) += alpha[i] as f64 * c;
                    }
                }
            }
            out.set_column(col, &self.to_vector(&p));
        }
        out
    }

    /// `Σ h_ii ∂_i²`, from `S^k` to `S^{k-2}`.
    pub fn contraction(&self, h: &[f64]) -> DMatrix<f64> {
        if self.k < 2 {
            return DMatrix::zeros(0, self.dim());
        }
        let lower = SymmetricPower::new(self.d, self.k - 2);
        let mut out = DMatrix::zeros(lower.dim(), self.dim());
        for (col, alpha) in self.basis.iter().enumerate() {
            for i in 0..self.d {
                if alpha[i] >= 2 {
                    let mut b = alpha.clone();
                    b[i] -= 2;
                    out[(lower.index[&b], col)] += h[i] * (alpha[i] * (alpha[i] - 1)) as f64;
                }
            }
        }
        out
    }

    /// Multiplication by the quadratic `Σ h_ii^{-1} e_i²`, from `S^{k-2}` to `S^k`.
    pub fn multiply_by_dual_form(&self, h: &[f64]) -> DMatrix<f64> {
        let lower = SymmetricPower::new(self.d, self.k.saturating_sub(2));
        let mut out = DMatrix::zeros(self.dim(), if self.k < 2 { 0 } else { lower.dim() });
        if self.k < 2 {
            return out;
        }
        for (col, beta) in lower.basis.iter().enumerate() {
            for i in 0..self.d {
                let mut a = beta.clone();
                a[i] += 2;
                out[(self.index[&a], col)] += 1.0 / h[i];
            }
        }
        out
    }

    /// Gram matrix of the form induced on symmetric tensors by `diag(h)`.
    pub fn form(&self, h: &[f64]) -> DMatrix<f64> {
        let kf = factorial(self.k);
        DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.basis
                .iter()
                .map(|a| a.iter().zip(h).map(|(&e, hi)| hi.powi(e as i32)).product::<f64>() * multi_factorial(a) / kf),
        ))
    }
}

fn mul_linear(p: &Poly, lin: impl Iterator<Item = f64> + Clone) -> Poly {
    let mut out = Poly::new();
    for (alpha, c) in p {
        for (j, l) in lin.clone().enumerate() {
            if l != 0.0 {
                let mut b = alpha.clone();
                b[j] += 1;
                *out.entry(b).or_insert(0.0) += c * l;
            }
        }
    }
    out
}

/// `S^k_0 V`: the kernel of the contraction, with an orthonormal coordinate
/// basis `B` so that restricted operators are `Bᵀ M B`.
#[derive(Debug, Clone)]
pub struct TraceFreePower {
    sym: SymmetricPower,
    h: Vec<f64>,
    basis: DMatrix<f64>,
    contraction: DMatrix<f64>,
    /// `C ∘ (multiplication by the dual form)`, LU-factored on first use.
    correction: DMatrix<f64>,
}

impl TraceFreePower {
    pub fn new(h: &[f64], k: usize) -> Result<Self> {
        let sym = SymmetricPower::new(h.len(), k);
        let contraction = sym.contraction(h);
        let basis = if k < 2 {
            DMatrix::identity(sym.dim(), sym.dim())
        } else {
            null_space(&contraction, RankTolerance::default())?
        };
        let correction = &contraction * sym.multiply_by_dual_form(h);
        let out = Self { sym, h: h.to_vec(), basis, contraction, correction };
        let d = h.len();
        let expected = crate::vz_branching::trace_free_dimension(d, k);
        if out.dim() != expected {
            return Err(Error::Dimension(format!("trace-free power has dimension {}, expected {expected}", out.dim())));
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn degree(&self) -> usize {
        self.sym.degree()
    }

    pub fn symmetric(&self) -> &SymmetricPower {
        &self.sym
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn restrict(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.basis.transpose() * m * &self.basis
    }

    /// Action of a group element of `O(h)`.
    pub fn group(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        self.restrict(&self.sym.group(a))
    }

    /// Coordinates of the trace-free part of `p ∈ S^k V`.
    pub fn project(&self, p: &DVector<f64>) -> DVector<f64> {
        if self.sym.degree() < 2 {
            return p.clone();
        }
        let rhs = &self.contraction * p;
        let q = self.correction.clone().lu().solve(&rhs).expect("contraction of the dual form is invertible");
        let p0 = p - self.sym.multiply_by_dual_form(&self.h) * q;
        self.basis.transpose() * p0
    }

    /// `(v ⊗ … ⊗ v)_0`.
    pub fn power_of(&self, v: &[f64]) -> DVector<f64> {
        self.project(&self.sym.power_of(v))
    }

    pub fn form(&self) -> DMatrix<f64> {
        self.restrict(&self.sym.form(&self.h))
    }

    /// Largest entry of the contraction of `B c`.
    pub fn trace_residual(&self, coords: &DVector<f64>) -> f64 {
        if self.sym.degree() < 2 {
            return 0.0;
        }
        (&self.contraction * (&self.basis * coords)).amax()
    }
}
