//! The first two BGG operators for `S^k 𝒯*`, by finite differences.
//!
//! `D₀` sends a density `s` to a symmetric `(k+1)`-tensor. Along a
//! unit-speed geodesic the scalar slot of a parallel section of `S^k 𝒯*` is a
//! combination of `e^{(k-2j)t}`, `j = 0..=k`, so the operator is
//! `∏_j (∇_T - (k - 2j))` applied to `s`, made homogeneous in `T` with powers
//! of `g(T, T)`. For `k ≤ 2` this is `∇^{k+1} s - c_k g ⊙ ∇^{k-1} s` with
//! `c_1 = 1`, `c_2 = 4`; from `k = 3` on a lower-order term survives and no
//! single constant works (see [`calibrate_single_constant`]).

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::klein::{christoffel, lift, lift_differential, metric_at, project, KleinPoint};
use super::transport::{directional_derivative, transport_matrix, CurveSpec, TractorRep};
use crate::error::{Error, Result};
use crate::symmetric::SymmetricPower;

pub type ScalarField<'a> = dyn Fn(&DVector<f64>) -> f64 + 'a;
pub type TensorField<'a> = dyn Fn(&DVector<f64>) -> Result<DMatrix<f64>> + 'a;

/// `c_k` for the two-term form, `(numerator, denominator)`, `k = 1, 2`.
pub const SINGLE_CONSTANT: [(i64, i64); 2] = [(1, 1), (4, 1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum D0Family {
    /// `𝒯*`, giving `Hess s - g s`.
    Dual,
    /// `S^k 𝒯*`.
    SymKDual(usize),
}

impl D0Family {
    pub fn degree(&self) -> usize {
        match *self {
            D0Family::Dual => 1,
            D0Family::SymKDual(k) => k,
        }
    }
}

fn point(x: DVector<f64>, delta: f64) -> Result<KleinPoint> {
    KleinPoint::new(x).map_err(|_| Error::StencilUnderflow(format!("stencil of width {delta} leaves the chart")))
}

/// Chart gradient and Hessian of `s` by central differences.
fn partials(s: &ScalarField, p: &KleinPoint, delta: f64) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = p.dim();
    let x = p.coords();
    let at = |shift: &[(usize, f64)]| -> Result<f64> {
        let mut y = x.clone();
        for &(i, h) in shift {
            y[i] += h;
        }
        Ok(s(point(y, delta)?.coords()))
    };
    let centre = s(x);
    let mut grad = DVector::zeros(n);
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        let (plus, minus) = (at(&[(i, delta)])?, at(&[(i, -delta)])?);
        grad[i] = (plus - minus) / (2.0 * delta);
        hess[(i, i)] = (plus - 2.0 * centre + minus) / (delta * delta);
        for j in 0..i {
            let v =
                (at(&[(i, delta), (j, delta)])? - at(&[(i, delta), (j, -delta)])? - at(&[(i, -delta), (j, delta)])?
                    + at(&[(i, -delta), (j, -delta)])?)
                    / (4.0 * delta * delta);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Ok((grad, hess))
}

/// `∇_i ∇_j s = ∂_i ∂_j s - Γ^k_ij ∂_k s`.
pub fn covariant_hessian(s: &ScalarField, p: &KleinPoint, delta: f64) -> Result<DMatrix<f64>> {
    let (grad, hess) = partials(s, p, delta)?;
    let gamma = christoffel(p);
    let mut out = hess;
    for (k, g) in gamma.iter().enumerate() {
        out -= g * grad[k];
    }
    Ok(out)
}

/// `(D₀ s)(X, Y) = (∇_X ds)(Y) - g(X, Y) s`.
pub fn d0_dual(s: &ScalarField, p: &KleinPoint, delta: f64) -> Result<DMatrix<f64>> {
    Ok(covariant_hessian(s, p, delta)? - metric_at(p) * s(p.coords()))
}

/// Coefficients of `∏_{j=0..=k} (D - (k - 2j))`, lowest power first.
pub fn operator_coefficients(k: usize) -> Vec<i64> {
    let mut c = vec![1i64];
    for j in 0..=k {
        let root = k as i64 - 2 * j as i64;
        let mut next = vec![0i64; c.len() + 1];
        for (i, &v) in c.iter().enumerate() {
            next[i + 1] += v;
            next[i] -= root * v;
        }
        c = next;
    }
    c
}

/// Finite-difference weights at `0` on the given nodes for derivatives
/// `0..=max_order` (Fornberg's recursion); `w[m][j]` is the weight of node `j`
/// in the `m`-th derivative.
pub fn fornberg_weights(nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut w = vec![vec![0.0; n]; max_order + 1];
    w[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

/// Derivatives `0..=order` at `t = 0` of `s` along the unit-speed geodesic
/// through `p` with `g`-unit initial velocity `t_dir`.
pub fn geodesic_derivatives(
    s: &ScalarField,
    p: &KleinPoint,
    t_dir: &DVector<f64>,
    order: usize,
    delta: f64,
) -> Result<Vec<f64>> {
    let x = lift(p);
    let v = lift_differential(p) * t_dir;
    let half = order + 1;
    let nodes: Vec<f64> = (0..=2 * half).map(|j| (j as f64 - half as f64) * delta).collect();
    let values = nodes
        .iter()
        .map(|&t| {
            let q = project(&(&x * t.cosh() + &v * t.sinh()))
                .map_err(|_| Error::StencilUnderflow(format!("geodesic stencil of width {delta} leaves the chart")))?;
            Ok(s(q.coords()))
        })
        .collect::<Result<Vec<f64>>>()?;
    let w = fornberg_weights(&nodes, order);
    Ok(w.iter().map(|row| row.iter().zip(&values).map(|(a, b)| a * b).sum()).collect())
}

/// A symmetric tensor stored as its polynomial `T ↦ S(T, …, T)` in the
/// monomial basis of chart components.
#[derive(Debug, Clone, Serialize)]
pub struct SymTensor {
    pub dim: usize,
    pub degree: usize,
    pub coefficients: Vec<f64>,
}

impl SymTensor {
    pub fn evaluate(&self, t: &DVector<f64>) -> f64 {
        let basis = SymmetricPower::new(self.dim, self.degree);
        basis.basis().iter().zip(&self.coefficients).map(|(a, c)| c * monomial(a, t)).sum()
    }

    /// Symmetric 2-tensor as its polynomial.
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let basis = SymmetricPower::new(n, 2);
        let coefficients = basis
            .basis()
            .iter()
            .map(|a| {
                let idx: Vec<usize> = a.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e)).collect();
                let (i, j) = (idx[0], idx[1]);
                if i == j {
                    m[(i, i)]
                } else {
                    m[(i, j)] + m[(j, i)]
                }
            })
            .collect();
        Self { dim: n, degree: 2, coefficients }
    }

    /// `max |S(T, …, T)|` over `g`-unit `T` from a fixed sample of directions.
    pub fn unit_sup(&self, p: &KleinPoint) -> f64 {
        unit_directions(p, 64, 7).iter().map(|t| self.evaluate(t).abs()).fold(0.0, f64::max)
    }
}

fn monomial(alpha: &[usize], t: &DVector<f64>) -> f64 {
    alpha.iter().zip(t.iter()).map(|(&e, x)| x.powi(e as i32)).product()
}

fn unit_directions(p: &KleinPoint, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let g = metric_at(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let t = DVector::from_fn(p.dim(), |_, _| rng.gen_range(-1.0..1.0));
            let norm = t.dot(&(&g * &t)).sqrt();
            t / norm
        })
        .collect()
}

/// `D₀ s` for `S^k 𝒯*` from derivatives along geodesics, recovered as a
/// symmetric tensor by least squares over sampled directions.
pub fn d0_geodesic(k: usize, s: &ScalarField, p: &KleinPoint, delta: f64) -> Result<SymTensor> {
    if k == 0 {
        return Err(Error::DegreeOutOfRange { k, n: p.dim() });
    }
    let poly = operator_coefficients(k);
    let basis = SymmetricPower::new(p.dim(), k + 1);
    let dirs = unit_directions(p, 2 * basis.dim() + 4, 11);
    let mut a = DMatrix::zeros(dirs.len(), basis.dim());
    let mut b = DMatrix::zeros(dirs.len(), 1);
    for (r, t) in dirs.iter().enumerate() {
        let d = geodesic_derivatives(s, p, t, k + 1, delta)?;
        b[(r, 0)] = poly.iter().zip(&d).map(|(&c, v)| c as f64 * v).sum();
        for (c, alpha) in basis.basis().iter().enumerate() {
            a[(r, c)] = monomial(alpha, t);
        }
    }
    let (x, _) = crate::linalg::least_squares(&a, &b);
    Ok(SymTensor { dim: p.dim(), degree: k + 1, coefficients: x.column(0).iter().copied().collect() })
}

/// `D₀` for the given family: the tensorial formula for `𝒯*`, the geodesic
/// form otherwise.
pub fn d0_apply(family: D0Family, s: &ScalarField, p: &KleinPoint, delta: f64) -> Result<SymTensor> {
    match family {
        D0Family::Dual => Ok(SymTensor::from_matrix(&d0_dual(s, p, delta)?)),
        D0Family::SymKDual(k) => d0_geodesic(k, s, p, delta),
    }
}

/// `max |(∇_i u)_jk - (∇_j u)_ik| / 2`, the size of `D₁ u`.
pub fn codazzi_residual(u: &TensorField, p: &KleinPoint, delta: f64) -> Result<f64> {
    let n = p.dim();
    let u0 = u(p.coords())?;
    let gamma = christoffel(p);
    let flat = |x: &DVector<f64>| -> DVector<f64> {
        match u(x) {
            Ok(m) => DVector::from_column_slice(m.as_slice()),
            Err(_) => DVector::from_element(n * n, f64::NAN),
        }
    };
    let mut nabla = vec![DMatrix::zeros(n, n); n];
    for (i, slot) in nabla.iter_mut().enumerate() {
        let e = DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
        let d = directional_derivative(&flat, p, &e, delta)?;
        let du = DMatrix::from_column_slice(n, n, d.as_slice());
        if du.iter().any(|v| !v.is_finite()) {
            return Err(Error::StencilUnderflow("tensor field failed inside the stencil".into()));
        }
        let mut m = du;
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    m[(j, k)] -= gamma[l][(i, j)] * u0[(l, k)] + gamma[l][(i, k)] * u0[(j, l)];
                }
            }
        }
        *slot = m;
    }
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((nabla[i][(j, k)] - nabla[j][(i, k)]).abs() / 2.0);
            }
        }
    }
    Ok(worst)
}

/// Least-squares fit of a single constant `c` in
/// `f^{(k+1)} - c f^{(k-1)} = 0` over scalar slots of random parallel
/// sections of `S^k 𝒯*` on `ℍ²`.
#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub k: usize,
    pub constant: f64,
    /// `|a - c b| / |a|` over the samples.
    pub relative_residual: f64,
}

pub fn calibrate_single_constant(k: usize, samples: usize, seed: u64) -> Result<Calibration> {
    if k == 0 {
        return Err(Error::DegreeOutOfRange { k, n: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut top, mut low) = (Vec::new(), Vec::new());
    for _ in 0..samples {
        let section = ParallelSymDual::random(2, k, &mut rng);
        let p = KleinPoint::from_slice(&[rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)])?;
        let t = unit_directions(&p, 1, rng.gen())[0].clone();
        let d = geodesic_derivatives(&|x| section.scalar(x), &p, &t, k + 1, 1e-2)?;
        top.push(d[k + 1]);
        low.push(d[k - 1]);
    }
    let (a, b) = (DVector::from_vec(top), DVector::from_vec(low));
    let c = a.dot(&b) / b.dot(&b);
    Ok(Calibration { k, constant: c, relative_residual: (&a - &b * c).norm() / a.norm() })
}

/// A parallel section of `S^k 𝒯*`: a constant homogeneous polynomial `P` on
/// `ℝ^{n+1}` in the flat frame. Its scalar slot is `P(X(x))`.
#[derive(Debug, Clone)]
pub struct ParallelSymDual {
    pub n: usize,
    pub degree: usize,
    pub coefficients: DVector<f64>,
}

impl ParallelSymDual {
    pub fn random(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Self {
        let dim = SymmetricPower::new(n + 1, k).dim();
        Self { n, degree: k, coefficients: DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0)) }
    }

    pub fn scalar(&self, x: &DVector<f64>) -> f64 {
        let Ok(p) = KleinPoint::new(x.clone()) else { return f64::NAN };
        let big = lift(&p);
        let basis = SymmetricPower::new(self.n + 1, self.degree);
        basis.basis().iter().zip(self.coefficients.iter()).map(|(a, c)| c * monomial(a, &big)).sum()
    }
}

/// The scalar slot of a parallel dual tractor, obtained by transporting it
/// from the origin to `base` and then over the short chord to each sample.
#[derive(Debug, Clone)]
pub struct TransportedDualScalar {
    pub base: KleinPoint,
    value: DVector<f64>,
    local_step: f64,
}

impl TransportedDualScalar {
    /// `phi` are the components of the dual tractor at the origin, scalar slot last.
    pub fn new(phi: &DVector<f64>, base: KleinPoint, step: f64) -> Result<Self> {
        let curve = CurveSpec::chord(KleinPoint::origin(base.dim()), base.clone(), step)?;
        let m = transport_matrix(&curve, TractorRep::Dual, None)?.matrix;
        Ok(Self { value: m * phi, base, local_step: 0.25 })
    }

    pub fn scalar(&self, x: &DVector<f64>) -> f64 {
        let n = self.base.dim();
        let run = || -> Result<f64> {
            let curve = CurveSpec::chord(self.base.clone(), KleinPoint::new(x.clone())?, self.local_step)?;
            let m = transport_matrix(&curve, TractorRep::Dual, None)?.matrix;
            Ok((m * &self.value)[n])
        };
        run().unwrap_or(f64::NAN)
    }
}

/// A smooth scalar field: a few plane waves plus a quadratic.
#[derive(Debug, Clone)]
pub struct SmoothField {
    waves: Vec<(f64, DVector<f64>, f64)>,
    quadratic: DMatrix<f64>,
    linear: DVector<f64>,
}

impl SmoothField {
    pub fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let waves = (0..3)
            .map(|_| {
                (
                    rng.gen_range(-1.0..1.0),
                    DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0)),
                    rng.gen_range(0.0..6.3),
                )
            })
            .collect();
        let q = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        Self { waves, quadratic: &q + q.transpose(), linear: DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)) }
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        let w: f64 = self.waves.iter().map(|(a, k, c)| a * (k.dot(x) + c).sin()).sum();
        w + 0.5 * x.dot(&(&self.quadratic * x)) + self.linear.dot(x)
    }
}
