//! Beltrami–Klein chart of hyperbolic space.
//!
//! A point `x` with `|x| < 1` lifts to `X(x) = (x, 1)/sqrt(1 - |x|²)` on the
//! upper sheet of `h = x_1² + … + x_n² - x_{n+1}² = -1`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Points closer than this to the unit sphere are rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct KleinPoint {
    x: DVector<f64>,
}

impl KleinPoint {
    pub fn new(x: DVector<f64>) -> Result<Self> {
        let radius = x.norm();
        if !radius.is_finite() || radius > 1.0 - BOUNDARY_MARGIN {
            return Err(Error::NearBoundary { radius });
        }
        Ok(Self { x })
    }

    pub fn from_slice(x: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(x))
    }

    pub fn origin(n: usize) -> Self {
        Self { x: DVector::zeros(n) }
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    fn u(&self) -> f64 {
        1.0 - self.x.norm_squared()
    }
}

/// The Lorentzian form `diag(1, …, 1, -1)` on `ℝ^{n+1}`.
pub fn lorentz_form(n: usize) -> DMatrix<f64> {
    let mut h = DMatrix::identity(n + 1, n + 1);
    h[(n, n)] = -1.0;
    h
}

pub fn lorentz_diag(n: usize) -> Vec<f64> {
    let mut h = vec![1.0; n + 1];
    h[n] = -1.0;
    h
}

/// `h(a, b)`.
pub fn lorentz(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len() - 1;
    a.rows(0, n).dot(&b.rows(0, n)) - a[n] * b[n]
}

/// `g_ij = δ_ij/u + x_i x_j/u²` with `u = 1 - |x|²`.
pub fn metric_at(p: &KleinPoint) -> DMatrix<f64> {
    let u = p.u();
    let n = p.dim();
    DMatrix::identity(n, n) / u + &p.x * p.x.transpose() / (u * u)
}

/// `g^{ij} = u (δ^ij - x^i x^j)`.
pub fn inverse_metric(p: &KleinPoint) -> DMatrix<f64> {
    let n = p.dim();
    (DMatrix::identity(n, n) - &p.x * p.x.transpose()) * p.u()
}

/// `Γ^k_ij = δ^k_i ψ_j + δ^k_j ψ_i` with `ψ = x/u`; entry `[k][(i, j)]`.
/// The chart is projectively flat, hence the pure-trace form.
pub fn christoffel(p: &KleinPoint) -> Vec<DMatrix<f64>> {
    let n = p.dim();
    let psi = &p.x / p.u();
    (0..n)
        .map(|k| {
            let mut g = DMatrix::zeros(n, n);
            for i in 0..n {
                g[(k, i)] += psi[i];
                g[(i, k)] += psi[i];
            }
            g
        })
        .collect()
}

/// `Γ(X)^k_j = Γ^k_ij X^i`.
pub fn christoffel_contract(p: &KleinPoint, v: &DVector<f64>) -> DMatrix<f64> {
    let n = p.dim();
    let psi = &p.x / p.u();
    // δ^k_i ψ_j X^i + δ^k_j ψ_i X^i = X^k ψ_j + (ψ·X) δ^k_j
    v * psi.transpose() + DMatrix::identity(n, n) * psi.dot(v)
}

pub fn lift(p: &KleinPoint) -> DVector<f64> {
    let n = p.dim();
    let mut v = DVector::from_element(n + 1, 1.0);
    v.rows_mut(0, n).copy_from(&p.x);
    v / p.u().sqrt()
}

/// Chart point of a timelike vector on the upper cone.
pub fn project(v: &DVector<f64>) -> Result<KleinPoint> {
    let n = v.len() - 1;
    if v[n] <= 0.0 {
        return Err(Error::ChartExit);
    }
    KleinPoint::new(v.rows(0, n) / v[n]).map_err(|_| Error::ChartExit)
}

/// `dX` at `p`, an `(n+1) × n` matrix.
pub fn lift_differential(p: &KleinPoint) -> DMatrix<f64> {
    let n = p.dim();
    let u = p.u();
    let mut xe = DVector::from_element(n + 1, 1.0);
    xe.rows_mut(0, n).copy_from(&p.x);
    let mut d = DMatrix::zeros(n + 1, n);
    d.view_mut((0, 0), (n, n)).copy_from(&(DMatrix::identity(n, n) / u.sqrt()));
    d += xe * p.x.transpose() / u.powf(1.5);
    d
}

/// Flat trivialisation `Φ_x(Y, s) = dX(Y) + s X(x)` as a matrix on `(Y, s)`.
/// Parallel standard tractors map to constant vectors of `ℝ^{n+1}`.
pub fn splitting_frame(p: &KleinPoint) -> DMatrix<f64> {
    let n = p.dim();
    let mut f = DMatrix::zeros(n + 1, n + 1);
    f.view_mut((0, 0), (n + 1, n)).copy_from(&lift_differential(p));
    f.set_column(n, &lift(p));
    f
}

/// Maximum of `|AᵀHA - H|`.
pub fn lorentz_residual(a: &DMatrix<f64>) -> f64 {
    let h = lorentz_form(a.nrows() - 1);
    (a.transpose() * &h * a - h).amax()
}

/// Checks `A ∈ SO_0(n,1)` to tolerance.
pub fn check_isometry(a: &DMatrix<f64>, tol: f64) -> Result<()> {
    if a.nrows() != a.ncols() || a.nrows() < 2 {
        return Err(Error::Dimension(format!("{}x{} is not a Lorentz matrix", a.nrows(), a.ncols())));
    }
    let residual = lorentz_residual(a);
    let n = a.nrows() - 1;
    if residual > tol || a[(n, n)] < 1.0 - tol || a.clone().determinant() < 0.0 {
        return Err(Error::NotOrthogonal { residual });
    }
    Ok(())
}

pub fn apply_isometry(a: &DMatrix<f64>, p: &KleinPoint) -> Result<KleinPoint> {
    project(&(a * lift(p)))
}

/// Jacobian of `x ↦ A·x` in the chart.
pub fn isometry_jacobian(a: &DMatrix<f64>, p: &KleinPoint) -> DMatrix<f64> {
    let n = p.dim();
    let mut xe = DVector::from_element(n + 1, 1.0);
    xe.rows_mut(0, n).copy_from(&p.x);
    let ax = a * &xe;
    let w = ax[n];
    let y = ax.rows(0, n) / w;
    let top = a.view((0, 0), (n, n)).into_owned();
    let last = a.view((n, 0), (1, n)).into_owned();
    (top - y * last) / w
}

/// Hyperbolic distance between chart points, as `2 asinh(|X - Y|/2)` which
/// stays accurate for nearby points.
pub fn distance(p: &KleinPoint, q: &KleinPoint) -> f64 {
    let d = lift(p) - lift(q);
    2.0 * (lorentz(&d, &d).max(0.0).sqrt() / 2.0).asinh()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &[f64]) -> KleinPoint {
        KleinPoint::from_slice(x).unwrap()
    }

    #[test]
    fn origin_is_euclidean() {
        assert_eq!(metric_at(&KleinPoint::origin(3)), DMatrix::identity(3, 3));
    }

    #[test]
    fn metric_is_pullback_of_the_form() {
        let p = pt(&[0.3, -0.5]);
        let d = lift_differential(&p);
        let pull = d.transpose() * lorentz_form(2) * &d;
        assert!((pull - metric_at(&p)).amax() < 1e-12);
        assert!((metric_at(&p) * inverse_metric(&p) - DMatrix::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn contracted_christoffel_matches_components() {
        let p = pt(&[0.2, 0.4, -0.1]);
        let v = DVector::from_column_slice(&[0.7, -0.3, 1.1]);
        let full = christoffel(&p);
        let c = christoffel_contract(&p, &v);
        for k in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|i| full[k][(i, j)] * v[i]).sum();
                assert!((s - c[(k, j)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn frame_is_an_isometry_of_tractor_metric() {
        let p = pt(&[0.6, 0.1]);
        let f = splitting_frame(&p);
        let mut tractor = DMatrix::zeros(3, 3);
        tractor.view_mut((0, 0), (2, 2)).copy_from(&metric_at(&p));
        tractor[(2, 2)] = -1.0;
        assert!((f.transpose() * lorentz_form(2) * &f - tractor).amax() < 1e-12);
    }

    #[test]
    fn distance_along_a_diameter() {
        let d = distance(&pt(&[-0.5, 0.0]), &pt(&[0.5, 0.0]));
        assert!((d - 2.0 * 0.5f64.atanh()).abs() < 1e-14);
        assert_eq!(distance(&pt(&[0.3, 0.1]), &pt(&[0.3, 0.1])), 0.0);
    }

    #[test]
    fn boundary_rejected() {
        assert!(matches!(KleinPoint::from_slice(&[1.0, 0.0]), Err(Error::NearBoundary { .. })));
        assert!(KleinPoint::from_slice(&[0.999, 0.0]).is_ok());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let t: f64 = 0.8;
        let a = DMatrix::from_row_slice(3, 3, &[t.cosh(), 0.0, t.sinh(), 0.0, 1.0, 0.0, t.sinh(), 0.0, t.cosh()]);
        let p = pt(&[0.1, 0.3]);
        let j = isometry_jacobian(&a, &p);
        let eps = 1e-6;
        for c in 0..2 {
            let mut e = DVector::zeros(2);
            e[c] = eps;
            let plus = apply_isometry(&a, &pt((p.coords() + &e).as_slice())).unwrap();
            let minus = apply_isometry(&a, &pt((p.coords() - &e).as_slice())).unwrap();
            let fd = (plus.coords() - minus.coords()) / (2.0 * eps);
            assert!((fd - j.column(c)).amax() < 1e-8);
        }
    }
}
