//! Tractor connection in the splitting `𝒯 ≅ TM ⊕ ℝ` and parallel transport
//! along polygonal curves of Klein chords (which are geodesics).

use nalgebra::{DMatrix, DVector};

use super::klein::{christoffel_contract, distance, lift, metric_at, project, KleinPoint};
use crate::error::{Error, Result};
use crate::symmetric::SymmetricPower;

#[derive(Debug, Clone, PartialEq)]
pub struct TractorVector {
    pub tangent: DVector<f64>,
    pub scalar: f64,
    pub base: KleinPoint,
}

impl TractorVector {
    pub fn new(base: KleinPoint, tangent: DVector<f64>, scalar: f64) -> Result<Self> {
        if tangent.len() != base.dim() {
            return Err(Error::Dimension(format!(
                "tangent part has {} entries, chart has {}",
                tangent.len(),
                base.dim()
            )));
        }
        if !scalar.is_finite() || tangent.iter().any(|v| !v.is_finite()) {
            return Err(Error::Dimension("non-finite tractor entries".into()));
        }
        Ok(Self { tangent, scalar, base })
    }

    pub fn stacked(&self) -> DVector<f64> {
        let n = self.tangent.len();
        let mut v = DVector::zeros(n + 1);
        v.rows_mut(0, n).copy_from(&self.tangent);
        v[n] = self.scalar;
        v
    }

    fn from_stacked(base: KleinPoint, v: &DVector<f64>) -> Self {
        let n = base.dim();
        Self { tangent: v.rows(0, n).into_owned(), scalar: v[n], base }
    }

    /// Tractor metric `g(Y, Y) - s²`.
    pub fn norm_squared(&self) -> f64 {
        let g = metric_at(&self.base);
        self.tangent.dot(&(g * &self.tangent)) - self.scalar * self.scalar
    }
}

/// Element of `S^k 𝒯` in the monomial basis of `S^k(TM ⊕ ℝ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTractor {
    pub degree: usize,
    pub components: DVector<f64>,
    pub base: KleinPoint,
    pub tracefree: bool,
}

/// Which bundle is being transported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TractorRep {
    Standard,
    Dual,
    Symmetric(usize),
}

impl TractorRep {
    pub fn fibre_dim(&self, n: usize) -> usize {
        match *self {
            TractorRep::Standard | TractorRep::Dual => n + 1,
            TractorRep::Symmetric(k) => SymmetricPower::new(n + 1, k).dim(),
        }
    }
}

/// Connection matrix `A` with `∇_X σ = X(σ) + A σ` on `(Y, s)`:
/// `A = [[Γ(X), X], [(gX)ᵀ, 0]]`.
pub fn connection_matrix(p: &KleinPoint, v: &DVector<f64>) -> DMatrix<f64> {
    let n = p.dim();
    let mut a = DMatrix::zeros(n + 1, n + 1);
    a.view_mut((0, 0), (n, n)).copy_from(&christoffel_contract(p, v));
    a.view_mut((0, n), (n, 1)).copy_from(v);
    let gv = metric_at(p) * v;
    a.view_mut((n, 0), (1, n)).copy_from(&gv.transpose());
    a
}

/// `∇_X (Y, s) = (∇_X Y + sX, X(s) + g(X, Y))` from the field value and its
/// directional derivative `(X(Y), X(s))`.
pub fn tractor_derivative(
    p: &KleinPoint,
    x: &DVector<f64>,
    value: (&DVector<f64>, f64),
    directional: (&DVector<f64>, f64),
) -> (DVector<f64>, f64) {
    let (y, s) = value;
    let (dy, ds) = directional;
    let tangent = dy + christoffel_contract(p, x) * y + x * s;
    let scalar = ds + x.dot(&(metric_at(p) * y));
    (tangent, scalar)
}

/// `∇_X (s, η) = (X(s) - η(X), ∇_X η - s X♭)` on dual tractors.
pub fn dual_tractor_derivative(
    p: &KleinPoint,
    x: &DVector<f64>,
    value: (f64, &DVector<f64>),
    directional: (f64, &DVector<f64>),
) -> (f64, DVector<f64>) {
    let (s, eta) = value;
    let (ds, deta) = directional;
    let scalar = ds - eta.dot(x);
    let covector = deta - christoffel_contract(p, x).transpose() * eta - metric_at(p) * x * s;
    (scalar, covector)
}

/// Directional derivative of a sampled field by a five-point stencil.
pub fn directional_derivative(
    field: &dyn Fn(&DVector<f64>) -> DVector<f64>,
    p: &KleinPoint,
    x: &DVector<f64>,
    delta: f64,
) -> Result<DVector<f64>> {
    let at = |t: f64| -> Result<DVector<f64>> {
        let q = KleinPoint::new(p.coords() + x * t)
            .map_err(|_| Error::StencilUnderflow(format!("stencil of width {delta} leaves the chart")))?;
        Ok(field(q.coords()))
    };
    Ok((at(-2.0 * delta)? - at(2.0 * delta)? + (at(delta)? - at(-delta)?) * 8.0) / (12.0 * delta))
}

/// A polygonal curve of Klein chords. Each chord is parametrised by
/// hyperbolic arclength and integrated with RK4 steps of length at most `step`.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub vertices: Vec<KleinPoint>,
    pub step: f64,
}

impl CurveSpec {
    pub fn new(vertices: Vec<KleinPoint>, step: f64) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Dimension("curve needs at least one vertex".into()));
        }
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::Config(format!("step {step} must lie in (0, 1]")));
        }
        let n = vertices[0].dim();
        if vertices.iter().any(|v| v.dim() != n) {
            return Err(Error::Dimension("curve vertices of mixed dimension".into()));
        }
        Ok(Self { vertices, step })
    }

    pub fn chord(a: KleinPoint, b: KleinPoint, step: f64) -> Result<Self> {
        Self::new(vec![a, b], step)
    }

    /// Axis-parallel square of side `side` centred at `centre`, in the
    /// coordinate plane `(i, j)`, traversed counter-clockwise.
    pub fn square(centre: &KleinPoint, side: f64, plane: (usize, usize), step: f64) -> Result<Self> {
        let (i, j) = plane;
        let h = side / 2.0;
        let corner = |a: f64, b: f64| {
            let mut x = centre.coords().clone();
            x[i] += a;
            x[j] += b;
            KleinPoint::new(x)
        };
        Self::new(vec![corner(-h, -h)?, corner(h, -h)?, corner(h, h)?, corner(-h, h)?, corner(-h, -h)?], step)
    }

    pub fn start(&self) -> &KleinPoint {
        &self.vertices[0]
    }

    pub fn end(&self) -> &KleinPoint {
        self.vertices.last().expect("nonempty")
    }

    /// RK4 steps used on a chord of the given hyperbolic length.
    pub fn steps_for(length: f64, step: f64) -> usize {
        ((length / step).ceil() as usize).max(1)
    }

    pub fn hyperbolic_length(&self) -> f64 {
        self.vertices.windows(2).map(|w| super::klein::distance(&w[0], &w[1])).sum()
    }
}

#[derive(Debug, Clone)]
pub struct Transport {
    /// Fundamental matrix: fibre at the start to fibre at the end.
    pub matrix: DMatrix<f64>,
    /// Richardson estimate `|M_h - M_{h/2}| / 15`, when requested.
    pub error_estimate: Option<f64>,
}

fn generator(rep: TractorRep, sym: Option<&SymmetricPower>, p: &KleinPoint, v: &DVector<f64>) -> DMatrix<f64> {
    let a = connection_matrix(p, v);
    match rep {
        TractorRep::Standard => -a,
        TractorRep::Dual => a.transpose(),
        TractorRep::Symmetric(_) => -sym.expect("symmetric power prepared").derivation(&a),
    }
}

fn integrate(curve: &CurveSpec, rep: TractorRep, refine: usize) -> Result<DMatrix<f64>> {
    let n = curve.start().dim();
    let sym = match rep {
        TractorRep::Symmetric(k) => Some(SymmetricPower::new(n + 1, k)),
        _ => None,
    };
    let d = rep.fibre_dim(n);
    let mut m = DMatrix::identity(d, d);
    for w in curve.vertices.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let length = distance(&w[0], &w[1]);
        // unit-speed geodesic τ ↦ cosh τ A + sinh τ V on the hyperboloid
        let a = lift(&w[0]);
        let b = lift(&w[1]);
        let v = (&b - &a * length.cosh()) / length.sinh();
        let f = |tau: f64| -> Result<DMatrix<f64>> {
            let big = &a * tau.cosh() + &v * tau.sinh();
            let dbig = &a * tau.sinh() + &v * tau.cosh();
            let p = project(&big)?;
            let velocity = (dbig.rows(0, n) - p.coords() * dbig[n]) / big[n];
            Ok(generator(rep, sym.as_ref(), &p, &velocity))
        };
        let steps = refine * CurveSpec::steps_for(length, curve.step);
        let dt = length / steps as f64;
        let mut g0 = f(0.0)?;
        for s in 0..steps {
            let t = s as f64 * dt;
            let gm = f(t + 0.5 * dt)?;
            let g1 = if s + 1 == steps { f(length)? } else { f(t + dt)? };
            let k1 = &g0 * &m;
            let k2 = &gm * (&m + &k1 * (0.5 * dt));
            let k3 = &gm * (&m + &k2 * (0.5 * dt));
            let k4 = &g1 * (&m + &k3 * dt);
            m += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            g0 = g1;
        }
    }
    Ok(m)
}

/// Parallel transport of the whole fibre along `curve`.
///
/// With `tolerance = Some(tol)` the step is also halved once and the
/// Richardson estimate is compared with `tol`.
pub fn transport_matrix(curve: &CurveSpec, rep: TractorRep, tolerance: Option<f64>) -> Result<Transport> {
    let matrix = integrate(curve, rep, 1)?;
    let error_estimate = match tolerance {
        None => None,
        Some(tol) => {
            let fine = integrate(curve, rep, 2)?;
            let estimate = (&matrix - fine).amax() / 15.0;
            if estimate > tol {
                return Err(Error::StepTooLarge { estimate, tolerance: tol });
            }
            Some(estimate)
        }
    };
    Ok(Transport { matrix, error_estimate })
}

pub fn parallel_transport(curve: &CurveSpec, sigma: &TractorVector) -> Result<TractorVector> {
    if &sigma.base != curve.start() {
        return Err(Error::Dimension("tractor is not based at the start of the curve".into()));
    }
    let m = transport_matrix(curve, TractorRep::Standard, None)?.matrix;
    Ok(TractorVector::from_stacked(curve.end().clone(), &(m * sigma.stacked())))
}

pub fn parallel_transport_sym(curve: &CurveSpec, sigma: &SymTractor) -> Result<SymTractor> {
    if &sigma.base != curve.start() {
        return Err(Error::Dimension("tractor is not based at the start of the curve".into()));
    }
    let m = transport_matrix(curve, TractorRep::Symmetric(sigma.degree), None)?.matrix;
    Ok(SymTractor {
        degree: sigma.degree,
        components: m * &sigma.components,
        base: curve.end().clone(),
        tracefree: sigma.tracefree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tractor_numerics::klein::splitting_frame;

    fn pt(x: &[f64]) -> KleinPoint {
        KleinPoint::from_slice(x).unwrap()
    }

    #[test]
    fn constant_section_derivative() {
        let p = KleinPoint::origin(2);
        let x = DVector::from_column_slice(&[1.0, 0.0]);
        let zero = DVector::zeros(2);
        let (t, s) = tractor_derivative(&p, &x, (&zero, 1.0), (&zero, 0.0));
        assert_eq!(t, x);
        assert_eq!(s, 0.0);
    }

    #[test]
    fn point_curve_is_identity() {
        let p = pt(&[0.1, 0.2]);
        let c = CurveSpec::new(vec![p.clone(), p], 1e-2).unwrap();
        let m = transport_matrix(&c, TractorRep::Standard, None).unwrap().matrix;
        assert_eq!(m, DMatrix::identity(3, 3));
    }

    #[test]
    fn transport_is_constant_in_the_flat_frame() {
        let a = pt(&[-0.3, 0.2]);
        let b = pt(&[0.5, -0.4]);
        let c = CurveSpec::chord(a.clone(), b.clone(), 1e-3).unwrap();
        let m = transport_matrix(&c, TractorRep::Standard, Some(1e-9)).unwrap().matrix;
        let lhs = splitting_frame(&b) * m;
        assert!((lhs - splitting_frame(&a)).amax() < 1e-10);
    }

    #[test]
    fn dual_transport_preserves_pairing() {
        let c = CurveSpec::new(vec![pt(&[0.0, 0.0]), pt(&[0.4, 0.1]), pt(&[-0.2, 0.6])], 1e-3).unwrap();
        let m = transport_matrix(&c, TractorRep::Standard, None).unwrap().matrix;
        let md = transport_matrix(&c, TractorRep::Dual, None).unwrap().matrix;
        assert!((md.transpose() * m - DMatrix::identity(3, 3)).amax() < 1e-10);
    }

    #[test]
    fn symmetric_transport_is_power_of_standard() {
        let c = CurveSpec::chord(pt(&[0.1, -0.2]), pt(&[-0.4, 0.3]), 1e-3).unwrap();
        let m = transport_matrix(&c, TractorRep::Standard, None).unwrap().matrix;
        let m2 = transport_matrix(&c, TractorRep::Symmetric(2), None).unwrap().matrix;
        let s = SymmetricPower::new(3, 2);
        assert!((s.group(&m) - m2).amax() < 1e-10);
    }

    #[test]
    fn dual_derivative_matches_pairing_rule() {
        // X⟨ξ, σ⟩ = ⟨∇ξ, σ⟩ + ⟨ξ, ∇σ⟩ for arbitrary jets.
        let p = pt(&[0.3, -0.1]);
        let x = DVector::from_column_slice(&[0.4, 0.9]);
        let y = DVector::from_column_slice(&[1.0, -2.0]);
        let dy = DVector::from_column_slice(&[0.5, 0.25]);
        let (t, dt) = (0.7, -0.3);
        let eta = DVector::from_column_slice(&[0.2, 1.5]);
        let deta = DVector::from_column_slice(&[-1.0, 0.1]);
        let (s, ds) = (1.2, 0.8);
        let (ny, nt) = tractor_derivative(&p, &x, (&y, t), (&dy, dt));
        let (ns, neta) = dual_tractor_derivative(&p, &x, (s, &eta), (ds, &deta));
        let lhs = ds * t + s * dt + deta.dot(&y) + eta.dot(&dy);
        let rhs = ns * t + neta.dot(&y) + s * nt + eta.dot(&ny);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn metric_drift_is_small() {
        let c = CurveSpec::new(vec![pt(&[0.0, 0.0]), pt(&[0.7, 0.0]), pt(&[0.0, -0.7])], 1e-3).unwrap();
        let sigma = TractorVector::new(c.start().clone(), DVector::from_column_slice(&[0.3, -1.0]), 0.4).unwrap();
        let out = parallel_transport(&c, &sigma).unwrap();
        let drift = (out.norm_squared() - sigma.norm_squared()).abs();
        assert!(drift < 1e-9 * c.hyperbolic_length(), "{drift}");
    }

    #[test]
    fn coarse_step_is_reported() {
        let c = CurveSpec::chord(pt(&[-0.99, 0.0]), pt(&[0.99, 0.0]), 0.5).unwrap();
        assert!(matches!(transport_matrix(&c, TractorRep::Standard, Some(1e-12)), Err(Error::StepTooLarge { .. })));
    }
}
