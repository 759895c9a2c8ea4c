//! The normal tractor `ν = (N, 0)` of a hypersurface, and how far it is from
//! parallel along the hypersurface.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::klein::{inverse_metric, metric_at, KleinPoint};
use super::transport::{directional_derivative, tractor_derivative};
use crate::error::{Error, Result};

/// Sample points are kept inside this chart radius.
const SAMPLE_RADIUS: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Hypersurface {
    /// `{x : a·x = c}` in the chart, a totally geodesic slice.
    Hyperplane { normal: Vec<f64>, offset: f64 },
    /// Metric sphere of the given hyperbolic radius about the origin.
    Sphere { dim: usize, radius: f64 },
}

impl Hypersurface {
    pub fn dim(&self) -> usize {
        match self {
            Hypersurface::Hyperplane { normal, .. } => normal.len(),
            Hypersurface::Sphere { dim, .. } => *dim,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Hypersurface::Hyperplane { normal, offset } => {
                let a = DVector::from_column_slice(normal);
                if normal.len() < 2 || a.norm() == 0.0 {
                    return Err(Error::DegenerateHypersurface(
                        "hyperplane needs a nonzero normal in dimension ≥ 2".into(),
                    ));
                }
                if offset.abs() / a.norm() >= SAMPLE_RADIUS {
                    return Err(Error::DegenerateHypersurface(format!(
                        "hyperplane passes at chart distance {} from the origin",
                        offset.abs() / a.norm()
                    )));
                }
            }
            Hypersurface::Sphere { dim, radius } => {
                if *dim < 2 || !radius.is_finite() || *radius <= 0.0 || radius.tanh() >= SAMPLE_RADIUS {
                    return Err(Error::DegenerateHypersurface(format!("sphere of radius {radius} in dimension {dim}")));
                }
            }
        }
        Ok(())
    }

    /// Defining covector (up to scale) at `x`.
    fn conormal(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Hypersurface::Hyperplane { normal, .. } => DVector::from_column_slice(normal),
            Hypersurface::Sphere { .. } => x.clone(),
        }
    }

    /// `g`-unit normal field, extended off the hypersurface by the same formula.
    pub fn unit_normal(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let p = KleinPoint::new(x.clone())?;
        let a = self.conormal(x);
        let n = inverse_metric(&p) * &a;
        Ok(&n / a.dot(&n).sqrt())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> (DVector<f64>, DVector<f64>) {
        let d = self.dim();
        let gaussian = |rng: &mut ChaCha8Rng| DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        match self {
            Hypersurface::Hyperplane { normal, offset } => {
                let a = DVector::from_column_slice(normal);
                let unit = &a / a.norm();
                let foot = &unit * (offset / a.norm());
                let along = |v: DVector<f64>| &v - &unit * unit.dot(&v);
                let reach = (SAMPLE_RADIUS * SAMPLE_RADIUS - foot.norm_squared()).sqrt();
                let w = along(gaussian(rng));
                let r = rng.gen_range(0.0..reach);
                let x = &foot + w.normalize() * r;
                (x, along(gaussian(rng)))
            }
            Hypersurface::Sphere { radius, .. } => {
                let x = gaussian(rng).normalize() * radius.tanh();
                let t = gaussian(rng);
                let tangent = &t - &x * (x.dot(&t) / x.norm_squared());
                (x, tangent)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalTractorReport {
    pub hypersurface: Hypersurface,
    pub samples: usize,
    /// `max |∇_X ν|` over unit tangents `X`, in the tractor metric.
    pub max_deviation: f64,
    pub stencil: f64,
}

/// Samples points and unit tangent directions on the hypersurface and measures
/// `∇_X ν` with a five-point stencil of width `delta`.
pub fn normal_tractor_check(
    surface: &Hypersurface,
    samples: usize,
    seed: u64,
    delta: f64,
) -> Result<NormalTractorReport> {
    surface.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = |x: &DVector<f64>| surface.unit_normal(x).unwrap_or_else(|_| DVector::from_element(x.len(), f64::NAN));
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (x, t) = surface.sample(&mut rng);
        let p = KleinPoint::new(x.clone())?;
        let g = metric_at(&p);
        let t = &t / t.dot(&(&g * &t)).sqrt();
        let n = surface.unit_normal(&x)?;
        let dn = directional_derivative(&field, &p, &t, delta)?;
        let (tangent, scalar) = tractor_derivative(&p, &t, (&n, 0.0), (&dn, 0.0));
        let size = (tangent.dot(&(&g * &tangent)) + scalar * scalar).sqrt();
        worst = worst.max(size);
    }
    Ok(NormalTractorReport { hypersurface: surface.clone(), samples, max_deviation: worst, stencil: delta })
}
