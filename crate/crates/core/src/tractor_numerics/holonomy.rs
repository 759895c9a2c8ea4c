//! Holonomy of the tractor connection on a quotient `Γ\ℍⁿ`, and the loop
//! tests for flatness and metric preservation.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::klein::{apply_isometry, check_isometry, isometry_jacobian, splitting_frame, KleinPoint};
use super::transport::{parallel_transport, transport_matrix, CurveSpec, TractorRep, TractorVector};
use crate::error::{Error, Result};
use crate::group_cohomology::{Coefficients, FlatRepresentation, Word};
use crate::symmetric::{SymmetricPower, TraceFreePower};
use crate::tractor_numerics::klein::lorentz_diag;

type MatrixMap = dyn Fn(&DMatrix<f64>) -> DMatrix<f64>;

/// Tolerance on `|AᵀHA - H|` for generator matrices.
pub const ISOMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct HolonomyReport {
    pub word: String,
    pub matrix: Vec<Vec<f64>>,
    /// Largest Richardson estimate among the transported chords.
    pub error_estimate: f64,
}

/// Holonomy of the loop at `x0` closed up by `g`: push the fibre at `x0`
/// forward to `g·x0`, transport back along the chord, and read the result in
/// the flat frame at `x0`. Returns a matrix on `ℝ^{n+1}` (or on `S^k_0`).
pub fn isometry_holonomy(
    g: &DMatrix<f64>,
    coefficients: Coefficients,
    x0: &KleinPoint,
    step: f64,
    tolerance: Option<f64>,
) -> Result<(DMatrix<f64>, f64)> {
    let n = x0.dim();
    check_isometry(g, ISOMETRY_TOLERANCE)?;
    let x1 = apply_isometry(g, x0)?;
    let mut push = DMatrix::identity(n + 1, n + 1);
    push.view_mut((0, 0), (n, n)).copy_from(&isometry_jacobian(g, x0));
    let frame = splitting_frame(x0);
    let frame_inv = frame.clone().try_inverse().ok_or(Error::ChartExit)?;
    let (rep, lift): (TractorRep, Box<MatrixMap>) = match coefficients {
        Coefficients::Trivial => return Ok((DMatrix::identity(1, 1), 0.0)),
        Coefficients::Defining => (TractorRep::Standard, Box::new(|m: &DMatrix<f64>| m.clone())),
        Coefficients::TraceFree(k) => {
            let sym = SymmetricPower::new(n + 1, k);
            (TractorRep::Symmetric(k), Box::new(move |m: &DMatrix<f64>| sym.group(m)))
        }
    };
    let restrict = match coefficients {
        Coefficients::TraceFree(k) => Some(TraceFreePower::new(&lorentz_diag(n), k)?),
        _ => None,
    };
    let (outer, inner) = (lift(&frame), lift(&push) * lift(&frame_inv));
    let run = |h: f64| -> Result<DMatrix<f64>> {
        let curve = CurveSpec::chord(x1.clone(), x0.clone(), h)?;
        let m = &outer * transport_matrix(&curve, rep, None)?.matrix * &inner;
        Ok(match &restrict {
            Some(t) => t.restrict(&m),
            None => m,
        })
    };
    let m = run(step)?;
    // Richardson estimate on the frame-independent output, not on the chart
    // components, which grow like 1/(1 - |x|²) near the boundary
    let estimate = match tolerance {
        None => 0.0,
        Some(tol) => {
            let estimate = (&m - run(step / 2.0)?).amax() / 15.0;
            if estimate > tol {
                return Err(Error::StepTooLarge { estimate, tolerance: tol });
            }
            estimate
        }
    };
    Ok((m, estimate))
}

/// Holonomy of a word, composed letter by letter: the lifted loop
/// `x0 → l1·x0 → l1 l2·x0 → …` is moved back next to `x0` piece by piece
/// using Γ-equivariance of the connection, so every chord stays in the chart.
pub fn quotient_holonomy(
    rep: &FlatRepresentation,
    word: &Word,
    x0: &KleinPoint,
    step: f64,
    tolerance: Option<f64>,
) -> Result<HolonomyReport> {
    if x0.dim() != rep.n() {
        return Err(Error::Dimension(format!("base point in dimension {}, group in {}", x0.dim(), rep.n())));
    }
    if word.max_generator().is_some_and(|g| g >= rep.generator_count()) {
        return Err(Error::Config(format!("word {word} uses a generator the group does not have")));
    }
    let d = rep.coefficient_dim();
    let mut out = DMatrix::identity(d, d);
    let mut estimate = 0.0f64;
    for l in &word.reduced().0 {
        let g = if l.inverse { &rep.geometric_inverses[l.generator] } else { &rep.geometric[l.generator] };
        let (m, e) = isometry_holonomy(g, rep.coefficients, x0, step, tolerance)?;
        out *= m;
        estimate = estimate.max(e);
    }
    Ok(HolonomyReport { word: word.to_string(), matrix: rows(&out), error_estimate: estimate })
}

pub fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn from_rows(r: &[Vec<f64>]) -> DMatrix<f64> {
    let cols = r.first().map_or(0, Vec::len);
    DMatrix::from_fn(r.len(), cols, |i, j| r[i][j])
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatnessReport {
    pub centre: Vec<f64>,
    pub step: f64,
    pub sides: Vec<f64>,
    /// `max |M - I|` for the square loop of each side.
    pub deviations: Vec<f64>,
    /// Successive `deviation(side) / deviation(side / 2)`.
    pub shrink_ratios: Vec<f64>,
}

/// Holonomy of squares of halving side about `centre` in the `(0, 1)` plane.
pub fn check_flatness(centre: &KleinPoint, side: f64, halvings: usize, step: f64) -> Result<FlatnessReport> {
    if centre.dim() < 2 {
        return Err(Error::Dimension("flatness loops need dimension at least 2".into()));
    }
    let d = centre.dim() + 1;
    let mut sides = Vec::new();
    let mut deviations = Vec::new();
    let mut s = side;
    for _ in 0..=halvings {
        let curve = CurveSpec::square(centre, s, (0, 1), step)?;
        let m = transport_matrix(&curve, TractorRep::Standard, None)?.matrix;
        sides.push(s);
        deviations.push((m - DMatrix::identity(d, d)).amax());
        s /= 2.0;
    }
    let shrink_ratios = deviations.windows(2).map(|w| w[0] / w[1]).collect();
    Ok(FlatnessReport { centre: centre.coords().iter().copied().collect(), step, sides, deviations, shrink_ratios })
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricDriftReport {
    pub length: f64,
    pub drift: f64,
    /// `drift / length`.
    pub drift_per_length: f64,
}

/// Transport `σ` along `curve` and compare tractor norms at the ends.
pub fn check_metric(curve: &CurveSpec, tangent: &DVector<f64>, scalar: f64) -> Result<MetricDriftReport> {
    let sigma = TractorVector::new(curve.start().clone(), tangent.clone(), scalar)?;
    let out = parallel_transport(curve, &sigma)?;
    let length = curve.hyperbolic_length();
    let drift = (out.norm_squared() - sigma.norm_squared()).abs();
    Ok(MetricDriftReport { length, drift, drift_per_length: if length > 0.0 { drift / length } else { drift } })
}
