//! The class of a closed geodesic with coefficients in `S^k_0 ℝ³`, built by
//! counting signed crossings of generator segments with translates of the
//! axis.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector, Vector2};
use serde::Serialize;

use super::cohomology::{relator_constraint_residual, GroupCocycle};
use super::octagon::{matrix_key, vector_key, OctagonDomain};
use super::representation::{coefficient_action, Coefficients, FlatRepresentation};
use crate::error::{Error, Result};
use crate::symmetric::TraceFreePower;
use crate::tractor_numerics::klein::{lift, lorentz, lorentz_diag, project, KleinPoint};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CocycleOptions {
    /// Distance of the base point from the origin.
    pub base_offset: f64,
    /// Direction of the offset (need not be normalised).
    pub base_direction: [f64; 2],
    /// Chord sampling used to locate the tiles met by a segment.
    pub spacing: f64,
    /// Crossings at an angle with smaller sine are rejected.
    pub min_angle: f64,
    /// Longest side-element word used in the simplicity check.
    pub simple_word_length: usize,
}

impl Default for CocycleOptions {
    fn default() -> Self {
        Self { base_offset: 1e-3, base_direction: [1.0, 0.3], spacing: 0.01, min_angle: 1e-3, simple_word_length: 4 }
    }
}

impl CocycleOptions {
    pub fn base_point(&self) -> Result<KleinPoint> {
        let [a, b] = self.base_direction;
        let norm = a.hypot(b);
        if norm == 0.0 {
            return Err(Error::Config("base direction must be nonzero".into()));
        }
        KleinPoint::from_slice(&[a / norm * self.base_offset, b / norm * self.base_offset])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CocycleReport {
    pub axis_generator: usize,
    pub degree: usize,
    pub cocycle: GroupCocycle,
    /// Crossings found on each generator segment.
    pub crossings: Vec<usize>,
    /// Smallest incidence angle (as a sine) over all crossings.
    pub min_crossing_sine: f64,
    /// Axis translates meeting the closed fundamental domain.
    pub axis_translates: usize,
    /// `min |h(m, w m)|` over side-element words with `w m ≠ ±m`.
    pub simplicity_margin: f64,
    pub relator_residual: f64,
    /// `h(c(x_j), m)` for `k = 1`, where `m` is the unit normal of the axis.
    pub axis_pairings: Option<Vec<f64>>,
    #[serde(skip)]
    pub representation: FlatRepresentation,
}

/// Spacelike unit normal of the axis of a hyperbolic element: its fixed vector.
fn axis_normal(a: &DMatrix<f64>) -> Result<DVector<f64>> {
    let m = a - DMatrix::identity(3, 3);
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let (i, _) = svd.singular_values.argmin();
    let n: DVector<f64> = v_t.row(i).transpose();
    let norm = lorentz(&n, &n);
    if norm <= 0.0 {
        return Err(Error::NonSimpleAxis("generator is not hyperbolic".into()));
    }
    // fix the sign so the choice is reproducible
    let n = n / norm.sqrt();
    let pivot = n.iter().copied().find(|v| v.abs() > 1e-9).unwrap_or(1.0);
    Ok(if pivot < 0.0 { -n } else { n })
}

fn simplicity_margin(domain: &OctagonDomain, m: &DVector<f64>, max_len: usize) -> f64 {
    let id = DMatrix::identity(3, 3);
    let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::from([(matrix_key(&id), ())]);
    let mut queue = VecDeque::from([(id, 0usize)]);
    let mut margin = f64::INFINITY;
    let (plus, minus) = (vector_key(m), vector_key(&-m));
    while let Some((w, len)) = queue.pop_front() {
        let n = &w * m;
        let key = vector_key(&n);
        if key != plus && key != minus {
            margin = margin.min(lorentz(m, &n).abs());
        }
        if len == max_len {
            continue;
        }
        for e in &domain.side_elements {
            let next = &w * e;
            if seen.insert(matrix_key(&next), ()).is_none() {
                queue.push_back((next, len + 1));
            }
        }
    }
    margin
}

fn chart(p: &KleinPoint) -> Vector2<f64> {
    Vector2::new(p.coords()[0], p.coords()[1])
}

/// Geodesic-crossing cocycle of the axis of `x_{axis_generator}` with values
/// `(ν ⊗ … ⊗ ν)_0` in `S^k_0 ℝ³`. The representation must be the octagon
/// group; its coefficients are replaced by the degree-`k` trace-free power.
pub fn geodesic_cocycle(
    rep: &FlatRepresentation,
    axis_generator: usize,
    k: usize,
    options: &CocycleOptions,
) -> Result<CocycleReport> {
    let domain = OctagonDomain::regular();
    let same_group = rep.n() == 2
        && rep.geometric.len() == domain.generators.len()
        && rep.geometric.iter().zip(&domain.generators).all(|(a, b)| matrix_key(a) == matrix_key(b));
    if !same_group {
        return Err(Error::Config("the crossing construction needs the octagon group's own generators".into()));
    }
    if axis_generator >= rep.generator_count() {
        return Err(Error::Config(format!("generator index {axis_generator} out of range")));
    }
    if k == 0 {
        return Err(Error::DegreeOutOfRange { k, n: 2 });
    }
    let coefficients = if k == 1 { Coefficients::Defining } else { Coefficients::TraceFree(k) };
    let target = coefficient_action(rep, coefficients)?;
    let power = TraceFreePower::new(&lorentz_diag(2), k)?;

    let axis = &domain.generators[axis_generator];
    let m = axis_normal(axis)?;
    let margin = simplicity_margin(&domain, &m, options.simple_word_length);
    if margin < 1.0 {
        return Err(Error::NonSimpleAxis(format!("a translate meets the axis, |h(m, w m)| = {margin}")));
    }

    let neighbours = domain.vertex_neighbours()?;
    // nearest axis point to the origin and one period of the axis from it
    let origin = DVector::from_column_slice(&[0.0, 0.0, 1.0]);
    let foot = project(&(&origin - &m * lorentz(&origin, &m)))?;
    let foot_image = project(&(axis * lift(&foot)))?;
    let period = domain.tiles_on_segment(&chart(&foot), &chart(&foot_image), &neighbours, options.spacing)?;
    let mut translates: BTreeMap<Vec<i64>, DVector<f64>> = BTreeMap::new();
    for q in &period {
        let n = super::representation::lorentz_inverse(q) * &m;
        translates.insert(vector_key(&n), n);
    }

    let x0 = options.base_point()?;
    let a = lift(&x0);
    let mut values = Vec::with_capacity(rep.generator_count());
    let mut crossings = Vec::with_capacity(rep.generator_count());
    let mut min_sine = f64::INFINITY;
    for g in &rep.geometric {
        let x1 = project(&(g * &a))?;
        let b = lift(&x1);
        let tiles = domain.tiles_on_segment(&chart(&x0), &chart(&x1), &neighbours, options.spacing)?;
        let mut normals: BTreeMap<Vec<i64>, DVector<f64>> = BTreeMap::new();
        for t in &tiles {
            for n in translates.values() {
                let nn = t * n;
                normals.insert(vector_key(&nn), nn);
            }
        }
        let mut total = DVector::zeros(target.coefficient_dim());
        let mut count = 0;
        for nn in normals.values() {
            let (sa, sb) = (lorentz(&a, nn), lorentz(&b, nn));
            if sa * sb >= 0.0 {
                continue;
            }
            let sine = crossing_sine(&a, &b, nn);
            min_sine = min_sine.min(sine);
            if sine < options.min_angle {
                return Err(Error::TangentialCrossing { angle: sine.asin() });
            }
            total += power.power_of(nn.as_slice()) * sb.signum();
            count += 1;
        }
        values.push(total);
        crossings.push(count);
    }
    let cocycle = GroupCocycle { values };
    let relator_residual = relator_constraint_residual(&cocycle, &target);
    let axis_pairings = (k == 1).then(|| cocycle.values.iter().map(|c| lorentz(c, &m)).collect());
    Ok(CocycleReport {
        axis_generator,
        degree: k,
        cocycle,
        crossings,
        min_crossing_sine: min_sine,
        axis_translates: translates.len(),
        simplicity_margin: margin,
        relator_residual,
        axis_pairings,
        representation: target,
    })
}

/// Sine of the angle between the chord `[a, b]` and the geodesic `n^⊥` at
/// their intersection.
fn crossing_sine(a: &DVector<f64>, b: &DVector<f64>, n: &DVector<f64>) -> f64 {
    let p = a * lorentz(b, n) - b * lorentz(a, n);
    let t = b - &p * (lorentz(b, &p) / lorentz(&p, &p));
    lorentz(&t, n).abs() / lorentz(&t, &t).sqrt()
}
