//! The genus-two surface group of the regular octagon with interior angles
//! `π/4`, and the tiling it generates.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Vector2};

use super::presentation::GroupPresentation;
use super::representation::{lorentz_inverse, FlatRepresentation};
use crate::error::{Error, Result};
use crate::tractor_numerics::klein::{lift, lorentz_form, KleinPoint};

/// Matrices are identified when they agree to this many decimals.
const KEY_DECIMALS: f64 = 1e5;

pub fn matrix_key(m: &DMatrix<f64>) -> Vec<i64> {
    m.iter().map(|v| (v * KEY_DECIMALS).round() as i64).collect()
}

pub fn vector_key(v: &DVector<f64>) -> Vec<i64> {
    v.iter().map(|x| (x * KEY_DECIMALS).round() as i64).collect()
}

fn boost(d: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[d.cosh(), 0.0, d.sinh(), 0.0, 1.0, 0.0, d.sinh(), 0.0, d.cosh()])
}

fn rotation(a: f64) -> DMatrix<f64> {
    let (s, c) = a.sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
}

/// Regular octagon centred at the origin with sides
/// `a1 b1 a1' b1' a2 b2 a2' b2'` in counter-clockwise order.
#[derive(Debug, Clone)]
pub struct OctagonDomain {
    /// Distance from the centre to each side.
    pub inradius: f64,
    /// Distance from the centre to each vertex.
    pub circumradius: f64,
    /// `side_elements[s]` carries the octagon to its neighbour across side `s`.
    pub side_elements: Vec<DMatrix<f64>>,
    pub generators: Vec<DMatrix<f64>>,
    normals: Vec<Vector2<f64>>,
    vertices: Vec<Vector2<f64>>,
}

impl OctagonDomain {
    pub fn regular() -> Self {
        // cosh r = 1 + √2 and cosh R = 3 + 2√2 make the angle sum 2π
        let inradius = (1.0 + 2f64.sqrt()).acosh();
        let circumradius = (3.0 + 2.0 * 2f64.sqrt()).acosh();
        let pairing = |from: usize, to: usize| {
            rotation(to as f64 * PI / 4.0) * boost(2.0 * inradius) * rotation(PI - from as f64 * PI / 4.0)
        };
        let a1 = pairing(2, 0);
        let b1 = pairing(3, 1);
        let a2 = pairing(6, 4);
        let b2 = pairing(7, 5);
        let inv = lorentz_inverse;
        let side_elements =
            vec![a1.clone(), b1.clone(), inv(&a1), inv(&b1), a2.clone(), b2.clone(), inv(&a2), inv(&b2)];
        let generators = vec![a1, inv(&b1), a2, inv(&b2)];
        let normals = (0..8).map(|s| Vector2::new((s as f64 * PI / 4.0).cos(), (s as f64 * PI / 4.0).sin())).collect();
        let rv = circumradius.tanh();
        let vertices = (0..8)
            .map(|j| {
                let a = (2 * j + 1) as f64 * PI / 8.0;
                Vector2::new(rv * a.cos(), rv * a.sin())
            })
            .collect();
        Self { inradius, circumradius, side_elements, generators, normals, vertices }
    }

    /// Interior angle at each vertex.
    pub fn vertex_angle(&self) -> f64 {
        // right triangle centre / side midpoint / vertex: cos(A/2) = cosh(r) sin(π/8)
        2.0 * (self.inradius.cosh() * (PI / 8.0).sin()).acos()
    }

    pub fn contains(&self, y: &Vector2<f64>) -> bool {
        let t = self.inradius.tanh();
        self.normals.iter().all(|u| y.dot(u) <= t + 1e-12)
    }

    /// Chart coordinates without the boundary margin: far tiles have
    /// vertices within `1e-6` of the unit circle.
    fn to_chart(v: &DVector<f64>) -> Result<Vector2<f64>> {
        if v[2] <= 0.0 {
            return Err(Error::ChartExit);
        }
        Ok(Vector2::new(v[0] / v[2], v[1] / v[2]))
    }

    fn lift2(y: &Vector2<f64>) -> Result<DVector<f64>> {
        Ok(lift(&KleinPoint::from_slice(&[y.x, y.y])?))
    }

    /// Returns `q` with `q^{-1} y` in the closed octagon.
    pub fn reduce(&self, y: &Vector2<f64>) -> Result<DMatrix<f64>> {
        let t = self.inradius.tanh();
        let mut q = DMatrix::identity(3, 3);
        let mut y = *y;
        for _ in 0..200 {
            let worst = (0..8)
                .filter(|&s| y.dot(&self.normals[s]) > t + 1e-12)
                .max_by(|&a, &b| y.dot(&self.normals[a]).total_cmp(&y.dot(&self.normals[b])));
            let Some(s) = worst else { return Ok(q) };
            let v = lorentz_inverse(&self.side_elements[s]) * Self::lift2(&y)?;
            y = Self::to_chart(&v)?;
            q *= &self.side_elements[s];
        }
        Err(Error::ChartExit)
    }

    /// Chart vertices of the tile `m·P`.
    pub fn tile_polygon(&self, m: &DMatrix<f64>) -> Result<Vec<Vector2<f64>>> {
        self.vertices.iter().map(|v| Self::to_chart(&(m * Self::lift2(v)?))).collect()
    }

    /// Tiles sharing at least a vertex with the octagon, found among words of
    /// length at most four in the side elements. The identity is included.
    pub fn vertex_neighbours(&self) -> Result<Vec<DMatrix<f64>>> {
        let id = DMatrix::identity(3, 3);
        let mut seen: BTreeMap<Vec<i64>, DMatrix<f64>> = BTreeMap::from([(matrix_key(&id), id.clone())]);
        let mut queue = VecDeque::from([(id, 0usize)]);
        while let Some((m, len)) = queue.pop_front() {
            if len == 4 {
                continue;
            }
            for e in &self.side_elements {
                let next = &m * e;
                let key = matrix_key(&next);
                if seen.contains_key(&key) {
                    continue;
                }
                let poly = self.tile_polygon(&next)?;
                let shares = poly.iter().any(|a| self.vertices.iter().any(|b| (a - b).norm() < 1e-7));
                if shares {
                    seen.insert(key, next.clone());
                    queue.push_back((next, len + 1));
                }
            }
        }
        Ok(seen.into_values().collect())
    }

    /// All tiles whose closure meets the chord `[u, v]`.
    pub fn tiles_on_segment(
        &self,
        u: &Vector2<f64>,
        v: &Vector2<f64>,
        neighbours: &[DMatrix<f64>],
        spacing: f64,
    ) -> Result<Vec<DMatrix<f64>>> {
        let (lu, lv) = (Self::lift2(u)?, Self::lift2(v)?);
        let h = lorentz_form(2);
        let dist = (-(lu.transpose() * &h * &lv)[0]).max(1.0).acosh();
        let samples = ((dist / spacing) as usize).max(2);
        let mut found: BTreeMap<Vec<i64>, DMatrix<f64>> = BTreeMap::new();
        for i in 0..=samples {
            let t = i as f64 / samples as f64;
            let y = Self::to_chart(&(&lu * (1.0 - t) + &lv * t))?;
            let q = self.reduce(&y)?;
            found.insert(matrix_key(&q), q);
        }
        let mut candidates: BTreeMap<Vec<i64>, DMatrix<f64>> = BTreeMap::new();
        for q in found.values() {
            for w in neighbours {
                let m = q * w;
                candidates.insert(matrix_key(&m), m);
            }
        }
        let mut out = Vec::new();
        for m in candidates.into_values() {
            if segment_meets_polygon(u, v, &self.tile_polygon(&m)?) {
                out.push(m);
            }
        }
        Ok(out)
    }
}

/// Liang–Barsky clip of a segment against a convex polygon.
pub fn segment_meets_polygon(u: &Vector2<f64>, v: &Vector2<f64>, poly: &[Vector2<f64>]) -> bool {
    let centre = poly.iter().sum::<Vector2<f64>>() / poly.len() as f64;
    let d = v - u;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (i, a) in poly.iter().enumerate() {
        let b = poly[(i + 1) % poly.len()];
        let mut outward = Vector2::new(b.y - a.y, a.x - b.x);
        if outward.dot(&(centre - a)) > 0.0 {
            outward = -outward;
        }
        let num = outward.dot(&(u - a));
        let den = outward.dot(&d);
        if den.abs() < 1e-15 {
            if num > 0.0 {
                return false;
            }
            continue;
        }
        let t = -num / den;
        if den > 0.0 {
            t1 = t1.min(t);
        } else {
            t0 = t0.max(t);
        }
        if t0 > t1 {
            return false;
        }
    }
    true
}

/// Genus-two surface group, defining representation in `SO(2,1)`, with
/// `[x1, x2][x3, x4] = 1`.
pub fn octagon_group() -> FlatRepresentation {
    let d = OctagonDomain::regular();
    FlatRepresentation::defining(GroupPresentation::surface(2), d.generators).expect("four generators for genus two")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tractor_numerics::klein::lorentz_residual;

    #[test]
    fn relator_and_isometries() {
        let g = octagon_group();
        assert!(g.relator_residual() < 1e-8, "{}", g.relator_residual());
        for m in &g.geometric {
            assert!(lorentz_residual(m) < 1e-9);
            // hyperbolic: trace exceeds 3
            assert!(m.trace() > 3.0);
        }
    }

    #[test]
    fn angle_is_an_eighth_turn() {
        assert!((OctagonDomain::regular().vertex_angle() - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn side_elements_pair_the_sides() {
        let d = OctagonDomain::regular();
        let t = d.inradius.tanh();
        for (s, e) in d.side_elements.iter().enumerate() {
            // the neighbour across side s contains the reflection of the centre
            let c = OctagonDomain::to_chart(&(e * DVector::from_column_slice(&[0.0, 0.0, 1.0]))).unwrap();
            assert!(c.dot(&d.normals[s]) > t, "side {s}");
        }
    }

    #[test]
    fn forty_eight_tiles_around_the_vertices() {
        let d = OctagonDomain::regular();
        assert_eq!(d.vertex_neighbours().unwrap().len(), 49);
    }

    #[test]
    fn reduce_lands_in_the_domain() {
        let d = OctagonDomain::regular();
        for (i, y) in [[0.9, 0.1], [-0.5, 0.85], [0.3, -0.94]].iter().enumerate() {
            let y = Vector2::new(y[0], y[1]);
            let q = d.reduce(&y).unwrap();
            let back = OctagonDomain::to_chart(&(lorentz_inverse(&q) * OctagonDomain::lift2(&y).unwrap())).unwrap();
            assert!(d.contains(&back), "sample {i}");
        }
    }
}
