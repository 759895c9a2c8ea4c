use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tractor_bgg::group_cohomology::{octagon_group, Coefficients, Word};
use tractor_bgg::tractor_numerics::bgg_ops::{codazzi_residual, d0_dual, SmoothField, TransportedDualScalar};
use tractor_bgg::tractor_numerics::holonomy::from_rows;
use tractor_bgg::tractor_numerics::klein::{christoffel, distance, lorentz_residual, metric_at, KleinPoint};
use tractor_bgg::tractor_numerics::{
    check_flatness, isometry_holonomy, normal_tractor_check, parallel_transport, quotient_holonomy, CurveSpec,
    Hypersurface, TractorVector,
};

fn pt(x: &[f64]) -> KleinPoint {
    KleinPoint::from_slice(x).unwrap()
}

fn shifted(p: &KleinPoint, i: usize, h: f64) -> KleinPoint {
    let mut x = p.coords().clone();
    x[i] += h;
    KleinPoint::new(x).unwrap()
}

/// Levi-Civita symbols from central differences of the metric.
fn christoffel_fd(p: &KleinPoint, h: f64) -> Vec<DMatrix<f64>> {
    let n = p.dim();
    let dg: Vec<DMatrix<f64>> =
        (0..n).map(|i| (metric_at(&shifted(p, i, h)) - metric_at(&shifted(p, i, -h))) / (2.0 * h)).collect();
    let ginv = metric_at(p).try_inverse().unwrap();
    (0..n)
        .map(|k| {
            DMatrix::from_fn(n, n, |i, j| {
                (0..n).map(|l| 0.5 * ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)])).sum()
            })
        })
        .collect()
}

/// `R^l_{ijk}` from the closed-form symbols and their differences.
fn riemann(p: &KleinPoint, h: f64) -> Vec<Vec<Vec<Vec<f64>>>> {
    let n = p.dim();
    let g0 = christoffel(p);
    let dgam: Vec<Vec<DMatrix<f64>>> = (0..n)
        .map(|i| {
            let (a, b) = (christoffel(&shifted(p, i, h)), christoffel(&shifted(p, i, -h)));
            (0..n).map(|l| (&a[l] - &b[l]) / (2.0 * h)).collect()
        })
        .collect();
    let mut r = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = dgam[i][l][(j, k)] - dgam[j][l][(i, k)];
                    for m in 0..n {
                        v += g0[l][(i, m)] * g0[m][(j, k)] - g0[l][(j, m)] * g0[m][(i, k)];
                    }
                    r[l][i][j][k] = v;
                }
            }
        }
    }
    r
}

#[test]
fn christoffel_symbols_match_the_metric() {
    for x in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.1], [0.6, 0.1, -0.5]] {
        let p = pt(&x);
        let fd = christoffel_fd(&p, 1e-5);
        for (a, b) in christoffel(&p).iter().zip(&fd) {
            assert!((a - b).amax() < 1e-6, "{x:?}");
        }
    }
}

#[test]
fn curvature_is_minus_one() {
    for x in [[0.0, 0.0, 0.0], [0.2, 0.4, -0.1], [-0.5, 0.3, 0.5]] {
        let p = pt(&x);
        let g = metric_at(&p);
        let r = riemann(&p, 1e-5);
        let n = p.dim();
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let d = |a: usize, b: usize| f64::from(u8::from(a == b));
                        let expect = -(g[(j, k)] * d(l, i) - g[(i, k)] * d(l, j));
                        assert!((r[l][i][j][k] - expect).abs() < 1e-5 * g.amax(), "{x:?} {l}{i}{j}{k}");
                    }
                }
            }
        }
    }
}

#[test]
fn parallel_transport_keeps_the_tractor_norm() {
    let curve = CurveSpec::new(vec![pt(&[0.0, 0.0]), pt(&[0.5, 0.2]), pt(&[-0.3, 0.6])], 1e-3).unwrap();
    let sigma = TractorVector::new(curve.start().clone(), DVector::from_vec(vec![0.3, -1.0]), 0.7).unwrap();
    let out = parallel_transport(&curve, &sigma).unwrap();
    assert!((out.norm_squared() - sigma.norm_squared()).abs() < 1e-9);
}

#[test]
fn small_loops_have_quadratically_small_holonomy() {
    let r = check_flatness(&KleinPoint::origin(2), 1.0, 3, 1e-3).unwrap();
    assert!(r.deviations.iter().all(|&d| d < 1e-6), "{:?}", r.deviations);
    assert!(r.shrink_ratios.iter().all(|&q| q >= 4.0), "{:?}", r.shrink_ratios);
}

#[test]
fn generator_holonomy_is_the_generator() {
    let g = octagon_group();
    let x0 = KleinPoint::origin(2);
    for (i, m) in g.geometric.iter().enumerate() {
        let h = quotient_holonomy(&g, &Word::letter(i, false), &x0, 1e-3, None).unwrap();
        assert!((from_rows(&h.matrix) - m).amax() < 1e-6, "generator {i}");
    }
}

#[test]
fn holonomy_of_the_relator_is_trivial() {
    let g = octagon_group();
    let h = quotient_holonomy(&g, &g.presentation.relator, &KleinPoint::origin(2), 1e-3, None).unwrap();
    assert!((from_rows(&h.matrix) - DMatrix::identity(3, 3)).amax() < 1e-6);
}

#[test]
fn normal_tractor_parallel_only_on_totally_geodesic_slices() {
    let plane = Hypersurface::Hyperplane { normal: vec![0.3, -1.0, 0.5], offset: 0.2 };
    assert!(normal_tractor_check(&plane, 12, 1, 1e-4).unwrap().max_deviation < 1e-8);
    let sphere = Hypersurface::Sphere { dim: 3, radius: 1.0 };
    let r = normal_tractor_check(&sphere, 12, 1, 1e-4).unwrap();
    // umbilic with second fundamental form coth(R) g
    assert!((r.max_deviation - 1f64.tanh().recip()).abs() < 1e-4, "{}", r.max_deviation);
}

#[test]
fn degenerate_hypersurfaces_are_rejected() {
    let far = Hypersurface::Hyperplane { normal: vec![1.0, 0.0], offset: 0.95 };
    assert!(normal_tractor_check(&far, 4, 1, 1e-4).is_err());
    let flat = Hypersurface::Hyperplane { normal: vec![0.0, 0.0], offset: 0.0 };
    assert!(normal_tractor_check(&flat, 4, 1, 1e-4).is_err());
}

#[test]
fn transported_dual_tractors_solve_d0() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..3 {
        let phi = DVector::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
        let base = pt(&[rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)]);
        let s = TransportedDualScalar::new(&phi, base.clone(), 1e-3).unwrap();
        let d = d0_dual(&|x| s.scalar(x), &base, 1e-3).unwrap();
        assert!(d.amax() < 1e-4, "{}", d.amax());
    }
}

#[test]
fn d1_kills_the_image_of_d0() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let f = SmoothField::random(2, &mut rng);
    let p = pt(&[0.2, -0.1]);
    let u = |x: &DVector<f64>| d0_dual(&|y| f.value(y), &KleinPoint::new(x.clone())?, 1e-3);
    assert!(codazzi_residual(&u, &p, 1e-3).unwrap() < 1e-3);
}

fn boost(axis: usize, t: f64) -> DMatrix<f64> {
    let mut a = DMatrix::identity(3, 3);
    a[(axis, axis)] = t.cosh();
    a[(2, 2)] = t.cosh();
    a[(axis, 2)] = t.sinh();
    a[(2, axis)] = t.sinh();
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn metric_dominates_the_euclidean_one(r in 0.0f64..0.95, theta in 0.0f64..6.3) {
        let p = pt(&[r * theta.cos(), r * theta.sin()]);
        let ev = metric_at(&p).symmetric_eigenvalues();
        prop_assert!(ev.iter().all(|&e| e >= 1.0 - 1e-12));
    }

    #[test]
    fn holonomy_reads_back_any_isometry(s in -0.8f64..0.8, t in -0.8f64..0.8, x in -0.3f64..0.3, y in -0.3f64..0.3) {
        let g = boost(0, s) * boost(1, t);
        prop_assert!(lorentz_residual(&g) < 1e-12);
        let (h, _) = isometry_holonomy(&g, Coefficients::Defining, &pt(&[x, y]), 1e-2, None).unwrap();
        prop_assert!((h - &g).amax() < 1e-6);
    }

    #[test]
    fn distance_is_symmetric_and_positive(a in -0.6f64..0.6, b in -0.6f64..0.6, c in -0.6f64..0.6) {
        let (p, q) = (pt(&[a, b]), pt(&[c, a * b]));
        let d = distance(&p, &q);
        prop_assert!((d - distance(&q, &p)).abs() < 1e-12);
        prop_assert!(d >= 0.0);
    }
}
