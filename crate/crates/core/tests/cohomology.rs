use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use tractor_bgg::group_cohomology::cache::{cached_octagon_group, GroupCache};
use tractor_bgg::group_cohomology::{
    coefficient_action, cohomology_report, euler_oracle, geodesic_cocycle, h0_dim, is_coboundary, octagon_group,
    relator_constraint_residual, CocycleOptions, Coefficients, GroupCocycle, GroupPresentation, Word,
};
use tractor_bgg::linalg::RankTolerance;
use tractor_bgg::vz_branching::{vanishing_profile, SoIrrep};

fn boost(axis: usize, t: f64) -> DMatrix<f64> {
    let mut a = DMatrix::identity(3, 3);
    a[(axis, axis)] = t.cosh();
    a[(2, 2)] = t.cosh();
    a[(axis, 2)] = t.sinh();
    a[(2, axis)] = t.sinh();
    a
}

#[test]
fn coefficient_modules_have_odd_dimension_and_keep_their_form() {
    let g = octagon_group();
    for k in 0..=4 {
        let r = coefficient_action(&g, Coefficients::TraceFree(k)).unwrap();
        assert_eq!(r.coefficient_dim(), 2 * k + 1);
        assert!(r.form_residual() < 1e-12, "k={k}: {}", r.form_residual());
        assert!(r.relator_residual() < 1e-6, "k={k}: {}", r.relator_residual());
    }
}

#[test]
fn first_cohomology_matches_euler_characteristic() {
    let g = octagon_group();
    for (k, h1) in [(1, 6), (2, 10), (3, 14)] {
        let r =
            cohomology_report(&coefficient_action(&g, Coefficients::TraceFree(k)).unwrap(), RankTolerance::default())
                .unwrap();
        assert_eq!(r.h0, 0);
        assert_eq!(r.h1, h1);
        assert_eq!(r.h1 as i64, euler_oracle(2, 2 * k + 1, 0));
        assert!(r.min_gap >= 1e3);
    }
}

#[test]
fn invariants_vanish_where_the_band_says() {
    let g = octagon_group();
    for k in 1..=3 {
        let rep = coefficient_action(&g, Coefficients::TraceFree(k)).unwrap();
        assert_eq!(h0_dim(&rep, RankTolerance::default()).unwrap(), 0);
        let band = vanishing_profile(&SoIrrep::trace_free_power(2, k).unwrap());
        assert!(band.contains(&0) && band.contains(&2));
    }
}

#[test]
fn crossing_cocycle_is_a_nontrivial_class() {
    let g = octagon_group();
    for k in 1..=2 {
        let r = geodesic_cocycle(&g, 0, k, &CocycleOptions::default()).unwrap();
        assert!(r.relator_residual < 1e-6, "k={k}: {}", r.relator_residual);
        let (trivial, residual) = is_coboundary(&r.cocycle, &r.representation, 1e-6);
        assert!(!trivial && residual > 1e-4, "k={k}: {residual}");
        assert!(r.simplicity_margin > 1.0);
    }
}

#[test]
fn adding_a_coboundary_keeps_the_cocycle_condition() {
    let g = octagon_group();
    let r = geodesic_cocycle(&g, 1, 1, &CocycleOptions::default()).unwrap();
    let shift = GroupCocycle::coboundary(&r.representation, &DVector::from_vec(vec![0.4, -0.2, 1.1]));
    let c = r.cocycle.sub(&shift);
    assert!(relator_constraint_residual(&c, &r.representation) < 1e-6);
    assert!(!is_coboundary(&c, &r.representation, 1e-6).0);
}

#[test]
fn cocycle_rejects_a_foreign_group() {
    let g = octagon_group().conjugate(&boost(0, 0.3)).unwrap();
    assert!(geodesic_cocycle(&g, 0, 1, &CocycleOptions::default()).is_err());
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("groups.json");
    let fresh = cached_octagon_group(Some(&path)).unwrap();
    assert!(path.exists());
    let cache = GroupCache::load(&path).unwrap();
    assert_eq!(cache.groups.len(), 1);
    let again = cached_octagon_group(Some(&path)).unwrap();
    for (a, b) in fresh.geometric.iter().zip(&again.geometric) {
        assert!((a - b).amax() < 1e-14);
    }
}

#[test]
fn corrupt_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("groups.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert!(cached_octagon_group(Some(&path)).is_err());
}

#[test]
fn fox_derivatives_of_the_surface_relator() {
    let p = GroupPresentation::surface(2);
    for i in 0..4 {
        assert_eq!(GroupPresentation::fox_derivative(&p.relator, i).len(), 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cohomology_is_conjugation_invariant(s in -0.6f64..0.6, t in -0.6f64..0.6, k in 1usize..=2) {
        let g = coefficient_action(&octagon_group(), Coefficients::TraceFree(k)).unwrap();
        let a = boost(0, s) * boost(1, t);
        let h = g.conjugate(&a).unwrap();
        let tol = RankTolerance::default();
        let (r, q) = (cohomology_report(&g, tol).unwrap(), cohomology_report(&h, tol).unwrap());
        prop_assert_eq!((r.h0, r.h1), (q.h0, q.h1));
        let v = DVector::from_fn(2 * k + 1, |i, _| (i as f64 + s).sin());
        let c = GroupCocycle::coboundary(&h, &v);
        prop_assert!(is_coboundary(&c, &h, 1e-6).0);
    }

    #[test]
    fn word_inverse_cancels(letters in proptest::collection::vec((0usize..4, any::<bool>()), 0..8)) {
        let w = Word(letters.into_iter().map(|(g, inv)| tractor_bgg::group_cohomology::Letter { generator: g, inverse: inv }).collect()).reduced();
        prop_assert!(w.concat(&w.inverse()).is_empty());
        let g = octagon_group();
        let a = g.eval(&w);
        let m = &a * g.eval(&w.inverse());
        prop_assert!((m - DMatrix::identity(3, 3)).amax() < 1e-13 * a.amax().powi(2));
    }
}
