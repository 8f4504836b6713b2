use std::f64::consts::PI;

use latmon_core::bounds::*;
use latmon_core::latsum::{evaluate, limit_value, LatticeSumQuery, Method};
use latmon_core::monotone::{condmon, suff3};
use latmon_core::orthofam::*;
use latmon_core::specfun::{phi, phi_prime};
use latmon_core::{lattice, Tolerance};
use proptest::prelude::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(256))]

    #[test]
    fn functional_relation(x in 0.1f64..10.0) {
        let r = phi(x).unwrap() - phi(1.0 / x).unwrap() / x.sqrt();
        prop_assert!(r.abs() < 1e-12);
        prop_assert!(phi_prime(x).unwrap() < 0.0);
    }

    #[test]
    fn tolerance_allowance_is_satisfied(abs in 0.0f64..1.0, rel in 0.0f64..1.0, v in -1e3f64..1e3) {
        prop_assume!(abs > 0.0 || rel > 0.0);
        let t = Tolerance::new(abs, rel).unwrap();
        prop_assert!(t.is_satisfied(t.allowance(v), v));
    }

    #[test]
    fn monotonicity_conditions_positive(ly in -6.9f64..4.6) {
        let y = ly.exp();
        prop_assert!(condmon(y).unwrap().is_positive());
        prop_assert!(suff3(y).unwrap() > 0.0);
    }

    #[test]
    fn lifschitz_below_root(a in 0.01f64..10.0, b in -10.0f64..100.0, c in 0.0f64..1e3) {
        let curve = QCurve::new(QKind::Generic, a, b, c).unwrap();
        if let Ok(r) = n_lifschitz_scan(&curve) {
            prop_assert!(r.within_root);
            prop_assert!(r.n_l >= r.n as f64 && r.n_l < r.n as f64 + 1.0);
        }
    }

    #[test]
    fn grashof_is_linear_in_forcing(nu in 1e-3f64..10.0, area in 1e-2f64..1e2, f in 0.0f64..1e3, s in 0.0f64..100.0) {
        let g = grashof(&PhysicalParams::navier_stokes(nu, area, f)).unwrap();
        let gs = grashof(&PhysicalParams::navier_stokes(nu, area, s * f)).unwrap();
        prop_assert!((gs - s * g).abs() <= 1e-13 * gs.abs().max(1e-300));
    }

    #[test]
    fn li_yau_below_no_li_yau(clt in (1.0 / (2.0 * PI))..5.0, g in 1.0f64..1e8) {
        let p = PhysicalParams::navier_stokes(1.0, 1.0, g);
        let a = dim_bound_ns2d(&p, clt, Ns2dVariant::LiYau).unwrap();
        let b = dim_bound_ns2d(&p, clt, Ns2dVariant::NoLiYau).unwrap();
        prop_assert!(a < b);
    }

    #[test]
    fn alpha_bounds_decrease(gamma in 0.01f64..10.0, alpha in 0.01f64..10.0, s in 1.001f64..3.0, g in 0.1f64..10.0, curl in 0.1f64..10.0) {
        for (d, bc) in [(2, BoundaryCondition::NoBoundary), (2, BoundaryCondition::ProperDomain), (3, BoundaryCondition::NoBoundary)] {
            let at = |ga: f64, al: f64| dim_bound_alpha(d, bc, &PhysicalParams::alpha_model(ga, al, Some(g), Some(curl))).unwrap().value;
            prop_assert!(at(gamma * s, alpha) < at(gamma, alpha));
            prop_assert!(at(gamma, alpha * s) <= at(gamma, alpha));
        }
    }

    #[test]
    fn babenko_factor_in_unit_interval(q in 2.0001f64..100.0) {
        let b = babenko_factor(q).unwrap();
        prop_assert!(b > 0.0 && b < 1.0);
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn two_dimensional_sum_below_one(p in 1.05f64..6.0, m in 0.05f64..30.0) {
        let q = LatticeSumQuery::new(2, p, m, Tolerance::default()).unwrap();
        let b = evaluate(&q, Method::BesselSeries).unwrap().value;
        let t = evaluate(&q, Method::ThetaIntegral).unwrap().value;
        prop_assert!(b > 0.0 && b < 1.0);
        prop_assert!((b - t).abs() <= 1e-9);
    }

    #[test]
    fn three_dimensional_sum_below_limit(p in 1.55f64..5.0, m in 0.05f64..30.0) {
        let q = LatticeSumQuery::new(3, p, m, Tolerance::default()).unwrap();
        let v = evaluate(&q, Method::ThetaIntegral).unwrap().value;
        prop_assert!(v > 0.0 && v < limit_value(3, p).unwrap());
    }

    #[test]
    fn shell_counts_match_symmetry(k in 1u64..20_000) {
        let t2 = lattice::shared(2, 20_000).unwrap();
        let t3 = lattice::shared(3, 20_000).unwrap();
        prop_assert_eq!(t2.count(k).unwrap() % 4, 0);
        prop_assert_eq!(t3.count(k).unwrap() % 2, 0);
        prop_assert!(t2.cumulative(k) >= t2.cumulative(k - 1));
    }

    #[test]
    fn families_are_orthonormal(n in 1usize..12, m in 0.2f64..4.0, k_max in 2u32..8, seed in any::<u64>()) {
        let fam = random_ortho_family(n, m, k_max, seed).unwrap();
        prop_assert!(fam.gram_residual < 1e-10);
        let grid = default_grid(1.0, k_max);
        let integral = rho_lp_norm(&fam, 1.0, grid).unwrap();
        let coeffs: f64 = fam.fields.iter().map(FourierField::l2_norm_sq).sum();
        prop_assert!((integral - coeffs).abs() < 1e-10);
        prop_assert!(check_liebd2(&fam, 2.0).unwrap().holds);
    }

    #[test]
    fn interpolation_inequality(seed in any::<u64>(), k_max in 1u32..6, qi in 0usize..4) {
        let q = [3.0, 4.0, 6.0, 10.0][qi];
        let c = check_gagnir(&random_field(k_max, seed).unwrap(), q).unwrap();
        prop_assert!(c.all_hold(), "{:?}", c);
    }
}
