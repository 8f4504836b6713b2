use std::f64::consts::PI;

use latmon_core::latsum::*;
use latmon_core::lattice::ShellTable;
use latmon_core::{Error, Tolerance};

fn query(d: u32, p: f64, m: f64) -> LatticeSumQuery {
    LatticeSumQuery::new(d, p, m, Tolerance::default()).unwrap()
}

fn value(d: u32, p: f64, m: f64, method: Method) -> f64 {
    evaluate(&query(d, p, m), method).unwrap().value
}

const P2: [f64; 5] = [1.25, 1.5, 2.0, 3.0, 5.0];
const M2: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];

#[test]
fn three_methods_agree_in_2d() {
    for p in P2 {
        for m in M2 {
            let v: Vec<f64> = Method::ALL.iter().map(|&meth| value(2, p, m, meth)).collect();
            let scale = v[0].abs().max(1.0);
            for i in 0..3 {
                for j in i + 1..3 {
                    assert!((v[i] - v[j]).abs() <= 1e-9 * scale, "p {p} m {m}: {v:?}");
                }
            }
            assert!(v.iter().all(|&x| x < 1.0));
        }
    }
}

#[test]
fn two_methods_agree_in_3d() {
    for p in [1.6, 2.0, 3.0] {
        let limit = limit_value(3, p).unwrap();
        for m in [0.5, 1.0, 5.0] {
            let d = value(3, p, m, Method::Direct);
            let t = value(3, p, m, Method::ThetaIntegral);
            assert!((d - t).abs() <= 1e-8 * d.abs().max(1.0), "p {p} m {m}: {d} vs {t}");
            assert!(d < limit);
        }
    }
}

#[test]
fn bessel_is_two_dimensional_only() {
    assert!(matches!(evaluate(&query(3, 2.0, 1.0), Method::BesselSeries), Err(Error::Domain(_))));
}

#[test]
fn zero_shift_short_circuits() {
    for (d, p) in [(2, 1.1), (2, 4.0), (3, 1.6), (3, 3.0)] {
        for meth in Method::ALL {
            if d == 3 && meth == Method::BesselSeries {
                continue;
            }
            let r = evaluate(&query(d, p, 0.0), meth).unwrap();
            assert_eq!((r.value, r.error_bound), (0.0, 0.0));
        }
    }
}

#[test]
fn thresholds_are_enforced() {
    let t = Tolerance::default();
    assert!(LatticeSumQuery::new(2, 1.0, 1.0, t).is_err());
    assert!(LatticeSumQuery::new(3, 1.4, 1.0, t).is_err());
    assert!(LatticeSumQuery::new(3, 1.5, 1.0, t).is_err());
    assert!(LatticeSumQuery::new(4, 3.0, 1.0, t).is_err());
    assert!(LatticeSumQuery::new(2, 2.0, -1.0, t).is_err());
    assert!(LatticeSumQuery::new(2, 2.0, f64::NAN, t).is_err());
}

#[test]
fn bessel_leading_terms_at_large_m() {
    let v = value(2, 2.0, 10.0, Method::BesselSeries);
    assert!((v - (1.0 - 1.0 / (100.0 * PI))).abs() < 1e-15);
    assert!((v - 0.996_816_9).abs() < 1e-7);
    let v = value(2, 3.0, 20.0, Method::BesselSeries);
    assert!(((1.0 - v) * PI * 400.0 / 2.0 - 1.0).abs() < 1e-8);
}

#[test]
fn three_dimensional_limit() {
    assert!((limit_value(3, 2.0).unwrap() - PI * PI).abs() < 1e-13);
    let v = value(3, 2.0, 50.0, Method::ThetaIntegral);
    assert!((v - PI * PI).abs() < 1e-3 && v < PI * PI);
    assert_eq!(limit_value(2, 1.7).unwrap(), 1.0);
}

#[test]
fn two_dimensional_limit() {
    for p in [2.0, 3.0] {
        let v = value(2, p, 100.0, Method::BesselSeries);
        assert!((1.0 - v) < 1e-4 && v < 1.0);
        let rate = (1.0 - value(2, p, 50.0, Method::BesselSeries)) * PI * 2500.0 / (p - 1.0);
        assert!((rate - 1.0).abs() < 1e-6);
    }
}

#[test]
fn brute_force_oracle() {
    // plain summation over |n|² ≤ 2000², no tail model
    let q = query(2, 2.0, 1.0);
    let shells = ShellTable::build(2, 4_000_000).unwrap();
    let raw: f64 = shells.nonzero_shells().rev().map(|(k, c)| c as f64 / (1.0 + k as f64).powi(2)).sum();
    let plain = q.prefactor() * raw;
    // the discarded tail is about π/(1 + 4e6)
    let tail = PI / (1.0 + 4e6) / PI;
    let v = value(2, 2.0, 1.0, Method::Direct);
    assert!((plain + tail - v).abs() < 1e-9, "{plain} + {tail} vs {v}");
}

#[test]
fn truncation_bound_is_rigorous() {
    let tol = Tolerance::absolute(1.0).unwrap();
    for (d, p, m) in [(2, 2.0, 1.0), (2, 1.5, 0.5), (3, 2.0, 1.0), (3, 3.0, 2.0)] {
        let q = LatticeSumQuery::new(d, p, m, tol).unwrap();
        let reference = value(d, p, m, Method::ThetaIntegral);
        let small = ShellTable::build(d, 400).unwrap();
        let r = direct_sum_with(&q, &small, TailModel::Truncate).unwrap();
        assert_eq!(r.bound_kind, BoundKind::Rigorous);
        assert!(r.value <= reference && reference - r.value <= r.error_bound, "{d} {p} {m}: {r:?}");
    }
}

#[test]
fn too_small_table_is_a_cutoff_error() {
    let q = LatticeSumQuery::new(2, 1.25, 0.1, Tolerance::absolute(1e-12).unwrap()).unwrap();
    let small = ShellTable::build(2, 64).unwrap();
    assert!(matches!(direct_sum(&q, &small), Err(Error::Cutoff(_))));
}

#[test]
fn error_bounds_cover_the_cross_method_gap() {
    for p in [1.5, 3.0] {
        for m in [0.5, 2.0] {
            let q = query(2, p, m);
            let a = evaluate(&q, Method::BesselSeries).unwrap();
            let b = evaluate(&q, Method::ThetaIntegral).unwrap();
            assert!(a.error_bound <= 1e-12 && b.error_bound <= 1e-12);
            assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound + 1e-14);
        }
    }
}

#[test]
fn derivative_matches_finite_differences() {
    let h = 1e-4;
    for (d, p) in [(2, 2.0), (2, 1.25), (3, 2.0), (3, 1.6)] {
        for m in [0.5, 1.0, 3.0] {
            let q = query(d, p, m);
            let der = derivative_dm(&q).unwrap();
            let f = |mm: f64| value(d, p, mm, Method::ThetaIntegral);
            let fd = (f(m + h) - f(m - h)) / (2.0 * h);
            assert!(der > 0.0);
            assert!((der - fd).abs() <= 1e-5 * fd.abs(), "d {d} p {p} m {m}: {der} vs {fd}");
        }
    }
    let fd = (value(2, 2.0, 1.0 + h, Method::Direct) - value(2, 2.0, 1.0 - h, Method::Direct)) / (2.0 * h);
    assert!((derivative_dm(&query(2, 2.0, 1.0)).unwrap() - fd).abs() < 1e-5 * fd);
}

#[test]
fn monotone_along_coarse_slices() {
    for p in P2 {
        let mut prev = 0.0;
        for i in 0..=200 {
            let m = 0.1 + 0.1 * i as f64;
            let v = value(2, p, m, Method::BesselSeries);
            assert!(v > prev, "p {p} m {m}");
            prev = v;
        }
    }
    for p in [1.6, 2.0, 3.0] {
        let mut prev = 0.0;
        for i in 0..=100 {
            let m = 0.1 + 0.2 * i as f64;
            let v = value(3, p, m, Method::ThetaIntegral);
            assert!(v > prev, "p {p} m {m}");
            prev = v;
        }
    }
}

#[test]
fn cached_tables_reproduce_values() {
    let dir = std::env::temp_dir().join(format!("latmon-latsum-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let q = query(2, 1.5, 0.7);
    let a = evaluate_cached(&q, Method::Direct, Some(&dir)).unwrap();
    let b = evaluate_cached(&q, Method::Direct, Some(&dir)).unwrap();
    assert_eq!(a, b);
    assert!(std::fs::read_dir(&dir).unwrap().count() >= 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
