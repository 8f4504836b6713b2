use std::f64::consts::PI;

use latmon_core::lattice;
use latmon_core::specfun::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn gamma_reference_values() {
    assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
    assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
    assert!(rel(gamma(2.5).unwrap(), 0.75 * PI.sqrt()) < 1e-14);
    // (n−1)! up to 170 fits in f64; check a few against exact products
    let mut fact = 1.0f64;
    for n in 1..=40u32 {
        assert!(rel(gamma(n as f64).unwrap(), fact) < 1e-13, "n = {n}");
        fact *= n as f64;
    }
    assert!(gamma(0.0).is_err() && gamma(-1.5).is_err());
}

#[test]
fn theta_reference_values() {
    assert_eq!(theta3(0.0).unwrap(), 1.0);
    assert!((theta3((-PI).exp()).unwrap() - 1.086_434_811_213_308).abs() < 1e-14);
    let q = (-4.0 * PI).exp();
    let three_terms = 1.0 + 2.0 * q + 2.0 * q.powi(4);
    assert!((theta3(q).unwrap() - three_terms).abs() < 1e-16);
    assert!((theta3(q).unwrap() - 1.000_006_974_7).abs() < 1e-10);
    assert!(theta3(1.0).is_err() && theta3(-0.1).is_err());
}

#[test]
fn theta_functional_equation() {
    for i in 1..=100 {
        let x = 0.1 * i as f64;
        let r = (phi(x).unwrap() - phi(1.0 / x).unwrap() / x.sqrt()).abs();
        assert!(r < 1e-12, "x = {x}: {r}");
    }
    assert!((phi(0.25).unwrap() - 2.0 * phi(4.0).unwrap()).abs() < 1e-15);
    assert!(phi(50.0).unwrap() - 1.0 < 1e-60);
    assert!(phi_minus_one(50.0).unwrap() > 0.0 && phi_minus_one(50.0).unwrap() < 1e-60);
}

#[test]
fn phi_prime_values_and_differences() {
    let v = phi_prime(PI).unwrap();
    assert!((v + 3.249e-4).abs() < 5e-7, "{v}");
    let h = 1e-6;
    let fd = (phi(1.0 + h).unwrap() - phi(1.0 - h).unwrap()) / (2.0 * h);
    assert!(rel(fd, phi_prime(1.0).unwrap()) < 1e-6);
    for i in 0..=45 {
        let x = 0.5 + 0.1 * i as f64;
        let h = 1e-5 * x;
        let fd = (phi_minus_one(x + h).unwrap() - phi_minus_one(x - h).unwrap()) / (2.0 * h);
        let d = phi_prime(x).unwrap();
        assert!(d < 0.0);
        assert!(rel(fd, d) < 1e-6, "x = {x}");
    }
}

#[test]
fn phi_square_derivative_identity() {
    let shells = lattice::shared(2, 4096).unwrap();
    for i in 0..=97 {
        let y = 0.3 + 0.1 * i as f64;
        let lat = phi_sq_prime_lattice(y, &shells).unwrap();
        let pair = 2.0 * phi(y).unwrap() * phi_prime(y).unwrap();
        assert!((lat - pair).abs() < 1e-11, "y = {y}");
    }
    let at2 = phi_sq_prime_lattice(2.0, &shells).unwrap();
    let leading = -4.0 * PI * (-2.0 * PI).exp();
    assert!((leading + 0.023_467).abs() < 1e-6);
    // brute-force sum over |n_i| ≤ 10
    assert!((at2 + 0.023_554_624_554_908_91).abs() < 1e-15, "{at2}");
    assert!(phi_sq_prime_lattice(40.0, &shells).unwrap() < 0.0);
}

#[test]
fn hyperbolic_domination() {
    for i in 0..200 {
        let y = 1.0 + 0.05 * i as f64;
        assert!(psi(y).unwrap() >= phi(y).unwrap());
        let (dp, ds) = (phi_prime(y).unwrap(), psi_prime(y).unwrap());
        assert!(dp < 0.0 && dp >= ds, "y = {y}");
    }
    assert!((psi(60.0).unwrap() - 1.0).abs() < 1e-15);
    assert!(psi(0.0).is_err());
}

#[test]
fn psi_at_inverse_y_star() {
    let y_star = PI / (2.0 * (7.0f64).ln() / 2.0);
    assert!((psi(1.0 / y_star).unwrap() - 4.0 / 3.0).abs() < 1e-13);
}

#[test]
fn bessel_closed_forms_and_recurrence() {
    let k_half = |t: f64| (PI / (2.0 * t)).sqrt() * (-t).exp();
    for t in [0.05, 0.5, 1.0, 7.0, 50.0, 200.0] {
        assert!(rel(bessel_k(0.5, t).unwrap(), k_half(t)) < 1e-10, "t = {t}");
    }
    for nu in [1.0, 2.0, 5.0] {
        for t in [0.5, 1.0, 5.0, 20.0] {
            let up = bessel_k(nu + 1.0, t).unwrap();
            let r = (up - bessel_k(nu - 1.0, t).unwrap() - 2.0 * nu / t * bessel_k(nu, t).unwrap()).abs() / up;
            assert!(r < 1e-8, "nu = {nu}, t = {t}: {r}");
        }
    }
    let asym = bessel_k(1.0, 50.0).unwrap() * 50f64.exp() * (50.0 / (PI / 2.0)).sqrt();
    assert!((asym - 1.0).abs() < 0.02);
    assert!(bessel_k(1.0, 0.0).is_err());
}

#[test]
fn cap_f_limits() {
    assert!(rel(cap_f(0.5, 1.0).unwrap(), 0.461_068_5) < 1e-7);
    assert!((cap_f(1.0, 1e-3).unwrap() - 1.0).abs() < 1e-2);
    for p in [0.5, 1.5, 3.0] {
        let limit = 2f64.powf(p - 1.0) * gamma(p).unwrap();
        assert!(rel(cap_f(p, 1e-4).unwrap(), limit) < 1e-2, "p = {p}");
    }
    assert!(cap_f(1.0, 20.0 * PI).unwrap() < 1e-25);
}

#[test]
fn comparison_functions() {
    assert!((g_fun(PI).unwrap() - 0.0064).abs() < 5e-4);
    let y_star = PI / (7.0f64).ln();
    assert!((h_fun(y_star).unwrap() - 0.270).abs() < 5e-3);
    // the `π` prefactor is twice the one obtained by differentiation
    assert!((h_fun(y_star).unwrap() / h_fun_derived(y_star).unwrap() - 2.0).abs() < 1e-14);
    let mut prev = f64::INFINITY;
    for i in 0..=90 {
        let g = g_fun(1.0 + 0.1 * i as f64).unwrap();
        assert!(g > 0.0 && g < prev);
        prev = g;
    }
    let mut prev = f64::INFINITY;
    for i in 0..200 {
        let h = h_fun(5.0 / (2.0 * PI) + 0.05 * i as f64).unwrap();
        assert!(h > 0.0 && h < prev);
        prev = h;
    }
    assert_eq!(g_fun(1e4).unwrap(), 0.0);
}

#[test]
fn y_star_closed_form() {
    // arcoth(4/3) = ln 7 / 2
    let from_arcoth = PI / (2.0 * 0.5 * ((4.0f64 / 3.0 + 1.0) / (4.0 / 3.0 - 1.0)).ln());
    assert!((from_arcoth - PI / 7f64.ln()).abs() < 1e-15);
    assert!((from_arcoth - 1.6144).abs() < 5e-4);
}
