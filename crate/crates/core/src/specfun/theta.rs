use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::ShellTable;

const SERIES_EPS: f64 = 1e-18;

/// `θ₃(q) = Σ_{n∈Z} q^{n²}` for `0 ≤ q < 1`, summed until the next term is
/// below `1e-18` relative to the partial sum.
pub fn theta3(q: f64) -> Result<f64> {
    theta3_with_tol(q, SERIES_EPS)
}

/// `θ₃(q)` summed until the next term drops below `abs_tol / 10`.
pub fn theta3_with_tol(q: f64, abs_tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::domain(format!("theta3 requires 0 <= q < 1, got {q}")));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::domain("theta3 tolerance must be positive"));
    }
    if q == 0.0 {
        return Ok(1.0);
    }
    let rate = -q.ln();
    let mut sum = 1.0;
    let mut n = 1.0_f64;
    loop {
        let term = 2.0 * (-rate * n * n).exp();
        if term < 0.1 * abs_tol * sum {
            break;
        }
        sum += term;
        n += 1.0;
    }
    Ok(sum)
}

/// `Σ_{n≥1} n^power e^{-π n² x}` for `x ≥ 1`; at most a handful of terms.
fn tail_series(x: f64, power: i32) -> f64 {
    debug_assert!(x >= 1.0);
    let mut sum = 0.0;
    let mut n = 1.0_f64;
    loop {
        let term = n.powi(power) * (-PI * n * n * x).exp();
        sum += term;
        if term <= SERIES_EPS * sum || term == 0.0 {
            return sum;
        }
        n += 1.0;
    }
}

/// `Σ_{n≥1} n^power e^{-π(n²−1)x}`, i.e. [`tail_series`] divided by `e^{-πx}`.
pub(crate) fn tail_series_scaled(x: f64, power: i32) -> f64 {
    debug_assert!(x >= 1.0);
    let mut sum = 0.0;
    let mut n = 1.0_f64;
    loop {
        let term = n.powi(power) * (-PI * (n * n - 1.0) * x).exp();
        sum += term;
        if term <= SERIES_EPS * sum || term == 0.0 {
            return sum;
        }
        n += 1.0;
    }
}

fn check_positive(x: f64, name: &str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} requires x > 0, got {x}")))
    }
}

/// `φ(x) = θ₃(e^{-πx})`. Arguments below 1 go through `φ(x) = φ(1/x)/√x`,
/// so the series is only ever summed at arguments `≥ 1`.
pub fn phi(x: f64) -> Result<f64> {
    check_positive(x, "phi")?;
    if x >= 1.0 {
        Ok(1.0 + 2.0 * tail_series(x, 0))
    } else {
        let inv = 1.0 / x;
        Ok((1.0 + 2.0 * tail_series(inv, 0)) / x.sqrt())
    }
}

/// `φ(x) − 1` without cancellation for large `x`.
pub fn phi_minus_one(x: f64) -> Result<f64> {
    check_positive(x, "phi_minus_one")?;
    if x >= 1.0 {
        Ok(2.0 * tail_series(x, 0))
    } else {
        Ok(phi(x)? - 1.0)
    }
}

/// `φ′(x) = −2π Σ_{n≥1} n² e^{-πn²x}`; below 1 by differentiating the
/// functional relation: `φ′(x) = −½x^{-3/2}φ(1/x) − x^{-5/2}φ′(1/x)`.
pub fn phi_prime(x: f64) -> Result<f64> {
    check_positive(x, "phi_prime")?;
    if x >= 1.0 {
        Ok(-2.0 * PI * tail_series(x, 2))
    } else {
        let inv = 1.0 / x;
        let phi_inv = 1.0 + 2.0 * tail_series(inv, 0);
        let dphi_inv = -2.0 * PI * tail_series(inv, 2);
        Ok(-0.5 * inv.powf(1.5) * phi_inv - inv.powf(2.5) * dphi_inv)
    }
}

/// `(φ²)′(y) = −π Σ_k k r₂(k) e^{-πky}` summed over the shells of a 2D table.
///
/// Fails with [`Error::Cutoff`] when the geometric tail bound beyond the
/// table is not below `1e-15` of the computed value.
pub fn phi_sq_prime_lattice(y: f64, shells: &ShellTable) -> Result<f64> {
    check_positive(y, "phi_sq_prime_lattice")?;
    if shells.dimension() != 2 {
        return Err(Error::domain("phi_sq_prime_lattice needs a 2D shell table"));
    }
    let kmax = shells.max_norm_sq();
    let mut sum = 0.0;
    // smallest terms first
    for (k, r) in shells.nonzero_shells().rev() {
        let kf = k as f64;
        sum += kf * r as f64 * (-PI * kf * y).exp();
    }
    // r₂(k) ≤ 2(2√k + 1); successive ratio bounded by ((K+2)/(K+1))² e^{-πy}
    let k1 = (kmax + 1) as f64;
    let ratio = ((k1 + 1.0) / k1).powi(2) * (-PI * y).exp();
    let tail = if ratio < 1.0 {
        k1 * 2.0 * (2.0 * k1.sqrt() + 1.0) * (-PI * k1 * y).exp() / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    if tail > 1e-15 * sum && tail > f64::MIN_POSITIVE {
        return Err(Error::Cutoff(format!(
            "shell table up to |n|² = {kmax} leaves tail bound {tail:e} at y = {y}"
        )));
    }
    Ok(-PI * sum)
}
