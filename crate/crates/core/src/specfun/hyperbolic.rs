//! Hyperbolic majorants of `φ` on `y ≥ 1`. Ratios are written through
//! `e^{-πy}` so nothing overflows for large `y`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn check(y: f64, name: &str) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} requires y > 0, got {y}")))
    }
}

/// `e^{-2t}` and `1 − e^{-2t}` for `t = πy/2`.
fn decay(y: f64) -> (f64, f64) {
    let two_t = PI * y;
    ((-two_t).exp(), -(-two_t).exp_m1())
}

/// `ψ(y) = coth(πy/2)`.
pub fn psi(y: f64) -> Result<f64> {
    check(y, "psi")?;
    let (e, d) = decay(y);
    Ok((1.0 + e) / d)
}

/// `ψ′(y) = −(π/2) / sinh²(πy/2)`.
pub fn psi_prime(y: f64) -> Result<f64> {
    check(y, "psi_prime")?;
    let (e, d) = decay(y);
    Ok(-2.0 * PI * e / (d * d))
}

/// `g(y) = π y² cosh(πy/2) / sinh³(πy/2)`.
pub fn g_fun(y: f64) -> Result<f64> {
    check(y, "g_fun")?;
    let (e, d) = decay(y);
    if e == 0.0 {
        return Ok(0.0);
    }
    Ok(PI * y * y * 4.0 * e * (1.0 + e) / (d * d * d))
}

/// `h(y) = π y^{5/2} cosh²(πy/2) / sinh⁴(πy/2)` with the prefactor `π`.
///
/// Differentiating `coth` gives `−y^{5/2}ψ²ψ′` with prefactor `π/2`
/// instead; see [`h_fun_derived`].
pub fn h_fun(y: f64) -> Result<f64> {
    check(y, "h_fun")?;
    let (e, d) = decay(y);
    if e == 0.0 {
        return Ok(0.0);
    }
    Ok(4.0 * PI * y.powf(2.5) * e * (1.0 + e) * (1.0 + e) / (d * d * d * d))
}

/// `−y^{5/2} ψ(y)² ψ′(y)` evaluated from [`psi`] and [`psi_prime`].
pub fn h_fun_derived(y: f64) -> Result<f64> {
    let p = psi(y)?;
    Ok(-y.powf(2.5) * p * p * psi_prime(y)?)
}
