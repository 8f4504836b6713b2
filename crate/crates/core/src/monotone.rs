//! Pointwise conditions whose positivity makes `I_p(m)` increasing in `m`,
//! and grid certificates for them.
//!
//! * `condmon(y) = 2y²φ(y)φ′(y) + 1` (2D)
//! * `suff3(y)   = 3y^{5/2}φ(y)²φ′(y) + 2` (3D, sufficient form)
//! * `mono3(y)   = 2y^{5/2}φ(y)²φ′(y) + 1` (3D, the exact bracket of `dI/dm`)
//!
//! As `y → 0⁺` both `condmon` and `mono3` decay like `e^{-π/y}` and leave
//! the range of `f64` below `y ≈ 1.4e-3`; they are returned as
//! [`ScaledReal`] so that positivity can still be decided.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::theta::tail_series_scaled;
use crate::specfun::{g_fun, h_fun, h_fun_derived, phi, phi_prime, psi};
use crate::tolerance::Tolerance;

/// `mantissa · e^{ln_scale}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledReal {
    pub mantissa: f64,
    pub ln_scale: f64,
}

impl ScaledReal {
    pub fn plain(x: f64) -> Self {
        Self { mantissa: x, ln_scale: 0.0 }
    }

    /// The represented number; may underflow to zero.
    pub fn value(&self) -> f64 {
        self.mantissa * self.ln_scale.exp()
    }

    /// `ln |x|`, finite whenever the mantissa is nonzero.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.ln_scale
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa > 0.0
    }

    /// Total order on the represented numbers; NaN sorts below everything.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        let sign = |s: &Self| {
            if s.mantissa.is_nan() {
                -2
            } else if s.mantissa > 0.0 {
                1
            } else if s.mantissa < 0.0 {
                -1
            } else {
                0
            }
        };
        let (a, b) = (sign(self), sign(other));
        if a != b {
            return a.cmp(&b);
        }
        match a {
            1 => self.ln_abs().total_cmp(&other.ln_abs()),
            -1 => other.ln_abs().total_cmp(&self.ln_abs()),
            _ => Ordering::Equal,
        }
    }
}

fn check(y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("y must be positive and finite, got {y}")))
    }
}

/// Pieces of the small-`y` expansion in `t = 1/y > 1`, all scaled by `e^{πt}`.
struct Dual {
    /// `e^{-πt}`
    decay: f64,
    /// `φ(t)`
    phi: f64,
    /// `(φ(t) − 1) e^{πt} / 2`
    a0: f64,
    /// `−φ′(t) e^{πt} / (2π)`
    a2: f64,
}

impl Dual {
    fn at(t: f64) -> Self {
        let decay = (-PI * t).exp();
        let a0 = tail_series_scaled(t, 0);
        let a2 = tail_series_scaled(t, 2);
        Self { decay, phi: 1.0 + 2.0 * decay * a0, a0, a2 }
    }

    /// `condmon(1/t) e^{πt} = −2tφφ′ − (φ² − 1)`, scaled.
    fn condmon_mantissa(&self, t: f64) -> f64 {
        4.0 * PI * t * self.a2 * self.phi - 4.0 * self.a0 * (1.0 + self.decay * self.a0)
    }
}

/// `2y²φ(y)φ′(y) + 1`.
///
/// Below `y = 1` this is `Σ_{n∈Z²∖0} (π|n|²/y − 1) e^{-π|n|²/y}`, evaluated
/// as `−2tφ(t)φ′(t) − (φ(t)² − 1)` at `t = 1/y` with `e^{-πt}` factored out.
pub fn condmon(y: f64) -> Result<ScaledReal> {
    check(y)?;
    if y >= 1.0 {
        return Ok(ScaledReal::plain(2.0 * y * y * phi(y)? * phi_prime(y)? + 1.0));
    }
    let t = 1.0 / y;
    let d = Dual::at(t);
    Ok(ScaledReal { mantissa: d.condmon_mantissa(t), ln_scale: -PI * t })
}

/// `2y²φ(y)φ′(y) + 1` evaluated directly from `φ` and `φ′` for every `y`.
pub fn condmon_direct(y: f64) -> Result<f64> {
    check(y)?;
    Ok(2.0 * y * y * phi(y)? * phi_prime(y)? + 1.0)
}

/// `2y^{5/2}φ(y)²φ′(y) + 1`, the bracket in the 3D derivative.
///
/// Below `y = 1`, with `t = 1/y`, it equals `φ(t)·condmon(y) − (φ(t) − 1)`.
pub fn mono3(y: f64) -> Result<ScaledReal> {
    check(y)?;
    if y >= 1.0 {
        let f = phi(y)?;
        return Ok(ScaledReal::plain(2.0 * y.powf(2.5) * f * f * phi_prime(y)? + 1.0));
    }
    let t = 1.0 / y;
    let d = Dual::at(t);
    let mantissa = d.phi * d.condmon_mantissa(t) - 2.0 * d.a0;
    Ok(ScaledReal { mantissa, ln_scale: -PI * t })
}

/// `3y^{5/2}φ(y)²φ′(y) + 2`.
///
/// For `y ≤ π` it is rewritten as `(3/2) φ(1/y) (condmon(y) − 1) + 2`.
pub fn suff3(y: f64) -> Result<f64> {
    check(y)?;
    if y > PI {
        let f = phi(y)?;
        return Ok(3.0 * y.powf(2.5) * f * f * phi_prime(y)? + 2.0);
    }
    let c = condmon(y)?.value();
    Ok(1.5 * phi(1.0 / y)? * (c - 1.0) + 2.0)
}

/// Root of `ψ(1/y) = 4/3` on `[1, 2]` by bisection; equals `π / (2 arcoth(4/3)) = π / ln 7`.
pub fn find_y_star(tol: Tolerance) -> f64 {
    let f = |y: f64| psi(1.0 / y).expect("y > 0") - 4.0 / 3.0;
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    // f increases with y
    while hi - lo > tol.allowance(lo).max(4.0 * f64::EPSILON) {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `2y²φφ′ + 1`
    Condmon2d,
    /// `3y^{5/2}φ²φ′ + 2`
    Suff3_3d,
    /// `2y^{5/2}φ²φ′ + 1`
    Mono3_3d,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::Condmon2d => "condmon_2d",
            Condition::Suff3_3d => "suff3_3d",
            Condition::Mono3_3d => "mono3_3d",
        }
    }

    pub fn eval(self, y: f64) -> Result<ScaledReal> {
        match self {
            Condition::Condmon2d => condmon(y),
            Condition::Suff3_3d => suff3(y).map(ScaledReal::plain),
            Condition::Mono3_3d => mono3(y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub y_min: f64,
    pub y_max: f64,
    pub samples: usize,
    pub spacing: String,
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub condition: Condition,
    pub grid: SampleGrid,
    pub min_value: ScaledReal,
    pub min_location: f64,
    pub violations: Vec<f64>,
    pub named_constants: BTreeMap<String, f64>,
}

impl CertificateReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Named constants of the certificate chain: `y*`, `g(π)`, `h(y*)` (prefactor `π`) and
/// the derived-convention `h`.
pub fn named_constants() -> BTreeMap<String, f64> {
    let y_star = find_y_star(Tolerance::absolute(1e-15).unwrap());
    let mut out = BTreeMap::new();
    out.insert("y_star".to_string(), y_star);
    out.insert("g_at_pi".to_string(), g_fun(PI).unwrap());
    out.insert("h_at_y_star".to_string(), h_fun(y_star).unwrap());
    out.insert("h_derived_at_y_star".to_string(), h_fun_derived(y_star).unwrap());
    out
}

const CHUNK: usize = 4096;
const GOLDEN_TOL: f64 = 1e-6;

fn eval_or_nan(c: Condition, y: f64) -> ScaledReal {
    c.eval(y).unwrap_or(ScaledReal::plain(f64::NAN))
}

/// Evaluate `condition` on `samples` log-spaced points of `[y_min, y_max]`.
/// Points where the value is `≤ 0` (or not a number) are violations; with
/// `refine`, a golden-section search polishes the sampled minimum.
pub fn certify(
    condition: Condition,
    y_min: f64,
    y_max: f64,
    samples: usize,
    refine: bool,
) -> Result<CertificateReport> {
    if !(y_min > 0.0 && y_min < y_max && y_max.is_finite()) {
        return Err(Error::domain(format!("need 0 < y_min < y_max, got [{y_min}, {y_max}]")));
    }
    if samples < 2 {
        return Err(Error::domain("at least two samples are needed"));
    }
    let (l0, l1) = (y_min.ln(), y_max.ln());
    let step = (l1 - l0) / (samples - 1) as f64;
    let y_at = |i: usize| if i + 1 == samples { y_max } else { (l0 + step * i as f64).exp() };

    let chunks: Vec<(usize, ScaledReal, Vec<f64>)> = (0..samples)
        .collect::<Vec<_>>()
        .par_chunks(CHUNK)
        .map(|idx| {
            let mut best = (idx[0], ScaledReal::plain(f64::INFINITY));
            let mut bad = Vec::new();
            for &i in idx {
                let y = y_at(i);
                let v = eval_or_nan(condition, y);
                if !v.is_positive() {
                    bad.push(y);
                }
                if v.total_cmp(&best.1) == Ordering::Less {
                    best = (i, v);
                }
            }
            (best.0, best.1, bad)
        })
        .collect();

    let mut violations = Vec::new();
    let mut best = (0, ScaledReal::plain(f64::INFINITY));
    for (i, v, bad) in chunks {
        violations.extend(bad);
        if v.total_cmp(&best.1) == Ordering::Less {
            best = (i, v);
        }
    }
    let (mut min_location, mut min_value) = (y_at(best.0), best.1);

    if refine {
        let lo = y_at(best.0.saturating_sub(1));
        let hi = y_at((best.0 + 1).min(samples - 1));
        let (y, v) = golden_min(condition, lo, hi);
        if v.total_cmp(&min_value) == Ordering::Less {
            min_location = y;
            min_value = v;
            if !v.is_positive() {
                violations.push(y);
            }
        }
    }

    Ok(CertificateReport {
        condition,
        grid: SampleGrid { y_min, y_max, samples, spacing: "log".into(), refined: refine },
        min_value,
        min_location,
        violations,
        named_constants: named_constants(),
    })
}

fn golden_min(c: Condition, mut a: f64, mut b: f64) -> (f64, ScaledReal) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = eval_or_nan(c, x1);
    let mut f2 = eval_or_nan(c, x2);
    while b - a > GOLDEN_TOL {
        if f1.total_cmp(&f2) != Ordering::Greater {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = eval_or_nan(c, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = eval_or_nan(c, x2);
        }
    }
    let candidates = [(a, eval_or_nan(c, a)), (b, eval_or_nan(c, b)), (x1, f1), (x2, f2)];
    candidates.into_iter().min_by(|p, q| p.1.total_cmp(&q.1)).unwrap()
}
