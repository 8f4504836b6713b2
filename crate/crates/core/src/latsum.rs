//! Normalized lattice sums
//!
//! ```text
//! d = 2:  I_p(m) = (p−1) m^{2(p−1)} / π · Σ_{n ∈ Z²∖0} (m² + |n|²)^{-p},   p > 1
//! d = 3:  I_p(m) = m^{2p−3}             · Σ_{n ∈ Z³∖0} (m² + |n|²)^{-p},   p > 3/2
//! ```
//!
//! evaluated three independent ways: shell-by-shell summation with a tail
//! model, a theta-function integral, and (2D only) a rapidly convergent
//! series of Bessel `K` functions. [`derivative_dm`] gives `dI/dm` through
//! the pointwise monotonicity conditions of [`crate::monotone`].

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, ShellTable};
use crate::monotone;
use crate::quad;
use crate::specfun::{cap_f, gamma, phi, phi_minus_one};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    ThetaIntegral,
    BesselSeries,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Direct, Method::ThetaIntegral, Method::BesselSeries];

    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::ThetaIntegral => "theta_integral",
            Method::BesselSeries => "bessel_series",
        }
    }
}

/// Whether an error bound is a proof-grade inequality or an a posteriori estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Rigorous,
    Heuristic,
}

/// How [`direct_sum`] accounts for shells beyond the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailModel {
    /// Drop the tail and bound it by integral comparison over unit cells.
    Truncate,
    /// Add the continuum tail and Riesz-mean corrections of the lattice
    /// discrepancy; the bound is the size of the last two corrections.
    #[default]
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSumQuery {
    pub dimension: u32,
    pub p: f64,
    pub m: f64,
    pub tol: Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub value: f64,
    pub error_bound: f64,
    pub bound_kind: BoundKind,
    pub terms_used: u64,
    pub method: Method,
}

/// Exponent below which the sum diverges: `d/2`.
pub fn threshold(dimension: u32) -> f64 {
    dimension as f64 / 2.0
}

/// `lim_{m→∞} I_p(m)`: `1` in 2D, `Γ(p−3/2) π^{3/2} / Γ(p)` in 3D.
pub fn limit_value(dimension: u32, p: f64) -> Result<f64> {
    match dimension {
        2 => Ok(1.0),
        3 => Ok(gamma(p - 1.5)? * PI.powf(1.5) / gamma(p)?),
        _ => Err(Error::domain(format!("dimension must be 2 or 3, got {dimension}"))),
    }
}

impl LatticeSumQuery {
    pub fn new(dimension: u32, p: f64, m: f64, tol: Tolerance) -> Result<Self> {
        let q = Self { dimension, p, m, tol };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dimension == 2 || self.dimension == 3) {
            return Err(Error::domain(format!("dimension must be 2 or 3, got {}", self.dimension)));
        }
        let t = threshold(self.dimension);
        if !(self.p > t) || !self.p.is_finite() {
            return Err(Error::domain(format!(
                "p must exceed {t} in dimension {}, got {}",
                self.dimension, self.p
            )));
        }
        if !(self.m >= 0.0) || !self.m.is_finite() {
            return Err(Error::domain(format!("m must be finite and >= 0, got {}", self.m)));
        }
        Ok(())
    }

    /// The factor multiplying the raw sum `Σ (m² + |n|²)^{-p}`.
    pub fn prefactor(&self) -> f64 {
        let (p, m) = (self.p, self.m);
        match self.dimension {
            2 => (p - 1.0) * m.powf(2.0 * (p - 1.0)) / PI,
            _ => m.powf(2.0 * p - 3.0),
        }
    }

    /// Crude lower bound on the value, from the first shell alone.
    fn value_floor(&self) -> f64 {
        let first = 2.0 * self.dimension as f64 * (self.m * self.m + 1.0).powf(-self.p);
        self.prefactor() * first
    }

    fn zero(&self, method: Method) -> MethodResult {
        MethodResult { value: 0.0, error_bound: 0.0, bound_kind: BoundKind::Rigorous, terms_used: 0, method }
    }
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn total(self) -> f64 {
        self.s + self.c
    }
}

fn check_table(q: &LatticeSumQuery, shells: &ShellTable) -> Result<()> {
    if shells.dimension() != q.dimension {
        return Err(Error::domain(format!(
            "shell table is {}D but the query is {}D",
            shells.dimension(),
            q.dimension
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// direct summation

const RIESZ_ORDER: usize = 4;

/// `Σ_{k ≤ K} r(k) (m² + k)^{-p}`, smallest terms first.
fn head_sum(shells: &ShellTable, m2: f64, p: f64) -> f64 {
    let mut s = Sum::default();
    for (k, r) in shells.nonzero_shells().rev() {
        s.add(r as f64 * (m2 + k as f64).powf(-p));
    }
    s.total()
}

/// `∫_K^∞ u^{1/2} (m² + u)^{-p} du` for `p > 3/2`.
fn sqrt_weighted_tail(m2: f64, k: f64, p: f64) -> f64 {
    let w = m2 + k;
    let beta = m2 / w;
    let a = p - 1.5;
    if beta > 0.75 {
        // m^{3−2p} [B(3/2, p−3/2) − ∫₀^κ τ^{1/2}(1+τ)^{-p} dτ], κ = K/m² < 1/3
        let kappa = k / m2;
        let mut s = Sum::default();
        let mut c = 1.0;
        let mut kn = kappa.powf(1.5);
        for n in 0..2000 {
            let term = c * kn / (n as f64 + 1.5);
            s.add(term);
            if term.abs() <= 1e-18 * s.total().abs() {
                break;
            }
            c *= -(p + n as f64) / (n as f64 + 1.0);
            kn *= kappa;
        }
        let beta_fn = gamma(1.5).unwrap() * gamma(a).unwrap() / gamma(p).unwrap();
        return m2.powf(-a) * (beta_fn - s.total());
    }
    let mut s = Sum::default();
    let mut c = 1.0;
    let mut bn = 1.0;
    for n in 0..2000 {
        let term = c * bn / (a + n as f64);
        s.add(term);
        if term.abs() <= 1e-18 * s.total().abs() {
            break;
        }
        c *= (n as f64 - 0.5) / (n as f64 + 1.0);
        bn *= beta;
    }
    w.powf(-a) * s.total()
}

/// `∫_K^∞ f dM` where `M(u) = ω_d u^{d/2}` counts lattice points on average.
fn continuum_tail(dimension: u32, m2: f64, k: f64, p: f64) -> f64 {
    match dimension {
        2 => PI * (m2 + k).powf(1.0 - p) / (p - 1.0),
        _ => 2.0 * PI * sqrt_weighted_tail(m2, k, p),
    }
}

/// `Σ_{0 ≤ k ≤ K} r(k) (K − k)^j` for `j = 0..=jmax`, origin included.
fn riesz_moments(shells: &ShellTable, jmax: usize) -> Vec<f64> {
    let kmax = shells.max_norm_sq();
    let exact = (|| {
        // the origin contributes K^j
        let mut acc = (0..=jmax as u32)
            .map(|j| (kmax as u128).checked_pow(j))
            .collect::<Option<Vec<u128>>>()?;
        for (k, r) in shells.nonzero_shells() {
            let d = (kmax - k) as u128;
            let mut pw = r as u128;
            for (j, a) in acc.iter_mut().enumerate() {
                *a = a.checked_add(pw)?;
                if j < jmax {
                    pw = pw.checked_mul(d)?;
                }
            }
        }
        Some(acc)
    })();
    if let Some(acc) = exact {
        return acc.into_iter().map(|a| a as f64).collect();
    }
    let mut sums = vec![Sum::default(); jmax + 1];
    let kf = kmax as f64;
    for (j, s) in sums.iter_mut().enumerate() {
        s.add(kf.powi(j as i32));
    }
    for (k, r) in shells.nonzero_shells() {
        let d = (kmax - k) as f64;
        let mut pw = r as f64;
        for s in sums.iter_mut() {
            s.add(pw);
            pw *= d;
        }
    }
    sums.into_iter().map(Sum::total).collect()
}

/// Riesz-mean correction terms `P_j(K) (p)_j (m²+K)^{-p-j}`, `j = 0..=jmax`,
/// with `P_j = N_j − M_j` the discrepancy of the `j`-th Riesz mean.
fn riesz_corrections(
    dimension: u32,
    shells: &ShellTable,
    m2: f64,
    p: f64,
    jmax: usize,
) -> (Vec<f64>, f64) {
    let k = shells.max_norm_sq() as f64;
    let half_d = dimension as f64 / 2.0;
    let moments = riesz_moments(shells, jmax);
    let w = m2 + k;
    let mut terms = Vec::with_capacity(jmax + 1);
    let mut scale = 0.0;
    let mut fact = 1.0;
    let mut poch = 1.0;
    for (j, nj) in moments.iter().enumerate() {
        if j > 0 {
            fact *= j as f64;
            poch *= p + (j - 1) as f64;
        }
        let smooth = PI.powf(half_d) * k.powf(half_d + j as f64)
            / gamma(half_d + j as f64 + 1.0).expect("positive argument");
        let disc = nj / fact - smooth;
        let weight = poch * w.powf(-p - j as f64);
        terms.push(disc * weight);
        scale += (nj / fact).abs() * weight;
    }
    (terms, scale)
}

/// Rigorous bound on `Σ_{|n|² > K} (m² + |n|²)^{-p}`.
///
/// Each omitted point is compared with its unit cell: for `x` in the cell
/// of `n`, `|n| ≥ |x| − h` with `h = √d/2`, and every such cell lies outside
/// the ball of radius `√(K+1) − h`.
fn truncation_bound(dimension: u32, m2: f64, kmax: u64, p: f64) -> f64 {
    let d = dimension as f64;
    let h = d.sqrt() / 2.0;
    let a = ((kmax + 1) as f64).sqrt() - 2.0 * h;
    if a <= 0.0 {
        return f64::INFINITY;
    }
    let a2 = a * a;
    match dimension {
        2 => (1.0 + h / a) * PI / ((p - 1.0) * (m2 + a2).powf(p - 1.0)),
        _ => {
            let radial = 0.5 * sqrt_weighted_tail(m2, a2, p);
            4.0 * PI * (1.0 + h / a).powi(2) * radial
        }
    }
}

/// Shell-by-shell summation with the default [`TailModel::Corrected`].
///
/// The table's cutoff is used as is; [`direct_sum_auto`] picks one.
pub fn direct_sum(q: &LatticeSumQuery, shells: &ShellTable) -> Result<MethodResult> {
    direct_sum_with(q, shells, TailModel::default())
}

pub fn direct_sum_with(
    q: &LatticeSumQuery,
    shells: &ShellTable,
    model: TailModel,
) -> Result<MethodResult> {
    q.validate()?;
    check_table(q, shells)?;
    if q.m == 0.0 {
        return Ok(q.zero(Method::Direct));
    }
    let (p, m2) = (q.p, q.m * q.m);
    let pref = q.prefactor();
    let kmax = shells.max_norm_sq();
    let head = head_sum(shells, m2, p);
    let terms_used = shells.nonzero_shells().count() as u64;
    let eps = f64::EPSILON;

    let (value, error_bound, bound_kind) = match model {
        TailModel::Truncate => {
            let tail = truncation_bound(q.dimension, m2, kmax, p);
            let err = pref * (tail + 4.0 * eps * head);
            (pref * head, err, BoundKind::Rigorous)
        }
        TailModel::Corrected => {
            let main = continuum_tail(q.dimension, m2, kmax as f64, p);
            let (terms, scale) = riesz_corrections(q.dimension, shells, m2, p, RIESZ_ORDER + 1);
            let mut s = Sum::default();
            s.add(head);
            s.add(main);
            for t in &terms[..=RIESZ_ORDER] {
                s.add(-t);
            }
            let truncation = terms[RIESZ_ORDER].abs() + terms[RIESZ_ORDER + 1].abs();
            let rounding = 16.0 * eps * (head.abs() + main.abs() + scale);
            (pref * s.total(), pref * (truncation + rounding), BoundKind::Heuristic)
        }
    };
    if !q.tol.is_satisfied(error_bound, value) {
        return Err(Error::Cutoff(format!(
            "|n|² ≤ {kmax} leaves error bound {error_bound:e} above the requested tolerance"
        )));
    }
    Ok(MethodResult { value, error_bound, bound_kind, terms_used, method: Method::Direct })
}

/// A starting cutoff for [`direct_sum_with`], rounded up to a power of two.
pub fn direct_cutoff(q: &LatticeSumQuery, model: TailModel) -> u64 {
    let (p, m2) = (q.p, q.m * q.m);
    let pref = q.prefactor();
    let target = 0.01 * q.tol.allowance(q.value_floor());
    let limit = match q.dimension {
        2 => lattice::MAX_NORM_SQ_2D,
        _ => lattice::MAX_NORM_SQ_3D,
    };
    let estimate = |k: f64| -> f64 {
        match model {
            TailModel::Truncate => pref * truncation_bound(q.dimension, m2, k as u64, p),
            TailModel::Corrected => {
                let j = RIESZ_ORDER as f64;
                let poch: f64 = (0..RIESZ_ORDER).map(|i| p + i as f64).product();
                let growth = (q.dimension as f64 - 1.0) / 4.0 + j / 2.0;
                4.0 * pref * poch * k.powf(growth) * (m2 + k).powf(-p - j)
            }
        }
    };
    let mut k: u64 = 256;
    while k < limit && estimate(k as f64) > target {
        k *= 2;
    }
    k.min(limit)
}

/// [`direct_sum_with`] on shared tables, enlarging the cutoff until the
/// bound meets the tolerance.
pub fn direct_sum_auto(q: &LatticeSumQuery, model: TailModel) -> Result<MethodResult> {
    direct_sum_cached(q, model, None)
}

pub fn direct_sum_cached(
    q: &LatticeSumQuery,
    model: TailModel,
    cache_dir: Option<&std::path::Path>,
) -> Result<MethodResult> {
    q.validate()?;
    if q.m == 0.0 {
        return Ok(q.zero(Method::Direct));
    }
    let limit = match q.dimension {
        2 => lattice::MAX_NORM_SQ_2D,
        _ => lattice::MAX_NORM_SQ_3D,
    };
    let mut k = direct_cutoff(q, model);
    loop {
        let shells = lattice::shared_with_cache(q.dimension, k, cache_dir)?;
        match direct_sum_with(q, &shells, model) {
            Err(Error::Cutoff(_)) if k < limit => k = (4 * k).min(limit),
            other => return other,
        }
    }
}

// ---------------------------------------------------------------------------
// theta-function integral

const MIN_NODES: usize = 16;
const MAX_NODES: usize = 512;

/// `∫₀^∞ x^{p−1} e^{-m²x} (θ₃(e^{-x})^d − 1) dx` with an `n`-point rule per piece.
fn theta_integrand_total(dimension: u32, p: f64, m2: f64, n: usize) -> f64 {
    // Θ(x) = θ₃(e^{-π²/x}) = φ(π/x); on (0, 1]: θ₃(e^{-x}) = √(π/x) Θ(x)
    let big_theta = |x: f64| phi(PI / x).expect("x > 0");
    let x1 = if m2 > 1.0 { 1.0 / m2 } else { 1.0 };

    let (near, mid) = match dimension {
        2 => {
            let g = |x: f64| (-m2 * x).exp() * (PI * big_theta(x).powi(2) - x);
            let near = quad::integrate_singular(p - 2.0, x1, n, g);
            let mid = if x1 < 1.0 {
                quad::integrate_panels(&quad::graded_panels(x1, 1.0, 1.0), n, |x| x.powf(p - 2.0) * g(x))
            } else {
                0.0
            };
            (near, mid)
        }
        _ => {
            let pi32 = PI.powf(1.5);
            let lead = |x: f64| pi32 * (-m2 * x).exp() * big_theta(x).powi(3);
            let near = quad::integrate_singular(p - 2.5, x1, n, lead)
                - quad::integrate_singular(p - 1.0, x1, n, |x| (-m2 * x).exp());
            let mid = if x1 < 1.0 {
                quad::integrate_panels(&quad::graded_panels(x1, 1.0, 1.0), n, |x| {
                    x.powf(p - 2.5) * (lead(x) - x.powf(1.5) * (-m2 * x).exp())
                })
            } else {
                0.0
            };
            (near, mid)
        }
    };

    // [1, ∞): θ₃(e^{-x})^d − 1 ≈ 2d e^{-x}, total decay rate m² + 1
    let rate = m2 + 1.0;
    let far = if rate > 740.0 {
        0.0
    } else {
        let mut x_max = 1.0 + 45.0 / rate;
        for _ in 0..20 {
            x_max = 1.0 + (45.0 + (p - 1.0).max(0.0) * x_max.ln()) / rate;
        }
        let width = (4.0 / rate).min(2.0);
        let panels = quad::graded_panels(1.0, x_max, width);
        quad::integrate_panels(&panels, n, |x| {
            let t = phi_minus_one(x / PI).expect("x > 0");
            let powered_minus_one = match dimension {
                2 => t * (t + 2.0),
                _ => t * (t * t + 3.0 * t + 3.0),
            };
            x.powf(p - 1.0) * (-m2 * x).exp() * powered_minus_one
        })
    };
    near + mid + far
}

/// `I_p(m)` from the theta-function integral. The bound is twice the change
/// between the last two node counts.
pub fn theta_integral(q: &LatticeSumQuery) -> Result<MethodResult> {
    q.validate()?;
    if q.m == 0.0 {
        return Err(Error::domain("theta_integral needs m > 0; I_p(0) = 0"));
    }
    let (p, m2) = (q.p, q.m * q.m);
    let pref = q.prefactor() / gamma(p)?;
    let mut n = MIN_NODES;
    let mut prev = pref * theta_integrand_total(q.dimension, p, m2, n);
    let mut evals = 0u64;
    while n < MAX_NODES {
        n *= 2;
        let cur = pref * theta_integrand_total(q.dimension, p, m2, n);
        evals += n as u64;
        let diff = (cur - prev).abs();
        let floor = 64.0 * f64::EPSILON * cur.abs();
        if diff <= 0.25 * q.tol.allowance(cur) || diff <= floor {
            return Ok(MethodResult {
                value: cur,
                error_bound: 2.0 * diff.max(floor),
                bound_kind: BoundKind::Heuristic,
                terms_used: evals,
                method: Method::ThetaIntegral,
            });
        }
        prev = cur;
    }
    Err(Error::accuracy(format!(
        "theta integral for d = {}, p = {p}, m = {} did not settle at {MAX_NODES} nodes",
        q.dimension, q.m
    )))
}

// ---------------------------------------------------------------------------
// Bessel series (2D)

struct BesselSetup {
    nu: f64,
    c: f64,
    coef: f64,
    base: f64,
}

fn bessel_setup(q: &LatticeSumQuery) -> Result<BesselSetup> {
    q.validate()?;
    if q.dimension != 2 {
        return Err(Error::domain("the Bessel series is available in dimension 2 only"));
    }
    if q.m == 0.0 {
        return Err(Error::domain("bessel_series needs m > 0; I_p(0) = 0"));
    }
    let (p, m) = (q.p, q.m);
    Ok(BesselSetup {
        nu: p - 1.0,
        c: 2.0 * PI * m,
        coef: 4.0 * (p - 1.0) / (2f64.powf(p) * gamma(p)?),
        base: 1.0 - (p - 1.0) / (PI * m * m),
    })
}

/// Rigorous bound on the series terms with `|n|² > kmax` (before `coef`).
fn bessel_tail(s: &BesselSetup, kmax: u64) -> Result<f64> {
    let a = ((kmax + 1) as f64).sqrt() - SQRT_2;
    if a <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let ca = s.c * a;
    Ok((1.0 + SQRT_2 / 2.0 / a) * 2.0 * PI * cap_f(s.nu + 1.0, ca)? / (s.c * s.c))
}

/// `I_p(m) = 1 − (p−1)/(πm²) + 4(p−1)/(2^p Γ(p)) Σ_{n≠0} F_{p−1}(2π|n|m)`,
/// `F_ν(t) = t^ν K_ν(t)`, summed over the table's shells. The tail bound is
/// rigorous because `F_ν` is decreasing.
pub fn bessel_series(q: &LatticeSumQuery, shells: &ShellTable) -> Result<MethodResult> {
    let s = bessel_setup(q)?;
    check_table(q, shells)?;
    let kmax = shells.max_norm_sq();
    let mut sum = Sum::default();
    let mut terms = 0u64;
    for (k, r) in shells.nonzero_shells().rev() {
        sum.add(r as f64 * cap_f(s.nu, s.c * (k as f64).sqrt())?);
        terms += 1;
    }
    let series = s.coef * sum.total();
    let value = s.base + series;
    let rounding = 2.0 * f64::EPSILON * (s.base.abs() + 1.0 + series.abs());
    let error_bound = s.coef * bessel_tail(&s, kmax)? + rounding;
    if !q.tol.is_satisfied(error_bound, value) {
        return Err(Error::Cutoff(format!(
            "|n|² ≤ {kmax} leaves Bessel tail bound {error_bound:e}"
        )));
    }
    Ok(MethodResult {
        value,
        error_bound,
        bound_kind: BoundKind::Rigorous,
        terms_used: terms,
        method: Method::BesselSeries,
    })
}

/// Smallest power-of-two cutoff whose tail bound is a tenth of the allowance.
pub fn bessel_cutoff(q: &LatticeSumQuery) -> Result<u64> {
    let s = bessel_setup(q)?;
    let target = 0.1 * q.tol.allowance(q.value_floor());
    let mut k = 16u64;
    while s.coef * bessel_tail(&s, k)? > target {
        if k >= lattice::MAX_NORM_SQ_2D {
            return Err(Error::Cutoff(format!("Bessel series for m = {} needs too many shells", q.m)));
        }
        k *= 2;
    }
    Ok(k)
}

pub fn bessel_series_auto(q: &LatticeSumQuery) -> Result<MethodResult> {
    bessel_series_cached(q, None)
}

pub fn bessel_series_cached(
    q: &LatticeSumQuery,
    cache_dir: Option<&std::path::Path>,
) -> Result<MethodResult> {
    let k = bessel_cutoff(q)?;
    let shells = lattice::shared_with_cache(2, k, cache_dir)?;
    bessel_series(q, &shells)
}

/// Evaluate with `method`, choosing shell tables automatically.
pub fn evaluate(q: &LatticeSumQuery, method: Method) -> Result<MethodResult> {
    evaluate_cached(q, method, None)
}

pub fn evaluate_cached(
    q: &LatticeSumQuery,
    method: Method,
    cache_dir: Option<&std::path::Path>,
) -> Result<MethodResult> {
    match method {
        Method::Direct => direct_sum_cached(q, TailModel::default(), cache_dir),
        Method::ThetaIntegral => {
            q.validate()?;
            if q.m == 0.0 {
                return Ok(q.zero(Method::ThetaIntegral));
            }
            theta_integral(q)
        }
        Method::BesselSeries => {
            q.validate()?;
            if q.m == 0.0 && q.dimension == 2 {
                return Ok(q.zero(Method::BesselSeries));
            }
            bessel_series_cached(q, cache_dir)
        }
    }
}

/// Shared table helper for callers that evaluate many queries.
pub fn shells_for(dimension: u32, max_norm_sq: u64) -> Result<Arc<ShellTable>> {
    lattice::shared(dimension, max_norm_sq)
}

// ---------------------------------------------------------------------------
// derivative in m

/// `∫₀^∞ x^{p−1} e^{-x} c(πm²/x) dx` for a bracket `c` tending to 1 as `x → 0`.
fn bracket_integral<F>(p: f64, m2: f64, n: usize, bracket: &F) -> f64
where
    F: Fn(f64) -> f64,
{
    let y_of = |x: f64| PI * m2 / x;
    let x_max = 60.0 + 10.0 * p;
    let x1 = (PI * m2 / 8.0).min(1.0);
    let near = quad::integrate_singular(p - 1.0, x1, n, |x| (-x).exp() * bracket(y_of(x)));
    if x1 >= x_max {
        return near;
    }
    let panels = quad::graded_panels(x1, x_max, 2.0);
    near + quad::integrate_panels(&panels, n, |x| x.powf(p - 1.0) * (-x).exp() * bracket(y_of(x)))
}

/// `dI_p/dm` by quadrature of the monotonicity bracket:
///
/// ```text
/// d = 2:  2(p−1)/(πΓ(p)m³) ∫ x^{p−1} e^{-x} (2y²φφ′ + 1) dx
/// d = 3:  3/(Γ(p)m⁴)       ∫ x^{p−1} e^{-x} (2y^{5/2}φ²φ′ + 1) dx,   y = πm²/x
/// ```
pub fn derivative_dm(q: &LatticeSumQuery) -> Result<f64> {
    q.validate()?;
    if q.m == 0.0 {
        return Err(Error::domain("derivative_dm needs m > 0"));
    }
    let (p, m) = (q.p, q.m);
    let m2 = m * m;
    let (pref, bracket): (f64, fn(f64) -> f64) = match q.dimension {
        2 => (
            2.0 * (p - 1.0) / (PI * gamma(p)? * m.powi(3)),
            |y| monotone::condmon(y).map(|s| s.value()).unwrap_or(f64::NAN),
        ),
        _ => (
            3.0 / (gamma(p)? * m.powi(4)),
            |y| monotone::mono3(y).map(|s| s.value()).unwrap_or(f64::NAN),
        ),
    };
    let mut n = MIN_NODES;
    let mut prev = pref * bracket_integral(p, m2, n, &bracket);
    while n < MAX_NODES {
        n *= 2;
        let cur = pref * bracket_integral(p, m2, n, &bracket);
        if (cur - prev).abs() <= 1e-12 * cur.abs().max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::accuracy(format!("derivative quadrature at p = {p}, m = {m} did not settle")))
}
