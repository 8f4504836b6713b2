//! Attractor-dimension calculator: a registry of the inequality constants,
//! the Grashof number, the trace curves `q(n)` and the closed-form bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::gamma;

/// Published values of `R` in `c_LT ≤ R/(2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CltSource {
    /// `R = 3π`
    LtOriginal,
    /// `R = 2`
    Hlw,
    /// `R = π/√3`
    Dll,
    /// `R = 1.456`
    Fhjn,
}

impl CltSource {
    pub const ALL: [CltSource; 4] = [CltSource::LtOriginal, CltSource::Hlw, CltSource::Dll, CltSource::Fhjn];

    pub fn r_factor(self) -> f64 {
        match self {
            CltSource::LtOriginal => 3.0 * PI,
            CltSource::Hlw => 2.0,
            CltSource::Dll => PI / 3f64.sqrt(),
            CltSource::Fhjn => 1.456,
        }
    }

    pub fn clt(self) -> f64 {
        self.r_factor() / (2.0 * PI)
    }

    pub fn name(self) -> &'static str {
        match self {
            CltSource::LtOriginal => "lt",
            CltSource::Hlw => "hlw",
            CltSource::Dll => "dll",
            CltSource::Fhjn => "fhjn",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRegistry {
    pub clt_candidates: Vec<(CltSource, f64)>,
    pub default_clt: CltSource,
    /// Semiclassical lower bound `1/(2π)`.
    pub clt_lower: f64,
    /// `16/(27π)`
    pub clad_upper: f64,
    /// `1/(π · 1.8622)`
    pub clad_sharp: f64,
    /// `2π`: `Σ_{k≤m} λ_k ≥ (2π/|Ω|) m²`.
    pub stokes_c2d: f64,
    /// Vector Lieb–Thirring constant; equal to the scalar one in 2D.
    pub vec_clt: f64,
}

impl Default for ConstantsRegistry {
    fn default() -> Self {
        let default_clt = CltSource::Fhjn;
        Self {
            clt_candidates: CltSource::ALL.iter().map(|&s| (s, s.clt())).collect(),
            default_clt,
            clt_lower: 1.0 / (2.0 * PI),
            clad_upper: 16.0 / (27.0 * PI),
            clad_sharp: 1.0 / (PI * 1.8622),
            stokes_c2d: 2.0 * PI,
            vec_clt: default_clt.clt(),
        }
    }
}

impl ConstantsRegistry {
    pub fn clt(&self) -> f64 {
        self.default_clt.clt()
    }

    pub fn b_p(&self, p: f64) -> Result<f64> {
        b_p(p)
    }

    pub fn gagnir_const(&self, q: f64) -> Result<f64> {
        gagnir_constant(q, Space::Torus)
    }

    pub fn babenko_factor(&self, q: f64) -> Result<f64> {
        babenko_factor(q)
    }

    /// The ordering relations the registry must satisfy.
    pub fn check(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Precondition(format!("registry: {what}")));
        if self.clt_candidates.iter().any(|&(_, c)| c < self.clt_lower) {
            return fail("a c_LT candidate is below 1/(2π)");
        }
        if !(self.clad_sharp < self.clad_upper) {
            return fail("sharp Ladyzhenskaya constant exceeds its upper bound");
        }
        if self.vec_clt > self.clt() {
            return fail("vector constant exceeds the scalar one");
        }
        Ok(())
    }

    /// `G₀` beyond which the Lieb–Thirring bound beats the pre-LT one.
    pub fn crossover_grashof(&self) -> f64 {
        crossover_grashof(self.clt(), self.clad_upper)
    }
}

/// Grashof number above which the Lieb–Thirring bound beats the Ladyzhenskaya one.
pub fn crossover_grashof(clt: f64, clad: f64) -> f64 {
    clt.sqrt() / (2.0 * 2f64.sqrt() * PI) * (8.0 * PI * PI / clad)
}

/// `((p−1)/(4π))^{(p−1)/p}`, with value 1 at `p = 1`.
pub fn b_p(p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("b_p needs p >= 1, got {p}")));
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    Ok(((p - 1.0) / (4.0 * PI)).powf((p - 1.0) / p))
}

/// `q^{(q−2)/q} / (q−1)^{(q−1)/q}`.
pub fn babenko_factor(q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(q.powf((q - 2.0) / q) / (q - 1.0).powf((q - 1.0) / q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Torus,
    Plane,
}

/// Constant in `‖φ‖_{L^q} ≤ C ‖φ‖^{2/q} ‖∇φ‖^{1−2/q}`:
/// `(1/(4π))^{(q−2)/(2q)} (q/2)^{1/2}`, times [`babenko_factor`] on the plane.
pub fn gagnir_constant(q: f64, space: Space) -> Result<f64> {
    check_q(q)?;
    let torus = (1.0 / (4.0 * PI)).powf((q - 2.0) / (2.0 * q)) * (q / 2.0).sqrt();
    match space {
        Space::Torus => Ok(torus),
        Space::Plane => Ok(torus * babenko_factor(q)?),
    }
}

fn check_q(q: f64) -> Result<()> {
    if q >= 2.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("q must be >= 2, got {q}")))
    }
}

/// Physical inputs; each formula reads only the fields it needs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub nu: Option<f64>,
    pub area: Option<f64>,
    pub f_l2: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub g_l2: Option<f64>,
    pub curl_g_l2: Option<f64>,
}

impl PhysicalParams {
    pub fn navier_stokes(nu: f64, area: f64, f_l2: f64) -> Self {
        Self { nu: Some(nu), area: Some(area), f_l2: Some(f_l2), ..Self::default() }
    }

    pub fn alpha_model(gamma: f64, alpha: f64, g_l2: Option<f64>, curl_g_l2: Option<f64>) -> Self {
        Self { gamma: Some(gamma), alpha: Some(alpha), g_l2, curl_g_l2, ..Self::default() }
    }
}

fn positive(v: Option<f64>, name: &'static str) -> Result<f64> {
    let v = v.ok_or(Error::MissingParameter(name))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

fn non_negative(v: Option<f64>, name: &'static str) -> Result<f64> {
    let v = v.ok_or(Error::MissingParameter(name))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(format!("{name} must be non-negative, got {v}")))
    }
}

fn check_constant(c: f64, name: &str) -> Result<f64> {
    if c > 0.0 && c.is_finite() {
        Ok(c)
    } else {
        Err(Error::domain(format!("{name} must be positive, got {c}")))
    }
}

/// `G = ‖f‖ |Ω| / ν²`.
pub fn grashof(params: &PhysicalParams) -> Result<f64> {
    let nu = positive(params.nu, "nu")?;
    let area = positive(params.area, "area")?;
    let f = non_negative(params.f_l2, "f_l2")?;
    Ok(f * area / (nu * nu))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QKind {
    LiebThirring,
    Ladyzhenskaya,
    Generic,
}

/// Concave quadratic `q(n) = −a n² + b n + c` with `a > 0`, `c ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QCurve {
    pub kind: QKind,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QCurve {
    pub fn new(kind: QKind, a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::domain(format!("q-curve needs a > 0, got {a}")));
        }
        if !(c >= 0.0) || !b.is_finite() || !c.is_finite() {
            return Err(Error::domain("q-curve needs finite b and c >= 0"));
        }
        Ok(Self { kind, a, b, c })
    }

    /// `−(νπ/|Ω|) n² + c_LT ‖f‖² |Ω| / (8πν³)`.
    pub fn lieb_thirring(params: &PhysicalParams, clt: f64) -> Result<Self> {
        let (a, payload) = curve_coefficients(params, clt)?;
        Self::new(QKind::LiebThirring, a, 0.0, payload)
    }

    /// `−(νπ/|Ω|) n² + (c_Lad ‖f‖² |Ω| / (8πν³)) n`.
    pub fn ladyzhenskaya(params: &PhysicalParams, clad: f64) -> Result<Self> {
        let (a, payload) = curve_coefficients(params, clad)?;
        Self::new(QKind::Ladyzhenskaya, a, payload, 0.0)
    }

    pub fn eval(&self, n: f64) -> f64 {
        -self.a * n * n + self.b * n + self.c
    }

    /// The nonnegative root.
    pub fn root(&self) -> f64 {
        let disc = self.b * self.b + 4.0 * self.a * self.c;
        // stable form of (b + √disc)/(2a)
        if self.b >= 0.0 {
            (self.b + disc.sqrt()) / (2.0 * self.a)
        } else {
            2.0 * self.c / (disc.sqrt() - self.b)
        }
    }
}

fn curve_coefficients(params: &PhysicalParams, constant: f64) -> Result<(f64, f64)> {
    let nu = positive(params.nu, "nu")?;
    let area = positive(params.area, "area")?;
    let f = non_negative(params.f_l2, "f_l2")?;
    let constant = check_constant(constant, "inequality constant")?;
    Ok((nu * PI / area, constant * f * f * area / (8.0 * PI * nu.powi(3))))
}

pub fn q_lt(n: f64, params: &PhysicalParams, clt: f64) -> Result<f64> {
    Ok(QCurve::lieb_thirring(params, clt)?.eval(n))
}

pub fn q_lad(n: f64, params: &PhysicalParams, clad: f64) -> Result<f64> {
    Ok(QCurve::ladyzhenskaya(params, clad)?.eval(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lifschitz {
    pub n: u64,
    pub n_l: f64,
    pub n_star: f64,
    /// `n_L ≤ n*` (up to rounding).
    pub within_root: bool,
}

/// `n_L = n + q(n) / (q(n) − q(n+1))` for `q(n) ≥ 0 > q(n+1)`.
pub fn n_lifschitz(curve: &QCurve, n: u64) -> Result<Lifschitz> {
    let nf = n as f64;
    let (q0, q1) = (curve.eval(nf), curve.eval(nf + 1.0));
    if !(q0 >= 0.0 && q1 < 0.0) {
        return Err(Error::Precondition(format!(
            "need q(n) >= 0 > q(n+1), got q({n}) = {q0}, q({}) = {q1}",
            n + 1
        )));
    }
    let n_l = nf + q0 / (q0 - q1);
    let n_star = curve.root();
    let within_root = n_l <= n_star * (1.0 + 4.0 * f64::EPSILON);
    Ok(Lifschitz { n, n_l, n_star, within_root })
}

/// [`n_lifschitz`] at the first integer `n ≥ 1` where the sign pattern holds.
pub fn n_lifschitz_scan(curve: &QCurve) -> Result<Lifschitz> {
    let start = curve.root().floor().max(1.0) as u64;
    // the root gives the answer directly; step back over rounding at the boundary
    for n in start.saturating_sub(1).max(1)..=start + 1 {
        if let Ok(r) = n_lifschitz(curve, n) {
            return Ok(r);
        }
    }
    Err(Error::Precondition("no integer n >= 1 with q(n) >= 0 > q(n+1)".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ns2dVariant {
    /// `c_LT^{1/2} / (2√2 π) · G`
    LiYau,
    /// `c_LT / (2√π) · G`
    NoLiYau,
    /// `c_Lad / (8π²) · G²`
    PreLt,
}

impl Ns2dVariant {
    pub const ALL: [Ns2dVariant; 3] = [Ns2dVariant::LiYau, Ns2dVariant::NoLiYau, Ns2dVariant::PreLt];

    pub fn name(self) -> &'static str {
        match self {
            Ns2dVariant::LiYau => "li_yau",
            Ns2dVariant::NoLiYau => "no_li_yau",
            Ns2dVariant::PreLt => "pre_lt",
        }
    }
}

/// Dimension bound for 2D Navier–Stokes. `constant` is `c_LT`, or `c_Lad`
/// for [`Ns2dVariant::PreLt`].
pub fn dim_bound_ns2d(params: &PhysicalParams, constant: f64, variant: Ns2dVariant) -> Result<f64> {
    let g = grashof(params)?;
    let c = check_constant(constant, "inequality constant")?;
    Ok(match variant {
        Ns2dVariant::LiYau => c.sqrt() / (2.0 * 2f64.sqrt() * PI) * g,
        Ns2dVariant::NoLiYau => c / (2.0 * PI.sqrt()) * g,
        Ns2dVariant::PreLt => c / (8.0 * PI * PI) * g * g,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// Torus, plane or sphere.
    NoBoundary,
    /// A proper subdomain with Dirichlet conditions.
    ProperDomain,
}

/// Which term of the no-boundary minimum produced the 2D bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaBound {
    pub value: f64,
    /// `true` when only one of `‖curl g‖²` and `‖g‖²/(2α)` was available.
    pub degenerate_min: bool,
}

/// Fractal-dimension bound for the damped α-model.
///
/// ```text
/// d = 2, no boundary:   (1/8π) · min(‖curl g‖², ‖g‖²/(2α)) / (α γ⁴)
/// d = 2, proper domain: (1/8π) · ‖g‖² / (2 α² γ⁴)
/// d = 3:                (1/12π) · ‖g‖² / (α^{5/2} γ⁴)
/// ```
pub fn dim_bound_alpha(dimension: u32, bc: BoundaryCondition, params: &PhysicalParams) -> Result<AlphaBound> {
    let gamma = positive(params.gamma, "gamma")?;
    let alpha = positive(params.alpha, "alpha")?;
    let g4 = gamma.powi(4);
    let exact = |value| Ok(AlphaBound { value, degenerate_min: false });
    match (dimension, bc) {
        (2, BoundaryCondition::NoBoundary) => {
            let curl = params.curl_g_l2.map(|v| non_negative(Some(v), "curl_g_l2")).transpose()?;
            let g = params.g_l2.map(|v| non_negative(Some(v), "g_l2")).transpose()?;
            let (m, degenerate_min) = match (curl, g) {
                (Some(c), Some(g)) => ((c * c).min(g * g / (2.0 * alpha)), false),
                (Some(c), None) => (c * c, true),
                (None, Some(g)) => (g * g / (2.0 * alpha), true),
                (None, None) => return Err(Error::MissingParameter("curl_g_l2")),
            };
            Ok(AlphaBound { value: m / (alpha * g4) / (8.0 * PI), degenerate_min })
        }
        (2, BoundaryCondition::ProperDomain) => {
            let g = non_negative(params.g_l2, "g_l2")?;
            exact(g * g / (2.0 * alpha * alpha * g4) / (8.0 * PI))
        }
        (3, _) => {
            let g = non_negative(params.g_l2, "g_l2")?;
            exact(g * g / (alpha.powf(2.5) * g4) / (12.0 * PI))
        }
        _ => Err(Error::domain(format!("dimension must be 2 or 3, got {dimension}"))),
    }
}

/// Lower bounds for the first `m` Stokes eigenvalues on a domain of area
/// (volume) `|Ω|`: `Σ_{k≤m} λ_k ≥ d/(2+d) · ((2π)^d/(ω_d (d−1)|Ω|))^{2/d} m^{1+2/d}`
/// and, from `m = 1`, a bound on `λ₁`.
pub fn stokes_lower_bounds(m: u64, area: f64, dimension: u32) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    if !(area > 0.0) || !area.is_finite() {
        return Err(Error::domain(format!("area must be positive, got {area}")));
    }
    if dimension < 2 {
        return Err(Error::domain("dimension must be at least 2"));
    }
    if dimension == 2 {
        // closed form of the general expression with ω₂ = π
        let c = 2.0 * PI / area;
        return Ok((c * (m as f64).powi(2), c));
    }
    let sum = |k: f64| stokes_sum_general(k, area, dimension);
    Ok((sum(m as f64)?, sum(1.0)?))
}

fn stokes_sum_general(m: f64, area: f64, dimension: u32) -> Result<f64> {
    let d = dimension as f64;
    let omega = PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0)?;
    let base = ((2.0 * PI).powf(d) / (omega * (d - 1.0) * area)).powf(2.0 / d);
    Ok(d / (2.0 + d) * base * m.powf(1.0 + 2.0 / d))
}
