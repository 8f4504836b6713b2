//! Randomized checks of `L^p` bounds for orthonormal families and of the
//! interpolation inequality on the torus `[0, 2π]²`.
//!
//! A field is a trigonometric polynomial `φ(x) = Σ a_k e^{ik·x}` over nonzero
//! wavevectors with `|k| ≤ k_max`, so `‖φ‖² = 4π² Σ|a_k|²` and
//! `‖∇φ‖² = 4π² Σ|k|²|a_k|²`. Grid values come from a 2D inverse FFT.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::bounds::{b_p, gagnir_constant, Space};
use crate::error::{Error, Result};

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;
/// Largest grid used when refining non-integer exponents.
const MAX_GRID: usize = 2048;
/// Relative change between grid doublings accepted as converged.
const GRID_TOL: f64 = 1e-8;
const MAX_RETRIES: usize = 8;
/// Rounding allowance for inequalities that are equalities at `q = 2`.
const EQUALITY_SLACK: f64 = 64.0 * f64::EPSILON;

/// Nonzero wavevectors with `|k| ≤ k_max`, half-plane representatives first
/// (`k₁ > 0`, or `k₁ = 0, k₂ > 0`) followed by their negatives in the same order.
pub fn mode_set(k_max: u32) -> Vec<[i32; 2]> {
    let r = k_max as i32;
    let mut half = Vec::new();
    for k1 in 0..=r {
        for k2 in -r..=r {
            if k1 * k1 + k2 * k2 <= r * r && (k1 > 0 || k2 > 0) {
                half.push([k1, k2]);
            }
        }
    }
    let neg: Vec<_> = half.iter().map(|k| [-k[0], -k[1]]).collect();
    half.extend(neg);
    half
}

fn norm_sq(k: [i32; 2]) -> f64 {
    (k[0] * k[0] + k[1] * k[1]) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierField {
    pub modes: Vec<([i32; 2], Complex64)>,
    pub real_valued: bool,
}

impl FourierField {
    /// Validates zero mean and, for real fields, conjugate symmetry.
    pub fn new(modes: Vec<([i32; 2], Complex64)>, real_valued: bool) -> Result<Self> {
        if modes.iter().any(|(k, _)| *k == [0, 0]) {
            return Err(Error::domain("fields must have zero mean (no k = 0 mode)"));
        }
        let field = Self { modes, real_valued };
        if real_valued {
            for (k, a) in &field.modes {
                let b = field.coefficient([-k[0], -k[1]]);
                if (b - a.conj()).norm() > 1e-14 * a.norm().max(1e-300) {
                    return Err(Error::domain(format!("mode {k:?} breaks conjugate symmetry")));
                }
            }
        }
        Ok(field)
    }

    /// `amplitude · (e^{ik·x} + e^{−ik·x})`.
    pub fn cosine_mode(k: [i32; 2], amplitude: f64) -> Result<Self> {
        let a = Complex64::new(amplitude, 0.0);
        Self::new(vec![(k, a), ([-k[0], -k[1]], a)], true)
    }

    pub fn coefficient(&self, k: [i32; 2]) -> Complex64 {
        self.modes.iter().filter(|(j, _)| *j == k).map(|(_, a)| *a).sum()
    }

    pub fn k_max(&self) -> u32 {
        self.modes.iter().map(|(k, _)| k[0].unsigned_abs().max(k[1].unsigned_abs())).max().unwrap_or(0)
    }

    pub fn l2_norm_sq(&self) -> f64 {
        FOUR_PI_SQ * self.modes.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>()
    }

    pub fn grad_norm_sq(&self) -> f64 {
        FOUR_PI_SQ * self.modes.iter().map(|(k, a)| norm_sq(*k) * a.norm_sqr()).sum::<f64>()
    }

    /// Values on the `grid_n × grid_n` grid `x = 2π(i, j)/grid_n`, row-major in `i`.
    pub fn synthesize(&self, grid_n: usize) -> Result<Vec<Complex64>> {
        let mut planner = FftPlanner::new();
        let t = synthesize_transposed(&self.modes, grid_n, &mut planner)?;
        let n = grid_n;
        Ok((0..n * n).map(|idx| t[(idx % n) * n + idx / n]).collect())
    }
}

/// Grid values with the `x₂` index outermost. Only the `2·reach + 1` rows
/// that carry modes are transformed in the first pass.
fn synthesize_transposed(
    modes: &[([i32; 2], Complex64)],
    n: usize,
    planner: &mut FftPlanner<f64>,
) -> Result<Vec<Complex64>> {
    let reach = modes.iter().map(|(k, _)| k[0].unsigned_abs().max(k[1].unsigned_abs())).max().unwrap_or(0);
    if n <= 2 * reach as usize {
        return Err(Error::Aliasing(format!("grid {n} cannot resolve modes up to {reach}")));
    }
    let r = reach as i32;
    let wrap = |k: i32| k.rem_euclid(n as i32) as usize;
    let zero = Complex64::new(0.0, 0.0);
    let rows = 2 * reach as usize + 1;
    // row (k₁ + reach) holds the x₂-dependence of that k₁
    let mut buf = vec![zero; rows * n];
    for (k, a) in modes {
        buf[(k[0] + r) as usize * n + wrap(k[1])] += a;
    }
    let fft = planner.plan_fft_inverse(n);
    fft.process(&mut buf);
    let mut t = vec![zero; n * n];
    for k1 in -r..=r {
        let row = &buf[(k1 + r) as usize * n..][..n];
        let col = wrap(k1);
        for (j, v) in row.iter().enumerate() {
            t[j * n + col] = *v;
        }
    }
    fft.process(&mut t);
    Ok(t)
}

/// Inner product in which a family is orthonormal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerProduct {
    /// `m²(u, v) + (∇u, ∇v)`
    Shifted { m: f64 },
    /// `(u, v) + α(∇u, ∇v)`
    Alpha { alpha: f64 },
}

impl InnerProduct {
    fn weight(self, k: [i32; 2]) -> f64 {
        match self {
            InnerProduct::Shifted { m } => FOUR_PI_SQ * (m * m + norm_sq(k)),
            InnerProduct::Alpha { alpha } => FOUR_PI_SQ * (1.0 + alpha * norm_sq(k)),
        }
    }

    /// The shift `m` of the equivalent shifted product (`m² = 1/α`).
    pub fn m(self) -> f64 {
        match self {
            InnerProduct::Shifted { m } => m,
            InnerProduct::Alpha { alpha } => 1.0 / alpha.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoFamily {
    pub inner: InnerProduct,
    pub k_max: u32,
    pub fields: Vec<FourierField>,
    /// `max |⟨φ_i, φ_j⟩ − δ_ij|`
    pub gram_residual: f64,
}

impl OrthoFamily {
    pub fn m(&self) -> f64 {
        self.inner.m()
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Orthonormalizes `fields`, which must share one mode list.
    pub fn orthonormalize(fields: Vec<FourierField>, inner: InnerProduct) -> Result<Self> {
        let first = fields.first().ok_or_else(|| Error::domain("empty family"))?;
        let ks: Vec<[i32; 2]> = first.modes.iter().map(|(k, _)| *k).collect();
        let real = fields.iter().all(|f| f.real_valued);
        let mut coeffs = Vec::with_capacity(fields.len());
        for f in &fields {
            if f.modes.len() != ks.len() || f.modes.iter().zip(&ks).any(|((k, _), j)| k != j) {
                return Err(Error::domain("fields of a family must share the mode list"));
            }
            coeffs.push(f.modes.iter().map(|(_, a)| *a).collect::<Vec<_>>());
        }
        let weights: Vec<f64> = ks.iter().map(|&k| inner.weight(k)).collect();
        gram_schmidt(&mut coeffs, &weights, real)?;
        Ok(assemble(&ks, coeffs, &weights, real, inner))
    }
}

fn inner_product(u: &[Complex64], v: &[Complex64], w: &[f64]) -> Complex64 {
    u.iter().zip(v).zip(w).map(|((a, b), w)| a * b.conj() * w).sum()
}

/// Classical Gram–Schmidt with one reorthogonalization pass.
fn gram_schmidt(vs: &mut [Vec<Complex64>], w: &[f64], real: bool) -> Result<()> {
    for i in 0..vs.len() {
        let (done, rest) = vs.split_at_mut(i);
        let v = &mut rest[0];
        let start = inner_product(v, v, w).re.sqrt();
        for _pass in 0..2 {
            let projections: Vec<Complex64> = done
                .iter()
                .map(|u| {
                    let c = inner_product(v, u, w);
                    // real combinations keep conjugate symmetry exact
                    if real { Complex64::new(c.re, 0.0) } else { c }
                })
                .collect();
            for (u, c) in done.iter().zip(projections) {
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
        }
        let norm = inner_product(v, v, w).re.sqrt();
        if !(norm > 1e-10 * start) {
            return Err(Error::RankDeficient(format!("vector {i} is numerically dependent")));
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    Ok(())
}

fn assemble(ks: &[[i32; 2]], coeffs: Vec<Vec<Complex64>>, w: &[f64], real: bool, inner: InnerProduct) -> OrthoFamily {
    let mut gram_residual = 0.0f64;
    for (i, u) in coeffs.iter().enumerate() {
        for (j, v) in coeffs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            gram_residual = gram_residual.max((inner_product(u, v, w) - target).norm());
        }
    }
    let k_max = ks.iter().map(|k| norm_sq(*k).sqrt().round() as u32).max().unwrap_or(0);
    let fields = coeffs
        .into_iter()
        .map(|c| FourierField { modes: ks.iter().copied().zip(c).collect(), real_valued: real })
        .collect();
    OrthoFamily { inner, k_max, fields, gram_residual }
}

fn draw_coefficients(ks: &[[i32; 2]], real: bool, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut normal = || -> f64 { rng.sample(StandardNormal) };
    if real {
        let half = ks.len() / 2;
        let mut c: Vec<Complex64> =
            (0..half).map(|_| Complex64::new(normal(), normal()) * std::f64::consts::FRAC_1_SQRT_2).collect();
        let conj: Vec<_> = c.iter().map(|a| a.conj()).collect();
        c.extend(conj);
        c
    } else {
        (0..ks.len()).map(|_| Complex64::new(normal(), normal()) * std::f64::consts::FRAC_1_SQRT_2).collect()
    }
}

fn random_family(n: usize, k_max: u32, seed: u64, real: bool, inner: InnerProduct) -> Result<OrthoFamily> {
    if n == 0 {
        return Err(Error::domain("family size must be at least 1"));
    }
    let ks = mode_set(k_max);
    if n > ks.len() {
        return Err(Error::domain(format!("{n} fields exceed the {} available modes at k_max = {k_max}", ks.len())));
    }
    let weights: Vec<f64> = ks.iter().map(|&k| inner.weight(k)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..MAX_RETRIES {
        let mut coeffs: Vec<_> = (0..n).map(|_| draw_coefficients(&ks, real, &mut rng)).collect();
        match gram_schmidt(&mut coeffs, &weights, real) {
            Ok(()) => return Ok(assemble(&ks, coeffs, &weights, real, inner)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// `n` real fields with standard-normal coefficients on the modes `|k| ≤ k_max`,
/// orthonormalized in `m²(u, v) + (∇u, ∇v)`. Deterministic in `seed`.
pub fn random_ortho_family(n: usize, m: f64, k_max: u32, seed: u64) -> Result<OrthoFamily> {
    check_positive(m, "m")?;
    random_family(n, k_max, seed, true, InnerProduct::Shifted { m })
}

/// As [`random_ortho_family`] with independent complex coefficients.
pub fn random_complex_family(n: usize, m: f64, k_max: u32, seed: u64) -> Result<OrthoFamily> {
    check_positive(m, "m")?;
    random_family(n, k_max, seed, false, InnerProduct::Shifted { m })
}

fn check_positive(v: f64, name: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {v}")))
    }
}

fn is_integer(p: f64) -> bool {
    p.fract() == 0.0
}

/// Smallest power of two strictly above `2⌈p⌉k_max + 1`.
pub fn default_grid(p: f64, k_max: u32) -> usize {
    let need = 2 * (p.ceil() as usize) * k_max as usize + 2;
    need.next_power_of_two().max(8)
}

/// Two real fields share one transform as `φ₁ + iφ₂`, whose modulus
/// squared is `φ₁² + φ₂²`.
fn packed_modes(fields: &[FourierField]) -> Vec<Vec<([i32; 2], Complex64)>> {
    let mut out = Vec::with_capacity(fields.len());
    let mut pending: Option<&FourierField> = None;
    for f in fields {
        if !f.real_valued {
            out.push(f.modes.clone());
            continue;
        }
        match pending.take() {
            None => pending = Some(f),
            Some(g) => {
                let i = Complex64::new(0.0, 1.0);
                let mut modes = g.modes.clone();
                modes.extend(f.modes.iter().map(|(k, a)| (*k, a * i)));
                out.push(modes);
            }
        }
    }
    out.extend(pending.map(|g| g.modes.clone()));
    out
}

/// `r ↦ r^p`, avoiding `powf` for integer and half-integer exponents.
fn power(p: f64) -> impl Fn(f64) -> f64 {
    let twice = 2.0 * p;
    let half_integer = twice.fract() == 0.0 && twice <= i32::MAX as f64;
    let whole = p.floor() as i32;
    move |r: f64| {
        if !half_integer {
            r.powf(p)
        } else if twice as i64 % 2 == 0 {
            r.powi(whole)
        } else {
            r.powi(whole) * r.sqrt()
        }
    }
}

/// `(Σ ρ^p · (2π/N)²)^{1/p}` for `ρ = Σ_j |φ_j|²`.
fn density_norm_on_grid(fields: &[FourierField], p: f64, n: usize, planner: &mut FftPlanner<f64>) -> Result<f64> {
    let mut rho = vec![0.0f64; n * n];
    for modes in packed_modes(fields) {
        for (r, v) in rho.iter_mut().zip(synthesize_transposed(&modes, n, planner)?) {
            *r += v.norm_sqr();
        }
    }
    let cell = (2.0 * PI / n as f64).powi(2);
    let pow = power(p);
    let sum: f64 = rho.iter().map(|&r| pow(r)).sum();
    Ok((sum * cell).powf(1.0 / p))
}

/// `‖Σ_j |φ_j|²‖_{L^p}`. Integer `p` is exact once `grid_n > 2p·k_max`;
/// other exponents double the grid until successive values agree to 1e-8.
pub fn density_lp_norm(fields: &[FourierField], p: f64, grid_n: usize) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::domain(format!("p must be >= 1, got {p}")));
    }
    let k_max = fields.iter().map(FourierField::k_max).max().unwrap_or(0) as f64;
    let mut planner = FftPlanner::new();
    if is_integer(p) {
        if (grid_n as f64) <= 2.0 * p * k_max {
            return Err(Error::Aliasing(format!(
                "grid {grid_n} must exceed 2p·k_max = {} for exact quadrature",
                2.0 * p * k_max
            )));
        }
        return density_norm_on_grid(fields, p, grid_n, &mut planner);
    }
    let mut n = grid_n;
    let mut prev = density_norm_on_grid(fields, p, n, &mut planner)?;
    while n < MAX_GRID {
        n *= 2;
        let cur = density_norm_on_grid(fields, p, n, &mut planner)?;
        if (cur - prev).abs() <= GRID_TOL * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::accuracy(format!("L^{p} norm did not settle to {GRID_TOL} by grid {MAX_GRID}")))
}

pub fn rho_lp_norm(fam: &OrthoFamily, p: f64, grid_n: usize) -> Result<f64> {
    density_lp_norm(&fam.fields, p, grid_n)
}

/// `‖φ‖_{L^q}`, via the density `|φ|²` at exponent `q/2`.
pub fn lq_norm(field: &FourierField, q: f64, grid_n: usize) -> Result<f64> {
    if !(q >= 2.0) {
        return Err(Error::domain(format!("q must be >= 2, got {q}")));
    }
    Ok(density_lp_norm(std::slice::from_ref(field), q / 2.0, grid_n)?.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, holds: lhs <= rhs }
    }

    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

/// `‖ρ‖_{L^p} ≤ B_p m^{−2/p} n^{1/p}`.
pub fn check_liebd2(fam: &OrthoFamily, p: f64) -> Result<BoundCheck> {
    let lhs = rho_lp_norm(fam, p, default_grid(p, fam.k_max))?;
    let rhs = b_p(p)? * fam.m().powf(-2.0 / p) * (fam.len() as f64).powf(1.0 / p);
    Ok(BoundCheck::new(lhs, rhs))
}

/// One sample of the additive form at a given shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdditiveSample {
    pub m: f64,
    /// `B_p (m^{2−2/p}‖φ‖² + m^{−2/p}‖∇φ‖²)` with `p = q/2`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GagnirCheck {
    pub q: f64,
    /// `‖φ‖_{L^q} / (‖φ‖^{2/q} ‖∇φ‖^{1−2/q})`
    pub ratio: f64,
    pub bound: f64,
    pub holds: bool,
    /// `‖φ‖²_{L^q}`
    pub lq_sq: f64,
    pub additive: Vec<AdditiveSample>,
    /// `bound² ‖φ‖^{4/q} ‖∇φ‖^{2−4/q}`
    pub multiplicative: f64,
    /// Smallest sampled additive bound divided by the multiplicative one.
    pub additive_over_multiplicative: f64,
}

impl GagnirCheck {
    pub fn all_hold(&self) -> bool {
        self.holds && self.additive.iter().all(|s| s.holds) && self.additive_over_multiplicative >= 1.0 - 1e-6
    }
}

/// Multiplicative and additive forms of the interpolation inequality for one field.
pub fn check_gagnir(field: &FourierField, q: f64) -> Result<GagnirCheck> {
    let bound = gagnir_constant(q, Space::Torus)?;
    let l2 = field.l2_norm_sq();
    let grad = field.grad_norm_sq();
    if !(l2 > 0.0) {
        return Err(Error::domain("field must be nonzero"));
    }
    let lq = lq_norm(field, q, default_grid(q / 2.0, field.k_max()))?;
    let ratio = lq / (l2.powf(1.0 / q) * grad.powf(0.5 - 1.0 / q));
    let p = q / 2.0;
    let bp = b_p(p)?;
    let multiplicative = bound * bound * l2.powf(1.0 / p) * grad.powf(1.0 - 1.0 / p);
    // the additive form is minimized at m² = ‖∇φ‖²/((p−1)‖φ‖²); at p = 1 it
    // decreases towards ‖φ‖² as m grows
    let centre = if p > 1.0 { grad / ((p - 1.0) * l2) } else { grad / l2 };
    let factors: [f64; 5] = if p > 1.0 { [0.25, 0.5, 1.0, 2.0, 4.0] } else { [1.0, 1e1, 1e2, 1e3, 1e4] };
    let lq_sq = lq * lq;
    let additive: Vec<AdditiveSample> = factors
        .iter()
        .map(|f| {
            let s = centre * f;
            let b = bp * (s.powf(1.0 - 1.0 / p) * l2 + s.powf(-1.0 / p) * grad);
            AdditiveSample { m: s.sqrt(), bound: b, holds: lq_sq <= b * (1.0 + EQUALITY_SLACK) }
        })
        .collect();
    let min_additive = additive.iter().map(|s| s.bound).fold(f64::INFINITY, f64::min);
    Ok(GagnirCheck {
        q,
        ratio,
        bound,
        holds: ratio <= bound * (1.0 + EQUALITY_SLACK),
        lq_sq,
        additive,
        multiplicative,
        additive_over_multiplicative: min_additive / multiplicative,
    })
}

/// A real field with a random spectral slope and a random subset of active modes.
pub fn random_field(k_max: u32, seed: u64) -> Result<FourierField> {
    if k_max == 0 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    let ks = mode_set(k_max);
    let half = ks.len() / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slope: f64 = rng.random_range(0.0..2.0);
    let density: f64 = rng.random_range(0.05..1.0);
    let forced = rng.random_range(0..half);
    let mut c = vec![Complex64::new(0.0, 0.0); ks.len()];
    for i in 0..half {
        let (re, im): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
        if i == forced || rng.random_bool(density) {
            let decay = (1.0 + norm_sq(ks[i])).powf(-slope);
            c[i] = Complex64::new(re, im) * decay;
            c[i + half] = c[i].conj();
        }
    }
    let modes = ks.into_iter().zip(c).filter(|(_, a)| a.norm_sqr() > 0.0).collect();
    Ok(FourierField { modes, real_valued: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaConsistency {
    /// Check in the α-product: `‖ρ‖_{L²} ≤ n^{1/2}/(2√π α^{1/2})`.
    pub alpha_check: BoundCheck,
    /// The `p = 2` check of the family built in the shifted product with `m² = 1/α`.
    pub shifted_check: BoundCheck,
    /// `max` relative deviation of `lhs` and `rhs` from the `1/α` rescaling.
    pub rescale_deviation: f64,
}

impl AlphaConsistency {
    pub fn consistent(&self) -> bool {
        self.alpha_check.holds == self.shifted_check.holds && self.rescale_deviation <= 1e-12
    }
}

/// Builds one family orthonormal in `(u, v) + α(∇u, ∇v)` and one in the
/// shifted product with `m² = 1/α` from the same draws, and compares the two
/// `L²` density bounds, which differ exactly by the factor `1/α`.
pub fn check_alpha_consistency(n: usize, alpha: f64, k_max: u32, seed: u64) -> Result<AlphaConsistency> {
    check_positive(alpha, "alpha")?;
    let fam_alpha = random_family(n, k_max, seed, true, InnerProduct::Alpha { alpha })?;
    let fam_m = random_family(n, k_max, seed, true, InnerProduct::Shifted { m: 1.0 / alpha.sqrt() })?;
    let grid = default_grid(2.0, k_max);
    let lhs = rho_lp_norm(&fam_alpha, 2.0, grid)?;
    let rhs = (n as f64).sqrt() / (2.0 * PI.sqrt() * alpha.sqrt());
    let alpha_check = BoundCheck::new(lhs, rhs);
    let shifted_check = check_liebd2(&fam_m, 2.0)?;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let rescale_deviation = rel(shifted_check.lhs / alpha, lhs).max(rel(shifted_check.rhs / alpha, rhs));
    Ok(AlphaConsistency { alpha_check, shifted_check, rescale_deviation })
}

/// Outcome of a batch of seeded checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub trials: u64,
    pub passes: u64,
    pub max_ratio: f64,
    pub first_failing_seed: Option<u64>,
}

impl FuzzSummary {
    pub fn all_pass(&self) -> bool {
        self.passes == self.trials
    }

    fn collect(results: Vec<(u64, bool, f64)>) -> Self {
        let trials = results.len() as u64;
        let passes = results.iter().filter(|r| r.1).count() as u64;
        let max_ratio = results.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
        let first_failing_seed = results.iter().filter(|r| !r.1).map(|r| r.0).min();
        Self { trials, passes, max_ratio, first_failing_seed }
    }
}

fn fuzz<F>(seed: u64, trials: u64, check: F) -> Result<FuzzSummary>
where
    F: Fn(u64) -> Result<(bool, f64)> + Sync,
{
    let results: Result<Vec<_>> = (seed..seed + trials)
        .into_par_iter()
        .map(|s| check(s).map(|(ok, ratio)| (s, ok, ratio)))
        .collect();
    Ok(FuzzSummary::collect(results?))
}

/// [`check_liebd2`] on `trials` consecutive seeds; the ratio is `lhs/rhs`.
pub fn fuzz_liebd2(n: usize, m: f64, p: f64, k_max: u32, seed: u64, trials: u64) -> Result<FuzzSummary> {
    fuzz(seed, trials, |s| {
        let c = check_liebd2(&random_ortho_family(n, m, k_max, s)?, p)?;
        Ok((c.holds, c.ratio()))
    })
}

/// [`check_gagnir`] on random fields; the ratio is the multiplicative one.
pub fn fuzz_gagnir(q: f64, k_max: u32, seed: u64, trials: u64) -> Result<FuzzSummary> {
    fuzz(seed, trials, |s| {
        let c = check_gagnir(&random_field(k_max, s)?, q)?;
        Ok((c.all_hold(), c.ratio))
    })
}

/// [`check_alpha_consistency`]; a trial passes when the bound holds and the
/// two constructions agree.
pub fn fuzz_alpha(n: usize, alpha: f64, k_max: u32, seed: u64, trials: u64) -> Result<FuzzSummary> {
    fuzz(seed, trials, |s| {
        let c = check_alpha_consistency(n, alpha, k_max, s)?;
        Ok((c.alpha_check.holds && c.consistent(), c.alpha_check.ratio()))
    })
}
