//! Gauss rules on `[0, 1]` and a panel integrator for integrands of the form
//! `x^β f(x)` on `[0, ∞)` with smooth `f`.
//!
//! Nodes and weights come from the Golub–Welsch eigenvalue problem for the
//! Jacobi matrix of the weight `t^β` (Legendre is `β = 0`). Rules are cached
//! per `(n, β)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of an `n`-point rule for `∫₀¹ t^β f(t) dt`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f(x) dx` for a rule with `β = 0`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let h = b - a;
        h * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(a + h * t))
            .sum::<f64>()
    }
}

type Cache = Mutex<HashMap<(usize, u64), Arc<Rule>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Legendre rule on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    gauss_jacobi(n, 0.0)
}

/// Gauss rule for the weight `t^β` on `[0, 1]`, `β > −1`.
pub fn gauss_jacobi(n: usize, beta: f64) -> Arc<Rule> {
    assert!(n >= 1, "rule needs at least one node");
    assert!(beta > -1.0, "weight t^beta is integrable only for beta > -1");
    let key = (n, beta.to_bits());
    if let Some(r) = cache().lock().unwrap().get(&key) {
        return Arc::clone(r);
    }
    let rule = Arc::new(golub_welsch(n, beta));
    cache().lock().unwrap().entry(key).or_insert_with(|| Arc::clone(&rule));
    rule
}

/// Jacobi polynomials for `(1+x)^β` on `[−1, 1]`, mapped by `t = (1+x)/2`.
fn golub_welsch(n: usize, beta: f64) -> Rule {
    let b = beta;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + b;
        jac[(k, k)] = if k == 0 { b / (b + 2.0) } else { b * b / (s * (s + 2.0)) };
        if k + 1 < n {
            let j = kf + 1.0;
            let s = 2.0 * j + b;
            let off2 = if k == 0 {
                4.0 * (1.0 + b) / ((2.0 + b) * (2.0 + b) * (3.0 + b))
            } else {
                4.0 * j * j * (j + b) * (j + b) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = off2.sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            // total mass ∫₀¹ t^β dt = 1/(β+1)
            (0.5 * (1.0 + eig.eigenvalues[i]), v0 * v0 / (b + 1.0))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// `∫₀^a x^β f(x) dx` with an `n`-point Gauss–Jacobi rule.
pub fn integrate_singular<F: Fn(f64) -> f64>(beta: f64, a: f64, n: usize, f: F) -> f64 {
    let rule = gauss_jacobi(n, beta);
    a.powf(beta + 1.0)
        * rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| w * f(a * t))
            .sum::<f64>()
}

/// Panel edges on `[a, b]`: widths double from `a` (the first panel is
/// `[a, 2a]`) until they reach `max_width`, then stay constant.
pub fn graded_panels(a: f64, b: f64, max_width: f64) -> Vec<(f64, f64)> {
    assert!(a > 0.0 && max_width > 0.0);
    let mut out = Vec::new();
    let mut lo = a;
    while lo < b {
        let width = lo.min(max_width);
        let hi = (lo + width).min(b);
        // do not leave a sliver
        let hi = if b - hi < 0.25 * width { b } else { hi };
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// `Σ_panels ∫ f` with an `n`-point Gauss–Legendre rule on each panel.
pub fn integrate_panels<F: Fn(f64) -> f64>(panels: &[(f64, f64)], n: usize, f: F) -> f64 {
    let rule = gauss_legendre(n);
    panels.iter().map(|&(a, b)| rule.integrate(a, b, &f)).sum()
}
