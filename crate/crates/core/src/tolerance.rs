use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accuracy request: satisfied when the error is below `abs_tol` or below
/// `rel_tol * |value|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let valid = |t: f64| t.is_finite() && t >= 0.0;
        if !valid(abs_tol) || !valid(rel_tol) {
            return Err(Error::domain("tolerances must be finite and non-negative"));
        }
        if abs_tol == 0.0 && rel_tol == 0.0 {
            return Err(Error::domain("at least one tolerance must be positive"));
        }
        Ok(Self { abs_tol, rel_tol })
    }

    pub fn absolute(abs_tol: f64) -> Result<Self> {
        Self::new(abs_tol, 0.0)
    }

    pub fn relative(rel_tol: f64) -> Result<Self> {
        Self::new(0.0, rel_tol)
    }

    pub fn is_satisfied(&self, error: f64, value: f64) -> bool {
        error <= self.abs_tol || error <= self.rel_tol * value.abs()
    }

    /// Largest error that still satisfies the request at `value`.
    pub fn allowance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 0.0 }
    }
}
