//! Numerical verification toolkit for normalized lattice sums on `Z^2` and `Z^3`,
//! the theta-function monotonicity conditions behind them, explicit
//! attractor-dimension bounds, and randomized checks of `L^p` inequalities for
//! orthonormal families on the flat torus.
//!
//! The crate is organized bottom-up:
//!
//! * [`specfun`] scalar special functions (Gamma, theta, Bessel `K`, hyperbolic majorants)
//! * [`quad`] Gauss rules used by the integral representations
//! * [`lattice`] representation-count tables `r_d(k)`
//! * [`latsum`] three independent evaluators of `I_p(m)`
//! * [`monotone`] grid certificates of the pointwise monotonicity conditions
//! * [`bounds`] constants registry and dimension-bound calculator
//! * [`orthofam`] trigonometric fields and orthonormal-family fuzzing

// `!(x > 0.0)` is the NaN-rejecting form used throughout for argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod error;
pub mod latsum;
pub mod lattice;
pub mod monotone;
pub mod orthofam;
pub mod quad;
pub mod specfun;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerance;
