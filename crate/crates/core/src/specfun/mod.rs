//! Scalar special functions: Gamma, the Jacobi theta function `θ₃` and its
//! Poisson-transformed form `φ(x) = θ₃(e^{-πx})`, the hyperbolic majorants
//! `ψ`, `g`, `h`, and the modified Bessel function `K_ν`.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod gamma;
mod hyperbolic;
pub(crate) mod theta;

pub use bessel::{bessel_k, cap_f};
pub use gamma::{gamma, gamma_unchecked};
pub use hyperbolic::{g_fun, h_fun, h_fun_derived, psi, psi_prime};
pub use theta::{
    phi, phi_minus_one, phi_prime, phi_sq_prime_lattice, theta3, theta3_with_tol,
};
