//! Independent oracles: the modified-Bessel secular equation for radial disk
//! eigenvalues, a finite-difference discretization, and the energy of the
//! `exp(-r^α/2)` test family.

pub mod bessel;
pub mod fd;
pub mod secular;
pub mod ualpha;

pub use bessel::{bessel_k01, bessel_k01_scaled, exp_integral_e1};
pub use fd::{fd_lambda, fd_lambda_raw};
pub use secular::{secular_determinant, secular_lambda};
pub use ualpha::{ualpha_energy, ualpha_log_norm_sq, ualpha_norm_sq, ualpha_quotient, ualpha_threshold};
