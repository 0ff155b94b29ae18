//! Negative spectrum of the perturbed Robin bi-Laplacian `Δ² - τΔ` outside a disk.
//!
//! The exterior of a disk of radius `R` separates into Fourier fibers `e^{inθ}`;
//! each fiber is a fourth-order problem on `(R, ∞)` with measure `r dr`, solved
//! here with `C¹` cubic Hermite elements on a truncated interval. On top of the
//! disk solver sit independent oracles (modified-Bessel secular equation,
//! finite differences, the `exp(-r^α/2)` test family) and an evaluator for the
//! transplanted Rayleigh quotient on exteriors of convex curves given by their
//! support function.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod disk;
pub mod domain;
pub mod error;
pub mod fiber;
pub mod numerics;
pub mod profile;
pub mod reference;
pub mod transplant;

pub use disk::{ground_state, solve_fiber, sweep, Classification, EigenResult, GroundStateReport, SolverControl, SweepGrid};
pub use domain::{constraint_margins, domain_from_support, ConstraintMargins, ConvexDomain, FourierTerm};
pub use error::{Error, Result};
pub use fiber::{FiberParams, BcResidual};
pub use profile::HermiteProfile;
pub use transplant::{transplant_quotient, verify_isoperimetric, TransplantReport, Verdict};
