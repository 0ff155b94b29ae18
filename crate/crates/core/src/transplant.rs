//! Transplanting the disk ground-state profile onto a convex exterior domain.
//!
//! In parallel coordinates `(s, t)` outside a convex body with perimeter `L`,
//! the test function `u(s, t) = f(t)` has the quotient
//!
//! ```text
//! Q[f] = [∫ (f''² + τf'²)(L + 2πt) dt + ∫ W(t) f'² dt + γ L f(0)²] / ∫ f² (L + 2πt) dt
//! ```
//!
//! with `W(t) = ∫ κ/(1 + κt) dθ`. On the disk itself this is the radial fiber
//! Rayleigh quotient.

use std::f64::consts::PI;

use serde::Serialize;

use crate::disk::{ground_state, Classification, SolverControl};
use crate::domain::{constraint_margins, ConstraintMargins, ConvexDomain};
use crate::error::{Error, Result};
use crate::numerics::GaussRule;
use crate::profile::HermiteProfile;

/// `Q[f]` with the profile's own Gauss rule.
pub fn transplant_quotient(d: &ConvexDomain, f: &HermiteProfile, tau: f64, gamma: f64) -> Result<f64> {
    transplant_quotient_with(d, f, tau, gamma, f.mesh().gauss_points())
}

/// `Q[f]` with `gauss_points` per element.
pub fn transplant_quotient_with(
    d: &ConvexDomain,
    f: &HermiteProfile,
    tau: f64,
    gamma: f64,
    gauss_points: usize,
) -> Result<f64> {
    if !(tau >= 0.0) || !gamma.is_finite() {
        return Err(Error::param(format!("invalid tau={tau} or gamma={gamma}")));
    }
    let rule = GaussRule::legendre(gauss_points);
    let left = f.mesh().left();
    let length = d.perimeter();
    let (mut num, mut den) = (0.0, 0.0);
    for (r, w, [v, d1, d2]) in f.samples(&rule) {
        let t = r - left;
        let area = length + 2.0 * PI * t;
        num += w * ((d2 * d2 + tau * d1 * d1) * area + d.curvature_weight(t) * d1 * d1);
        den += w * v * v * area;
    }
    if den == 0.0 {
        return Err(Error::ZeroDenominator("transplanted profile vanishes identically".into()));
    }
    let f0 = f.dofs().first().copied().unwrap_or(0.0);
    Ok((num + gamma * length * f0 * f0) / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    VerifiedStrict,
    EqualityCongruent,
    HypothesisViolated,
    RadialityUnknown,
    /// Non-congruent body whose margin does not clear the tolerance.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::VerifiedStrict => "verified-strict",
            Verdict::EqualityCongruent => "equality-congruent",
            Verdict::HypothesisViolated => "hypothesis-violated",
            Verdict::RadialityUnknown => "radiality-unknown",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransplantReport {
    pub tau: f64,
    pub gamma: f64,
    pub radius: f64,
    pub constraints: ConstraintMargins,
    /// Classification of the disk ground state; absent when the hypothesis check stopped the run.
    pub classification: Option<Classification>,
    pub radial: bool,
    /// Lowest disk eigenvalue over the scanned modes.
    pub lambda_disk: Option<f64>,
    pub quotient: Option<f64>,
    /// `λ_disk - Q`.
    pub margin: Option<f64>,
    pub tolerance: Option<f64>,
    /// Relative change of `Q` when every integral is redone with twice the Gauss points.
    pub quadrature_check: Option<f64>,
    pub verdict: Verdict,
}

/// Runs the chain: constraints, disk ground state, transplanted quotient, verdict.
pub fn verify_isoperimetric(
    d: &ConvexDomain,
    tau: f64,
    gamma: f64,
    radius: f64,
    ctrl: &SolverControl,
) -> Result<TransplantReport> {
    if !(gamma < 0.0) {
        return Err(Error::param(format!("verification needs gamma < 0, got {gamma}")));
    }
    let constraints = constraint_margins(d, radius)?;
    let mut report = TransplantReport {
        tau,
        gamma,
        radius,
        constraints,
        classification: None,
        radial: false,
        lambda_disk: None,
        quotient: None,
        margin: None,
        tolerance: None,
        quadrature_check: None,
        verdict: Verdict::HypothesisViolated,
    };
    if !constraints.hypothesis_satisfied {
        return Ok(report);
    }

    let ground = ground_state(tau, gamma, radius, ctrl)?;
    report.classification = Some(ground.classification);
    report.radial = ground.classification == Classification::Radial;
    report.lambda_disk = ground.lambda_min();
    let radial_mode = ground.mode(0).and_then(|m| m.result.as_ref());
    if let (Some(lambda), Some(res)) = (report.lambda_disk, radial_mode) {
        let q = transplant_quotient(d, &res.profile, tau, gamma)?;
        let q2 = transplant_quotient_with(d, &res.profile, tau, gamma, 2 * res.profile.mesh().gauss_points())?;
        let tol = 10.0 * ctrl.rtol * lambda.abs();
        report.quotient = Some(q);
        report.quadrature_check = Some(((q2 - q) / q).abs());
        report.margin = Some(lambda - q);
        report.tolerance = Some(tol);
    }

    report.verdict = if !report.radial {
        Verdict::RadialityUnknown
    } else if constraints.congruent {
        Verdict::EqualityCongruent
    } else {
        match (report.margin, report.tolerance) {
            (Some(m), Some(t)) if m > t => Verdict::VerifiedStrict,
            _ => Verdict::Inconclusive,
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::{rayleigh_quotient, FiberParams};
    use crate::numerics::build_mesh;

    #[test]
    fn disk_transplant_is_fiber_quotient() {
        let radius = 1.3;
        let d = ConvexDomain::disk(radius).unwrap();
        let mesh = build_mesh(radius, 20.0, 200, 6).unwrap();
        let f = HermiteProfile::interpolate(mesh, |r| (-(r - radius)).exp() * (1.0 + r), |r| -(-(r - radius)).exp() * r);
        let p = FiberParams::new(0.7, -1.2, radius, 0).unwrap();
        let q = transplant_quotient(&d, &f, 0.7, -1.2).unwrap();
        let rq = rayleigh_quotient(&p, &f).unwrap();
        assert!((q - rq).abs() < 1e-12 * rq.abs(), "{q} vs {rq}");
    }

    #[test]
    fn zero_profile_rejected() {
        let d = ConvexDomain::disk(1.0).unwrap();
        let f = HermiteProfile::zero(build_mesh(1.0, 5.0, 10, 6).unwrap());
        assert!(matches!(transplant_quotient(&d, &f, 1.0, -1.0), Err(Error::ZeroDenominator(_))));
    }
}
