//! Energy of the radial test family `u_α(r) = exp(-r^α / 2)` outside a disk.
//!
//! ```text
//! h[u_α] = 2π ∫_R^∞ (u''² + u'²/r² + τ u'²) r dr + 2π γ R u(R)²
//! ```
//!
//! As `α → 0` the integral vanishes and the value tends to `2π γ R / e`.
//! Integrals are taken in `ℓ = ln r` so that very slow decay (small `α`) costs
//! only a long, smooth interval.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::quadrature::adaptive;

const TAIL_RTOL: f64 = 1e-10;

/// `∫_{ln R}^{∞} g(ℓ) dℓ` with the cutoff grown until the last added chunk is
/// below `TAIL_RTOL` of the total and `r^α` is past every peak of the integrand.
fn integrate_log(g: impl Fn(f64) -> f64, radius: f64, alpha: f64) -> f64 {
    let start = radius.ln();
    // past r^α = 8 + 4/α all terms are decreasing and carry e^{-8}
    let settled = (8.0 + 4.0 / alpha).ln() / alpha;
    let mut width = 4.0f64.min(1.0 / alpha);
    let mut lo = start;
    let mut total = 0.0;
    loop {
        let hi = lo + width;
        let chunk = adaptive(&g, lo, hi, 1e-300, 1e-13);
        total += chunk;
        if !total.is_finite() {
            return total;
        }
        lo = hi;
        width *= 2.0;
        if chunk.abs() <= TAIL_RTOL * total.abs() && lo >= settled {
            return total;
        }
        if !lo.is_finite() {
            return total;
        }
    }
}

fn check(alpha: f64, tau: f64, gamma: f64, radius: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::param(format!("alpha must be positive, got {alpha}")));
    }
    if !(tau >= 0.0) || !gamma.is_finite() || !(radius > 0.0) {
        return Err(Error::param(format!("invalid parameters tau={tau}, gamma={gamma}, R={radius}")));
    }
    Ok(())
}

/// `h[u_α]` including the `2π` angular factor.
pub fn ualpha_energy(alpha: f64, tau: f64, gamma: f64, radius: f64) -> Result<f64> {
    check(alpha, tau, gamma, radius)?;
    let a2 = 0.25 * alpha * alpha;
    let c = 0.5 * alpha * (alpha - 1.0);
    let density = |l: f64| {
        let ra = (alpha * l).exp();
        let b = a2 * ra - c;
        // u² r^{2α-2} in one exponent
        let base = ((2.0 * alpha - 2.0) * l - ra).exp();
        let tension = if tau > 0.0 { tau * a2 * (2.0 * alpha * l - ra).exp() } else { 0.0 };
        base * (b * b + a2) + tension
    };
    let interior = integrate_log(density, radius, alpha);
    Ok(2.0 * PI * (interior + gamma * radius * (-radius.powf(alpha)).exp()))
}

/// `ln(2π ∫_R^∞ u_α² r dr)`. The norm itself overflows once `α` drops below about `0.013`.
pub fn ualpha_log_norm_sq(alpha: f64, radius: f64) -> Result<f64> {
    check(alpha, 0.0, 0.0, radius)?;
    // r² e^{-r^α} peaks at r^α = 2/α
    let peak = ((2.0 / alpha).ln() / alpha).max(radius.ln());
    let shift = 2.0 * peak - (alpha * peak).exp();
    let density = |l: f64| (2.0 * l - (alpha * l).exp() - shift).exp();
    Ok((2.0 * PI).ln() + shift + integrate_log(density, radius, alpha).ln())
}

/// `2π ∫_R^∞ u_α² r dr`; infinite when it exceeds the `f64` range.
pub fn ualpha_norm_sq(alpha: f64, radius: f64) -> Result<f64> {
    Ok(ualpha_log_norm_sq(alpha, radius)?.exp())
}

/// Rayleigh quotient `h[u_α] / ‖u_α‖²`, an upper bound for the lowest eigenvalue.
pub fn ualpha_quotient(alpha: f64, tau: f64, gamma: f64, radius: f64) -> Result<f64> {
    let energy = ualpha_energy(alpha, tau, gamma, radius)?;
    let log_norm = ualpha_log_norm_sq(alpha, radius)?;
    Ok(energy.signum() * (energy.abs().ln() - log_norm).exp())
}

/// Smallest `α` in `[alpha_min, alpha_max]` at which the energy stops being
/// negative; `None` if it stays negative on the whole range (or is never negative).
pub fn ualpha_threshold(tau: f64, gamma: f64, radius: f64, alpha_min: f64, alpha_max: f64) -> Result<Option<f64>> {
    check(alpha_min, tau, gamma, radius)?;
    if !(alpha_max > alpha_min) {
        return Err(Error::param("need alpha_max > alpha_min"));
    }
    let e = |a: f64| ualpha_energy(a, tau, gamma, radius);
    if e(alpha_min)? >= 0.0 {
        return Ok(None);
    }
    let steps = 200;
    let ratio = (alpha_max / alpha_min).powf(1.0 / steps as f64);
    let mut lo = alpha_min;
    for _ in 0..steps {
        let hi = lo * ratio;
        if e(hi)? >= 0.0 {
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-12 * b {
                let m = 0.5 * (a + b);
                if e(m)? < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Ok(Some(b));
        }
        lo = hi;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::bessel::exp_integral_e1;
    use std::f64::consts::E;

    #[test]
    fn alpha_one_closed_form() {
        let closed = 2.0 * PI * (-7.0 / (8.0 * E) + exp_integral_e1(1.0) / 4.0);
        let v = ualpha_energy(1.0, 0.0, -1.0, 1.0).unwrap();
        assert!((v - closed).abs() < 1e-10 * closed.abs(), "{v} vs {closed}");
        assert!((closed / (2.0 * PI) + 0.26705).abs() < 1e-5);
    }

    #[test]
    fn direct_quadrature_in_r() {
        // independent check of the log-variable integrand for α = 2, τ = 1.5
        let (alpha, tau, radius) = (2.0f64, 1.5, 0.8);
        let u = |r: f64| (-0.5 * r.powf(alpha)).exp();
        let du = |r: f64| -0.5 * alpha * r.powf(alpha - 1.0) * u(r);
        let ddu = |r: f64| {
            u(r) * (0.25 * alpha * alpha * r.powf(2.0 * alpha - 2.0) - 0.5 * alpha * (alpha - 1.0) * r.powf(alpha - 2.0))
        };
        let integral = adaptive(
            |r| (ddu(r).powi(2) + du(r).powi(2) / (r * r) + tau * du(r).powi(2)) * r,
            radius,
            12.0,
            1e-300,
            1e-13,
        );
        let expected = 2.0 * PI * (integral + 0.0);
        let v = ualpha_energy(alpha, tau, 0.0, radius).unwrap();
        assert!((v - expected).abs() < 1e-10 * expected, "{v} vs {expected}");
    }

    #[test]
    fn nonnegative_without_robin_term() {
        for alpha in [0.01, 0.3, 1.0, 2.5] {
            assert!(ualpha_energy(alpha, 0.7, 0.0, 1.2).unwrap() >= 0.0);
        }
    }

    #[test]
    fn small_alpha_limit() {
        for (gamma, radius) in [(-1.0, 1.0), (-2.0, 0.7)] {
            let limit = 2.0 * PI * gamma * radius / E;
            let v = ualpha_energy(1e-3, 0.0, gamma, radius).unwrap();
            assert!((v - limit).abs() <= 0.01 * limit.abs(), "{v} vs {limit}");
        }
    }

    #[test]
    fn threshold_brackets_sign_change() {
        let a = ualpha_threshold(0.0, -1.0, 1.0, 1e-3, 20.0).unwrap().unwrap();
        assert!(ualpha_energy(0.999 * a, 0.0, -1.0, 1.0).unwrap() < 0.0);
        assert!(ualpha_energy(1.001 * a, 0.0, -1.0, 1.0).unwrap() >= 0.0);
    }

    #[test]
    fn norm_closed_form_and_tiny_alpha() {
        // 2π ∫_1^∞ e^{-r} r dr = 4π/e
        let n = ualpha_norm_sq(1.0, 1.0).unwrap();
        assert!((n - 4.0 * PI / 1f64.exp()).abs() < 1e-11 * n);
        let ln = ualpha_log_norm_sq(1e-3, 1.0).unwrap();
        assert!(ln.is_finite() && ln > 700.0, "{ln}");
        let q = ualpha_quotient(1e-3, 0.0, -1.0, 1.0).unwrap();
        assert!(q <= 0.0 && q.is_sign_negative() && q > -1e-300, "{q}");
    }

    #[test]
    fn rejects_nonpositive_alpha() {
        assert!(ualpha_energy(0.0, 0.0, -1.0, 1.0).is_err());
    }
}
