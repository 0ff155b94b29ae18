//! Radial disk eigenvalues from the modified-Bessel secular determinant.
//!
//! For `λ ∈ (-τ²/4, 0)` the decaying radial solutions of `Δ²u - τΔu = λu`
//! are spanned by
//! `K0(√μ₁ r)` and `K0(√μ₂ r)` with `μ₁ + μ₂ = τ`, `μ₁ μ₂ = -λ`. The eigenvalue
//! makes the 2×2 matrix of the two natural boundary conditions singular:
//!
//! ```text
//! f''(R) = 0,   f'''(R) - (τ + 1/R²) f'(R) + γ f(R) = 0.
//! ```

use crate::error::{Error, Result};
use crate::reference::bessel::bessel_k01_scaled;

/// Number of sign-scan intervals over the bracket.
const SCAN_POINTS: usize = 4000;

/// `e^{sR} (g, g', g'', g''')(R)` for `g(r) = K0(s r)`.
fn k0_jet(s: f64, r: f64) -> [f64; 4] {
    let x = s * r;
    let (k0, k1) = bessel_k01_scaled(x);
    [k0, -s * k1, s * s * (k0 + k1 / x), s * s * s * (-k1 - k0 / x - 2.0 * k1 / (x * x))]
}

/// Determinant of the boundary-condition matrix at `λ`, up to a positive factor.
pub fn secular_determinant(tau: f64, gamma: f64, radius: f64, lambda: f64) -> f64 {
    let disc = (tau * tau + 4.0 * lambda).max(0.0).sqrt();
    let mu1 = 0.5 * (tau + disc);
    let mu2 = -lambda / mu1;
    let g1 = k0_jet(mu1.sqrt(), radius);
    let g2 = k0_jet(mu2.sqrt(), radius);
    let c = tau + 1.0 / (radius * radius);
    let b = |g: &[f64; 4]| g[3] - c * g[1] + gamma * g[0];
    g1[2] * b(&g2) - g2[2] * b(&g1)
}

/// Most negative root of the secular determinant in `(-τ²/4, 0)`, or `None`.
///
/// The bracket is scanned on a grid that is logarithmic towards both ends
/// (weakly bound states sit exponentially close to 0), and the first sign
/// change from the bottom is refined by bisection.
pub fn secular_lambda(tau: f64, gamma: f64, radius: f64) -> Result<Option<f64>> {
    if !(radius > 0.0) || !gamma.is_finite() || !tau.is_finite() || tau < 0.0 {
        return Err(Error::param(format!("invalid parameters tau={tau}, gamma={gamma}, R={radius}")));
    }
    if tau == 0.0 {
        return Err(Error::Unsupported(
            "secular oracle needs tau > 0 (both Bessel arguments real)".into(),
        ));
    }
    let floor = -0.25 * tau * tau;
    // λ = floor·u with u from 1 - 1e-12 down to 5e-151; much further down the
    // third derivative of K0 overflows
    let lambda_at = |k: usize| {
        let s = k as f64 / SCAN_POINTS as f64;
        // upper part of the bracket: log-spaced in 1-u; lower part: log-spaced in u
        let u = if s < 0.5 {
            1.0 - 1e-12 * (0.5e12f64).powf(2.0 * s)
        } else {
            0.5 * 10f64.powf(-150.0 * (2.0 * s - 1.0))
        };
        floor * u
    };
    let det = |l: f64| secular_determinant(tau, gamma, radius, l);
    let mut lo = lambda_at(0);
    let mut dlo = det(lo);
    for k in 1..=SCAN_POINTS {
        let hi = lambda_at(k);
        if hi >= 0.0 {
            break;
        }
        let dhi = det(hi);
        if !dhi.is_finite() {
            break;
        }
        if dlo == 0.0 {
            return Ok(Some(lo));
        }
        if dlo.signum() != dhi.signum() {
            let (mut a, mut b, mut da) = (lo, hi, dlo);
            for _ in 0..200 {
                let m = if a / b > 4.0 { -(a * b).sqrt() } else { 0.5 * (a + b) };
                let dm = det(m);
                if dm == 0.0 {
                    return Ok(Some(m));
                }
                if dm.signum() == da.signum() {
                    a = m;
                    da = dm;
                } else {
                    b = m;
                }
                if (b - a).abs() <= 4.0 * f64::EPSILON * b.abs() {
                    break;
                }
            }
            return Ok(Some(0.5 * (a + b)));
        }
        lo = hi;
        dlo = dhi;
    }
    Ok(None)
}
