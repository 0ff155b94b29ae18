//! Fiber quadratic forms on `(R, ∞)` with measure `r dr`.
//!
//! For the `n`-th Fourier mode the form is
//!
//! ```text
//! h[f] = ∫ (f''² + τ f'²) r dr
//!      + ∫ [τ n² f²/r² + 2n² (f'/r - f/r²)² + (f'/r - n² f/r²)²] r dr
//!      + γ R f(R)²
//! ```
//!
//! and the mass is `∫ f² r dr`. [`assemble_fiber_expanded`] builds the same
//! bilinear form after integrating the cross term `f' f / r³` by parts, which
//! moves `n²/R²` onto the boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{BandedSymMatrix, GaussRule, TruncatedMesh};
use crate::profile::{HermiteProfile, HermiteShape};

/// Half-bandwidth of cubic Hermite matrices.
pub const HERMITE_BANDWIDTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberParams {
    pub tau: f64,
    pub gamma: f64,
    pub radius: f64,
    pub mode: i32,
}

impl FiberParams {
    pub fn new(tau: f64, gamma: f64, radius: f64, mode: i32) -> Result<Self> {
        let p = Self { tau, gamma, radius, mode };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau >= 0.0) || !self.tau.is_finite() {
            return Err(Error::param(format!("tau must be finite and >= 0, got {}", self.tau)));
        }
        if !self.gamma.is_finite() {
            return Err(Error::param(format!("gamma must be finite, got {}", self.gamma)));
        }
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::param(format!("radius must be finite and > 0, got {}", self.radius)));
        }
        Ok(())
    }

    pub fn with_mode(&self, mode: i32) -> Self {
        Self { mode, ..*self }
    }

    fn n2(&self) -> f64 {
        let n = f64::from(self.mode);
        n * n
    }
}

/// A linear functional `c0 φ + c1 φ' + c2 φ''` weighted by `weight` in the density.
#[derive(Clone, Copy)]
struct Term {
    weight: f64,
    c: [f64; 3],
}

fn check_mesh(p: &FiberParams, mesh: &TruncatedMesh) -> Result<()> {
    p.validate()?;
    let r = p.radius;
    if (mesh.left() - r).abs() > 1e-12 * r {
        return Err(Error::param(format!(
            "mesh starts at {} but fiber radius is {}",
            mesh.left(),
            r
        )));
    }
    Ok(())
}

/// Generic assembly of `Σ_k w_k (L_k φ_i)(L_k φ_j)` over Gauss points plus a
/// boundary multiple of `φ_i(R) φ_j(R)`.
fn assemble<F, const K: usize>(mesh: &TruncatedMesh, density: F, boundary: f64) -> BandedSymMatrix
where
    F: Fn(f64) -> [Term; K],
{
    let order = HermiteProfile::free_dofs(mesh);
    let mut a = BandedSymMatrix::zeros(order, HERMITE_BANDWIDTH);
    let rule = GaussRule::legendre(mesh.gauss_points());
    for e in 0..mesh.element_count() {
        let (lo, hi) = mesh.element(e);
        let h = hi - lo;
        let mut local = [[0.0; 4]; 4];
        for (s, w) in rule.unit_interval() {
            let r = lo + h * s;
            let shape = HermiteShape::at(h, s);
            for term in density(r) {
                let mut g = [0.0; 4];
                for (i, gi) in g.iter_mut().enumerate() {
                    *gi = term.c[0] * shape.value[i] + term.c[1] * shape.d1[i] + term.c[2] * shape.d2[i];
                }
                let scale = w * h * term.weight;
                for i in 0..4 {
                    for j in 0..=i {
                        local[i][j] += scale * g[i] * g[j];
                    }
                }
            }
        }
        let base = 2 * e;
        for i in 0..4 {
            let gi = base + i;
            if gi >= order {
                continue;
            }
            for j in 0..=i {
                let gj = base + j;
                if gj < order {
                    a.add(gi, gj, local[i][j]);
                }
            }
        }
    }
    if order > 0 {
        a.add(0, 0, boundary);
    }
    a
}

/// Mass matrix of `∫ f² r dr`.
pub fn assemble_mass(mesh: &TruncatedMesh) -> BandedSymMatrix {
    assemble(mesh, |r| [Term { weight: r, c: [1.0, 0.0, 0.0] }], 0.0)
}

fn stiffness(p: &FiberParams, mesh: &TruncatedMesh) -> BandedSymMatrix {
    let tau = p.tau;
    let n2 = p.n2();
    let density = move |r: f64| {
        let ir = 1.0 / r;
        let ir2 = ir * ir;
        [
            Term { weight: r, c: [0.0, 0.0, 1.0] },
            Term { weight: tau * r, c: [0.0, 1.0, 0.0] },
            Term { weight: tau * n2 * ir, c: [1.0, 0.0, 0.0] },
            Term { weight: 2.0 * n2 * r, c: [-ir2, ir, 0.0] },
            Term { weight: r, c: [-n2 * ir2, ir, 0.0] },
        ]
    };
    assemble(mesh, density, p.gamma * p.radius)
}

/// Stiffness and mass matrices of the `n`-th fiber form on `mesh`.
pub fn assemble_fiber(p: &FiberParams, mesh: &TruncatedMesh) -> Result<(BandedSymMatrix, BandedSymMatrix)> {
    check_mesh(p, mesh)?;
    Ok((stiffness(p, mesh), assemble_mass(mesh)))
}

/// Stiffness matrix of the same form written with the boundary term
/// `(n²/R² + γR) f(R)²` and the sign-indefinite interior density.
pub fn assemble_fiber_expanded(p: &FiberParams, mesh: &TruncatedMesh) -> Result<BandedSymMatrix> {
    check_mesh(p, mesh)?;
    let tau = p.tau;
    let n2 = p.n2();
    let density = move |r: f64| {
        let ir = 1.0 / r;
        let ir2 = ir * ir;
        [
            Term { weight: r, c: [0.0, 0.0, 1.0] },
            Term { weight: tau * r, c: [0.0, 1.0, 0.0] },
            Term { weight: 2.0 * n2 * r, c: [-ir2, ir, 0.0] },
            Term { weight: ir, c: [0.0, 1.0, 0.0] },
            Term { weight: (tau * n2 * ir2 + (n2 * n2 - 2.0 * n2) * ir2 * ir2) * r, c: [1.0, 0.0, 0.0] },
        ]
    };
    let r = p.radius;
    Ok(assemble(mesh, density, n2 / (r * r) + p.gamma * r))
}

/// `xᵀ A x` for the profile's coefficients, evaluated from `f, f', f''` at the
/// Gauss points of each element rather than through the assembled matrix.
///
/// Both routes give the same number in exact arithmetic; the pointwise one
/// avoids the `h⁻⁴` cancellation in the stiffness entries of fine meshes.
pub fn fiber_form_value(p: &FiberParams, f: &HermiteProfile) -> Result<f64> {
    check_mesh(p, f.mesh())?;
    let n2 = p.n2();
    let rule = GaussRule::legendre(f.mesh().gauss_points());
    let interior: f64 = f
        .samples(&rule)
        .map(|(r, w, [v, d1, d2])| {
            let a = d1 / r - v / (r * r);
            let b = d1 / r - n2 * v / (r * r);
            w * r * (d2 * d2 + p.tau * d1 * d1 + p.tau * n2 * v * v / (r * r) + 2.0 * n2 * a * a + b * b)
        })
        .sum();
    let v0 = f.dofs().first().copied().unwrap_or(0.0);
    Ok(interior + p.gamma * p.radius * v0 * v0)
}

/// Rayleigh quotient `h[f] / ∫ f² r dr`.
pub fn rayleigh_quotient(p: &FiberParams, f: &HermiteProfile) -> Result<f64> {
    let den = f.weighted_norm_sq_now();
    if den == 0.0 {
        return Err(Error::ZeroDenominator("profile vanishes identically".into()));
    }
    Ok(fiber_form_value(p, f)? / den)
}

/// Residuals of the radial natural boundary conditions at `r = R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BcResidual {
    /// `f''(R)`.
    pub r1: f64,
    /// `f'''(R) - (τ + 1/R²) f'(R) + γ f(R)`.
    pub r2: f64,
    /// `|r1| / (s / R²)` with `s = max(|f(R)|, |f'(R)|)`.
    pub rel1: f64,
    /// `|r2| / (s (1/R³ + τ/R + |γ|))`.
    pub rel2: f64,
}

/// Natural boundary residuals of a radial profile, with derivatives read from
/// the first element's cubic.
pub fn natural_bc_residual(f: &HermiteProfile, p: &FiberParams) -> Result<BcResidual> {
    if p.mode != 0 {
        return Err(Error::Unsupported(format!(
            "natural boundary conditions are only available for mode 0, got {}",
            p.mode
        )));
    }
    check_mesh(p, f.mesh())?;
    let r = p.radius;
    let v = f.eval_in_element(0, r);
    let r1 = v[2];
    let r2 = v[3] - (p.tau + 1.0 / (r * r)) * v[1] + p.gamma * v[0];
    let s = v[0].abs().max(v[1].abs());
    let (rel1, rel2) = if s > 0.0 {
        (r1.abs() / (s / (r * r)), r2.abs() / (s * (1.0 / (r * r * r) + p.tau / r + p.gamma.abs())))
    } else {
        (0.0, 0.0)
    };
    Ok(BcResidual { r1, r2, rel1, rel2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{build_mesh, factor_inertia, DEFAULT_ZERO_TOL};

    fn params(tau: f64, gamma: f64, radius: f64, mode: i32) -> FiberParams {
        FiberParams::new(tau, gamma, radius, mode).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(FiberParams::new(-1.0, 0.0, 1.0, 0).is_err());
        assert!(FiberParams::new(0.0, 0.0, 0.0, 0).is_err());
        assert!(FiberParams::new(0.0, f64::NAN, 1.0, 0).is_err());
    }

    #[test]
    fn mesh_radius_mismatch() {
        let mesh = build_mesh(1.0, 2.0, 8, 6).unwrap();
        let err = assemble_fiber(&params(1.0, -1.0, 2.0, 0), &mesh).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
        assert!(assemble_fiber_expanded(&params(1.0, -1.0, 2.0, 0), &mesh).is_err());
    }

    #[test]
    fn opposite_modes_identical() {
        let mesh = build_mesh(0.7, 5.0, 20, 6).unwrap();
        let (a, _) = assemble_fiber(&params(1.3, -0.4, 0.7, 3), &mesh).unwrap();
        let (b, _) = assemble_fiber(&params(1.3, -0.4, 0.7, -3), &mesh).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nonnegative_without_robin_term() {
        let mesh = build_mesh(1.0, 10.0, 40, 6).unwrap();
        for tau in [0.0, 1.0, 4.0] {
            for n in 0..4 {
                let (a, m) = assemble_fiber(&params(tau, 0.0, 1.0, n), &mesh).unwrap();
                let (_, inertia) = factor_inertia(&a, DEFAULT_ZERO_TOL).unwrap();
                assert_eq!(inertia.negative, 0, "tau={tau} n={n}");
                let (_, im) = factor_inertia(&m, DEFAULT_ZERO_TOL).unwrap();
                assert_eq!(im.positive, m.order());
            }
        }
    }

    #[test]
    fn expanded_boundary_entry_mode_zero() {
        let mesh = build_mesh(1.5, 3.0, 6, 6).unwrap();
        let p = params(0.5, -2.0, 1.5, 0);
        let (a, _) = assemble_fiber(&p, &mesh).unwrap();
        let b = assemble_fiber_expanded(&p, &mesh).unwrap();
        let a0 = assemble_fiber(&params(0.5, 0.0, 1.5, 0), &mesh).unwrap().0;
        let b0 = assemble_fiber_expanded(&params(0.5, 0.0, 1.5, 0), &mesh).unwrap();
        assert!((a.get(0, 0) - a0.get(0, 0) + 3.0).abs() < 1e-13);
        assert!((b.get(0, 0) - b0.get(0, 0) + 3.0).abs() < 1e-13);
    }

    #[test]
    fn expanded_matches_direct() {
        // Solver density: 40 elements per unit length.
        let mesh = build_mesh(0.5, 4.0, 160, 6).unwrap();
        for n in 0..4 {
            let p = params(0.0, -1.0, 0.5, n);
            let (a, _) = assemble_fiber(&p, &mesh).unwrap();
            let b = assemble_fiber_expanded(&p, &mesh).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-12 * a.max_abs(), "n={n}: {}", a.max_abs_diff(&b) / a.max_abs());
        }
    }

    #[test]
    fn zero_profile_values() {
        let mesh = build_mesh(1.0, 2.0, 4, 6).unwrap();
        let p = params(1.0, -1.0, 1.0, 0);
        let f = HermiteProfile::zero(mesh);
        assert_eq!(fiber_form_value(&p, &f).unwrap(), 0.0);
        let bc = natural_bc_residual(&f, &p).unwrap();
        assert_eq!((bc.r1, bc.r2), (0.0, 0.0));
    }

    #[test]
    fn parabola_second_derivative() {
        let mesh = build_mesh(1.0, 4.0, 16, 6).unwrap();
        let p = params(1.0, -1.0, 1.0, 0);
        let f = HermiteProfile::interpolate(mesh, |r| (r - 1.0).powi(2), |r| 2.0 * (r - 1.0));
        let bc = natural_bc_residual(&f, &p).unwrap();
        assert!((bc.r1 - 2.0).abs() < 1e-12);
        assert!(matches!(natural_bc_residual(&f, &p.with_mode(1)), Err(Error::Unsupported(_))));
    }
}
