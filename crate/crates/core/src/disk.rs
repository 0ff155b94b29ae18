//! Fiber eigenvalues outside a disk: adaptive truncation, mode scan and sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{assemble_fiber, natural_bc_residual, rayleigh_quotient, BcResidual, FiberParams};
use crate::numerics::{build_graded_mesh, smallest_eigenpair, TruncatedMesh, DEFAULT_GAUSS_POINTS};
use crate::profile::HermiteProfile;

/// Knobs of the truncation/refinement loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverControl {
    /// Relative stability demanded between successive truncations and refinements.
    pub rtol: f64,
    /// Initial truncation length; `None` means `30 R`.
    pub t0: Option<f64>,
    /// Elements per unit length in the uniform core of the mesh.
    pub n0: f64,
    /// Element size grows like `growth * t` once that exceeds `1/n0`.
    pub growth: f64,
    pub max_doublings: usize,
    pub max_refinements: usize,
    /// Highest mode scanned by [`ground_state`].
    pub n_max: u32,
    pub gauss_points: usize,
}

impl Default for SolverControl {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            t0: None,
            n0: 40.0,
            growth: 0.02,
            max_doublings: 160,
            max_refinements: 6,
            n_max: 3,
            gauss_points: DEFAULT_GAUSS_POINTS,
        }
    }
}

impl SolverControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.rtol <= 1e-3) {
            return Err(Error::param(format!("rtol must lie in (0, 1e-3], got {}", self.rtol)));
        }
        if let Some(t0) = self.t0 {
            if !(t0 > 0.0) || !t0.is_finite() {
                return Err(Error::param(format!("T0 must be positive, got {t0}")));
            }
        }
        if !(self.n0 >= 1.0) || !self.n0.is_finite() {
            return Err(Error::param(format!("N0 must be at least 1, got {}", self.n0)));
        }
        if !(self.growth >= 0.0 && self.growth <= 0.5) {
            return Err(Error::param(format!("growth must lie in [0, 0.5], got {}", self.growth)));
        }
        if self.gauss_points < 4 {
            return Err(Error::param("need at least 4 Gauss points per element"));
        }
        Ok(())
    }

    fn initial_length(&self, radius: f64) -> f64 {
        self.t0.unwrap_or(30.0 * radius)
    }

    fn mesh(&self, radius: f64, length: f64) -> Result<TruncatedMesh> {
        build_graded_mesh(radius, length, 1.0 / self.n0, self.growth, self.gauss_points)
    }
}

/// One solve of the truncation/refinement loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationStep {
    /// Truncation length `T`.
    pub length: f64,
    pub elements: usize,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    #[serde(skip)]
    pub params: FiberParams,
    pub lambda: f64,
    /// Normalized by `∫ f² r dr = 1`, `f(R) ≥ 0`.
    #[serde(skip)]
    pub profile: HermiteProfile,
    /// `‖Ax - λMx‖ / ‖Ax‖` on the final mesh.
    pub residual: f64,
    pub final_length: f64,
    pub final_elements: usize,
    pub truncation: Vec<TruncationStep>,
    /// `false` when mesh refinement hit the rounding floor before `rtol`;
    /// `λ` then comes from the last level whose refinement change still contracted.
    pub converged: bool,
    /// `λ_{2N} + (λ_{2N} - λ_N)/15` from the last refinement; diagnostic only.
    pub richardson: Option<f64>,
}

impl EigenResult {
    /// Radial natural boundary residuals of the eigenprofile.
    pub fn natural_bc_residual(&self) -> Result<BcResidual> {
        natural_bc_residual(&self.profile, &self.params)
    }
}

struct MeshSolve {
    lambda: f64,
    vector: Vec<f64>,
    residual: f64,
}

fn solve_on(p: &FiberParams, mesh: &TruncatedMesh, rtol: f64) -> Result<Option<MeshSolve>> {
    let (a, m) = assemble_fiber(p, mesh)?;
    let Some(pair) = smallest_eigenpair(&a, &m, 0.01 * rtol)? else {
        return Ok(None);
    };
    // the pointwise quotient is far less sensitive to rounding than xᵀAx on fine meshes
    let profile = HermiteProfile::from_dofs(mesh.clone(), &pair.vector)?;
    let lambda = rayleigh_quotient(p, &profile)?;
    // A near-singular pencil can show a spurious negative pivot; only a
    // negative quotient certifies a negative direction.
    if !(lambda < 0.0) {
        return Ok(None);
    }
    Ok(Some(MeshSolve { lambda, vector: pair.vector, residual: pair.relative_residual }))
}

fn stable(prev: Option<f64>, next: Option<f64>, rtol: f64) -> bool {
    matches!((prev, next), (Some(a), Some(b)) if (b - a).abs() <= rtol * b.abs())
}

fn convergence_error(message: String, record: &[TruncationStep]) -> Error {
    Error::Convergence {
        message,
        record: record.iter().map(|s| (s.length, s.elements, s.lambda)).collect(),
    }
}

/// Smallest eigenvalue of the fiber operator, or `None` when the form has no
/// negative direction even at the largest admissible truncation.
///
/// `T` is doubled until `λ` is stable to `rtol`, then the mesh is refined
/// (every element split) until `λ` is stable again.
pub fn solve_fiber(p: &FiberParams, ctrl: &SolverControl) -> Result<Option<EigenResult>> {
    p.validate()?;
    ctrl.validate()?;
    let radius = p.radius;
    let t0 = ctrl.initial_length(radius);
    let mut record = Vec::new();

    // A negative direction on a long interval is a prerequisite for anything
    // the doubling loop can find, so look there first.
    let t_max = t0 * 2f64.powi(ctrl.max_doublings as i32);
    if t_max.is_finite() && ctrl.max_doublings > 0 {
        let mesh = ctrl.mesh(radius, t_max)?;
        let (a, m) = assemble_fiber(p, &mesh)?;
        if smallest_eigenpair(&a, &m, 1e-3)?.is_none() {
            record.push(TruncationStep { length: t_max, elements: mesh.element_count(), lambda: None });
            return Ok(None);
        }
    }

    let mut length = t0;
    let mut mesh = ctrl.mesh(radius, length)?;
    let mut current = solve_on(p, &mesh, ctrl.rtol)?;
    record.push(TruncationStep { length, elements: mesh.element_count(), lambda: current.as_ref().map(|s| s.lambda) });
    let mut doublings = 0;
    loop {
        if doublings >= ctrl.max_doublings {
            return match current {
                None => Ok(None),
                Some(_) => Err(convergence_error(
                    format!("lambda not stable after {doublings} doublings of T"),
                    &record,
                )),
            };
        }
        length *= 2.0;
        doublings += 1;
        let next_mesh = ctrl.mesh(radius, length)?;
        let next = solve_on(p, &next_mesh, ctrl.rtol)?;
        record.push(TruncationStep {
            length,
            elements: next_mesh.element_count(),
            lambda: next.as_ref().map(|s| s.lambda),
        });
        let done = stable(current.as_ref().map(|s| s.lambda), next.as_ref().map(|s| s.lambda), ctrl.rtol);
        mesh = next_mesh;
        current = next;
        if done {
            break;
        }
    }

    let mut richardson = None;
    let mut converged = false;
    let mut last_change = f64::INFINITY;
    for _ in 0..ctrl.max_refinements {
        let finer = mesh.refined();
        let next = solve_on(p, &finer, ctrl.rtol)?;
        let prev = current.as_ref().map(|s| s.lambda);
        let lam = next.as_ref().map(|s| s.lambda);
        record.push(TruncationStep { length, elements: finer.element_count(), lambda: lam });
        if stable(prev, lam, ctrl.rtol) {
            richardson = lam.zip(prev).map(|(b, a)| b + (b - a) / 15.0);
            mesh = finer;
            current = next;
            converged = true;
            break;
        }
        // Refinement changes of a converging discretization contract; once they
        // grow (or the eigenvalue drops out) rounding has taken over and the
        // coarser level is the better answer.
        let change = match (prev, lam) {
            (Some(a), Some(b)) => (b - a).abs(),
            _ => f64::INFINITY,
        };
        if change >= last_change || lam.is_none() {
            break;
        }
        last_change = change;
        richardson = lam.zip(prev).map(|(b, a)| b + (b - a) / 15.0);
        mesh = finer;
        current = next;
    }
    let Some(sol) = current else {
        return Err(convergence_error("negative eigenvalue lost under refinement".into(), &record));
    };

    let mut dofs = sol.vector;
    let sign = dofs.iter().find(|v| **v != 0.0).map_or(1.0, |v| v.signum());
    if dofs[0] < 0.0 || (dofs[0] == 0.0 && sign < 0.0) {
        dofs.iter_mut().for_each(|v| *v = -*v);
    }
    let profile = HermiteProfile::from_dofs(mesh, &dofs)?;
    Ok(Some(EigenResult {
        params: *p,
        lambda: sol.lambda,
        final_length: profile.mesh().length(),
        final_elements: profile.mesh().element_count(),
        profile,
        residual: sol.residual,
        truncation: record,
        converged,
        richardson,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Radial,
    NonRadial,
    DegenerateWithinTolerance,
    NoBoundState,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Radial => "radial",
            Classification::NonRadial => "non-radial",
            Classification::DegenerateWithinTolerance => "degenerate-within-tolerance",
            Classification::NoBoundState => "no-bound-state",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeReport {
    pub mode: i32,
    pub lambda: Option<f64>,
    pub result: Option<EigenResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundStateReport {
    pub tau: f64,
    pub gamma: f64,
    pub radius: f64,
    pub modes: Vec<ModeReport>,
    /// Mode with the smallest eigenvalue (ties go to the lowest `|n|`).
    pub argmin: Option<i32>,
    pub classification: Classification,
    pub tolerance: f64,
}

impl GroundStateReport {
    pub fn mode(&self, n: i32) -> Option<&ModeReport> {
        self.modes.iter().find(|m| m.mode == n)
    }

    pub fn lambda(&self, n: i32) -> Option<f64> {
        self.mode(n).and_then(|m| m.lambda)
    }

    /// Smallest eigenvalue over the scanned modes.
    pub fn lambda_min(&self) -> Option<f64> {
        self.argmin.and_then(|n| self.lambda(n))
    }
}

/// Classification rule applied to per-mode eigenvalues `lambdas[n]`, `n = 0, 1, ...`.
pub fn classify(lambdas: &[Option<f64>], rtol: f64) -> (Classification, f64) {
    let present: Vec<f64> = lambdas.iter().flatten().copied().collect();
    let lambda_min = present.iter().copied().fold(f64::INFINITY, f64::min);
    let reference = lambdas.first().copied().flatten().unwrap_or(lambda_min);
    let tol = if reference.is_finite() { (10.0 * rtol * reference.abs()).max(1e-10) } else { 1e-10 };
    if present.is_empty() {
        return (Classification::NoBoundState, tol);
    }
    let Some(l0) = lambdas[0] else {
        return (Classification::NonRadial, tol);
    };
    let others = lambdas[1..].iter().flatten();
    if others.clone().all(|&ln| l0 < ln - tol) {
        (Classification::Radial, tol)
    } else if others.clone().any(|&ln| ln < l0 - tol) {
        (Classification::NonRadial, tol)
    } else {
        (Classification::DegenerateWithinTolerance, tol)
    }
}

/// Scans modes `0..=n_max` and classifies the ground state.
pub fn ground_state(tau: f64, gamma: f64, radius: f64, ctrl: &SolverControl) -> Result<GroundStateReport> {
    FiberParams::new(tau, gamma, radius, 0)?;
    ctrl.validate()?;
    let mut modes = Vec::with_capacity(ctrl.n_max as usize + 1);
    for n in 0..=ctrl.n_max as i32 {
        let p = FiberParams::new(tau, gamma, radius, n)?;
        let result = solve_fiber(&p, ctrl).map_err(|e| Error::Mode { mode: n, source: Box::new(e) })?;
        modes.push(ModeReport { mode: n, lambda: result.as_ref().map(|r| r.lambda), result });
    }
    let lambdas: Vec<Option<f64>> = modes.iter().map(|m| m.lambda).collect();
    let (classification, tolerance) = classify(&lambdas, ctrl.rtol);
    let argmin = modes
        .iter()
        .filter_map(|m| m.lambda.map(|l| (m.mode, l)))
        .fold(None, |best: Option<(i32, f64)>, (n, l)| match best {
            Some((_, bl)) if bl <= l => best,
            _ => Some((n, l)),
        })
        .map(|(n, _)| n);
    Ok(GroundStateReport { tau, gamma, radius, modes, argmin, classification, tolerance })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub taus: Vec<f64>,
    pub gammas: Vec<f64>,
    pub radii: Vec<f64>,
}

impl SweepGrid {
    /// Parameter triples in `τ`-major, then `γ`, then `R` order.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.taus.len() * self.gammas.len() * self.radii.len());
        for &t in &self.taus {
            for &g in &self.gammas {
                for &r in &self.radii {
                    out.push((t, g, r));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub tau: f64,
    pub gamma: f64,
    pub radius: f64,
    pub outcome: std::result::Result<GroundStateReport, Error>,
}

/// Ground states over a parameter grid. Rows are computed in parallel and
/// returned in grid order; a failing row keeps its error and the sweep goes on.
pub fn sweep(grid: &SweepGrid, ctrl: &SolverControl) -> Vec<SweepRow> {
    grid.points()
        .into_par_iter()
        .map(|(tau, gamma, radius)| SweepRow { tau, gamma, radius, outcome: ground_state(tau, gamma, radius, ctrl) })
        .collect()
}
