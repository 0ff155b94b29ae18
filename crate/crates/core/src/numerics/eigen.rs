//! Smallest eigenpair of a symmetric-definite banded pencil `(A, M)` below zero.
//!
//! The eigenvalue is bracketed by inertia counts of `A - σM` (Sylvester), the
//! bracket is refined by bisection, and the eigenvector comes from inverse
//! iteration at the lower bracket end, where `A - σM` is positive definite.

use crate::error::{Error, Result};

use super::banded::{dot, factor_inertia, BandedSymMatrix, InertiaTriple, LdlFactor, DEFAULT_ZERO_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// Rayleigh quotient of `vector`; lies inside the final bracket up to rounding.
    pub value: f64,
    /// `M`-normalized eigenvector.
    pub vector: Vec<f64>,
    /// Final inertia bracket `(lo, hi)` with no eigenvalue below `lo`.
    pub bracket: (f64, f64),
    /// `‖Ax - λMx‖ / ‖Ax‖`.
    pub relative_residual: f64,
    pub factorizations: usize,
}

const MAX_BRACKET_DOUBLINGS: usize = 60;
const MAX_BISECTIONS: usize = 4000;
const SHIFT_RETRIES: usize = 8;

struct Counter<'a> {
    a: &'a BandedSymMatrix,
    m: &'a BandedSymMatrix,
    factorizations: usize,
}

impl Counter<'_> {
    /// Factors `A - σM`, nudging σ by `1e-8 |σ|` on breakdown.
    fn factor(&mut self, sigma: f64) -> Result<(f64, InertiaTriple)> {
        let mut s = sigma;
        let mut last = None;
        for _ in 0..SHIFT_RETRIES {
            self.factorizations += 1;
            let shifted = self.a.shifted(s, self.m);
            match factor_inertia(&shifted, DEFAULT_ZERO_TOL) {
                Ok((_, t)) => return Ok((s, t)),
                Err(e) => {
                    last = Some(e);
                    s -= 1e-8 * s.abs().max(f64::MIN_POSITIVE);
                }
            }
        }
        Err(last.unwrap())
    }

    fn count_below(&mut self, sigma: f64) -> Result<usize> {
        self.factor(sigma).map(|(_, t)| t.negative)
    }
}

/// Smallest generalized eigenvalue of `(A, M)` if it is negative, else `None`.
pub fn smallest_eigenpair(
    a: &BandedSymMatrix,
    m: &BandedSymMatrix,
    rtol: f64,
) -> Result<Option<EigenPair>> {
    if a.order() != m.order() {
        return Err(Error::param("pencil matrices differ in order"));
    }
    if !(rtol > 0.0) {
        return Err(Error::param("rtol must be positive"));
    }
    let mut counter = Counter { a, m, factorizations: 0 };
    if counter.count_below(0.0)? == 0 {
        return Ok(None);
    }

    let mut lo = -1.0;
    let mut doublings = 0;
    while counter.count_below(lo)? > 0 {
        lo *= 2.0;
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS {
            return Err(Error::Diagnostics(format!(
                "no lower bracket with zero negative inertia down to {lo:e}"
            )));
        }
    }

    // Gallop towards zero while the upper end is still 0: the eigenvalue can be
    // many orders of magnitude smaller than |lo|.
    let mut hi = 0.0;
    let mut step = 1.0f64;
    while hi == 0.0 {
        let trial = lo * 0.5f64.powf(step);
        if trial == 0.0 {
            return Err(Error::Diagnostics("eigenvalue below floating-point resolution".into()));
        }
        if counter.count_below(trial)? > 0 {
            hi = trial;
        } else {
            lo = trial;
            step *= 2.0;
        }
    }

    let mut iterations = 0;
    while hi - lo > rtol * hi.abs() {
        // geometric midpoint while the bracket spans more than a factor of two
        let mid = if lo / hi > 2.0 { -(lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if counter.count_below(mid)? > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > MAX_BISECTIONS {
            return Err(Error::Diagnostics("inertia bisection did not reach rtol".into()));
        }
    }

    // no eigenvalue lies below lo, so A - lo*M is positive definite; only exact
    // zero pivots are rejected here since tiny ones carry the wanted direction
    let mut shift = lo - (hi - lo);
    let factor = loop {
        counter.factorizations += 1;
        match factor_inertia(&a.shifted(shift, m), 0.0) {
            Ok((f, _)) => break f,
            Err(_) => shift -= 1e-8 * shift.abs(),
        }
    };
    let (value, vector) = inverse_iteration(a, m, &factor);
    let ax = a.mul_vec(&vector);
    let mx = m.mul_vec(&vector);
    let res: f64 = ax.iter().zip(&mx).map(|(p, q)| (p - value * q).powi(2)).sum::<f64>().sqrt();
    let norm_ax = dot(&ax, &ax).sqrt();
    Ok(Some(EigenPair {
        value,
        vector,
        bracket: (lo, hi),
        relative_residual: if norm_ax > 0.0 { res / norm_ax } else { res },
        factorizations: counter.factorizations,
    }))
}

fn inverse_iteration(
    a: &BandedSymMatrix,
    m: &BandedSymMatrix,
    factor: &LdlFactor,
) -> (f64, Vec<f64>) {
    let n = a.order();
    // deterministic, non-symmetric start vector
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
    normalize_m(m, &mut x);
    let mut value = a.quad_form(&x);
    for _ in 0..200 {
        let mut y = factor.solve(&m.mul_vec(&x));
        normalize_m(m, &mut y);
        let next = a.quad_form(&y);
        x = y;
        let done = (next - value).abs() <= 4.0 * f64::EPSILON * next.abs();
        value = next;
        if done {
            break;
        }
    }
    (value, x)
}

fn normalize_m(m: &BandedSymMatrix, x: &mut [f64]) {
    let s = m.quad_form(x).sqrt();
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
}
