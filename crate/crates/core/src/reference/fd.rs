//! Finite-difference discretization of the fiber form, used as an oracle.
//!
//! Grid values `f_i = f(R + ih)` on `[R, R + T]` with `f_N = 0`; `f'` and `f''`
//! by second-order differences (one-sided at `R`), trapezoid weights for both
//! the form and the mass. Nonconforming, so no min-max ordering is implied.

use crate::error::{Error, Result};
use crate::fiber::FiberParams;
use crate::numerics::{smallest_eigenpair, BandedSymMatrix};

/// Smallest eigenvalue on step `h` (no extrapolation), or `None`.
pub fn fd_lambda_raw(p: &FiberParams, h: f64, length: f64) -> Result<Option<f64>> {
    p.validate()?;
    if !(h > 0.0) || !(length > 0.0) || !length.is_finite() {
        return Err(Error::param(format!("need h > 0 and T > 0 (h = {h}, T = {length})")));
    }
    let n = (length / h).round() as usize;
    if n < 8 {
        return Err(Error::param(format!("step {h} too coarse for length {length}")));
    }
    let h = length / n as f64;
    let (tau, gamma, radius) = (p.tau, p.gamma, p.radius);
    let n2 = f64::from(p.mode).powi(2);

    // unknowns f_0..f_{n-1}; f_n = 0
    let mut a = BandedSymMatrix::zeros(n, 3);
    let mut mass = vec![0.0; n];
    let add_square = |a: &mut BandedSymMatrix, weight: f64, stencil: &[(usize, f64)]| {
        for &(i, ci) in stencil {
            for &(j, cj) in stencil {
                if j <= i && i < n {
                    a.add(i, j, weight * ci * cj);
                }
            }
        }
    };
    for i in 0..n {
        let r = radius + h * i as f64;
        let w = if i == 0 { 0.5 * h } else { h };
        let (d1, d2): (Vec<(usize, f64)>, Vec<(usize, f64)>) = if i == 0 {
            (
                vec![(0, -1.5 / h), (1, 2.0 / h), (2, -0.5 / h)],
                vec![(0, 2.0 / (h * h)), (1, -5.0 / (h * h)), (2, 4.0 / (h * h)), (3, -1.0 / (h * h))],
            )
        } else {
            (
                vec![(i - 1, -0.5 / h), (i + 1, 0.5 / h)],
                vec![(i - 1, 1.0 / (h * h)), (i, -2.0 / (h * h)), (i + 1, 1.0 / (h * h))],
            )
        };
        add_square(&mut a, w * r, &d2);
        add_square(&mut a, w * r * tau, &d1);
        add_square(&mut a, w * r * tau * n2 / (r * r), &[(i, 1.0)]);
        // 2n² (f'/r - f/r²)² and (f'/r - n² f/r²)²
        for (weight, c0) in [(2.0 * n2, -1.0 / (r * r)), (1.0, -n2 / (r * r))] {
            let mut st: Vec<(usize, f64)> = d1.iter().map(|&(j, c)| (j, c / r)).collect();
            match st.iter_mut().find(|(j, _)| *j == i) {
                Some(entry) => entry.1 += c0,
                None => st.push((i, c0)),
            }
            add_square(&mut a, w * r * weight, &st);
        }
        mass[i] = w * r;
    }
    a.add(0, 0, gamma * radius);
    let m = BandedSymMatrix::from_diagonal(&mass);
    Ok(smallest_eigenpair(&a, &m, 1e-12)?.map(|e| e.value))
}

/// One Richardson step over `h`-halving: `(4 λ_{h/2} - λ_h) / 3`.
pub fn fd_lambda(p: &FiberParams, h: f64, length: f64) -> Result<Option<f64>> {
    let coarse = fd_lambda_raw(p, h, length)?;
    let fine = fd_lambda_raw(p, 0.5 * h, length)?;
    Ok(match (coarse, fine) {
        (Some(c), Some(f)) => Some((4.0 * f - c) / 3.0),
        _ => None,
    })
}
