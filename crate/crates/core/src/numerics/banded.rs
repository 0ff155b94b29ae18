//! Symmetric banded storage and an `LDLᵀ` factorization that reports inertia.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default relative pivot threshold for counting a pivot as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// Symmetric matrix storing the diagonal and `b` sub-diagonals.
///
/// Column-major band: entry `(j + d, j)` for `0 <= d <= b` lives at
/// `band[j * (b + 1) + d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymMatrix {
    order: usize,
    half_bandwidth: usize,
    band: Vec<f64>,
}

impl BandedSymMatrix {
    pub fn zeros(order: usize, half_bandwidth: usize) -> Self {
        Self { order, half_bandwidth, band: vec![0.0; order * (half_bandwidth + 1)] }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self { order: diag.len(), half_bandwidth: 0, band: diag.to_vec() }
    }

    /// Builds from a dense row-major symmetric matrix, keeping `|i - j| <= b`.
    pub fn from_dense(dense: &[Vec<f64>], half_bandwidth: usize) -> Self {
        let n = dense.len();
        let mut m = Self::zeros(n, half_bandwidth);
        for j in 0..n {
            for i in j..n.min(j + half_bandwidth + 1) {
                m.set(i, j, dense[i][j]);
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let d = i - j;
        (d <= self.half_bandwidth && i < self.order).then_some(j * (self.half_bandwidth + 1) + d)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.band[k])
    }

    /// Sets the symmetric pair `(i, j)` / `(j, i)`. Panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j).expect("entry outside band");
        self.band[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j).expect("entry outside band");
        self.band[k] += v;
    }

    pub fn max_abs(&self) -> f64 {
        self.band.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diagonal(&self) -> f64 {
        self.band.iter().step_by(self.half_bandwidth + 1).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest entrywise difference; matrices must share order and bandwidth.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.order, other.order);
        let b = self.half_bandwidth.max(other.half_bandwidth);
        let mut m = 0.0f64;
        for j in 0..self.order {
            for i in j..self.order.min(j + b + 1) {
                m = m.max((self.get(i, j) - other.get(i, j)).abs());
            }
        }
        m
    }

    /// `self - sigma * other`, using the wider of the two bandwidths.
    pub fn shifted(&self, sigma: f64, other: &Self) -> Self {
        assert_eq!(self.order, other.order, "order mismatch");
        let b = self.half_bandwidth.max(other.half_bandwidth);
        let mut out = Self::zeros(self.order, b);
        for j in 0..self.order {
            for i in j..self.order.min(j + b + 1) {
                out.set(i, j, self.get(i, j) - sigma * other.get(i, j));
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.order);
        let n = self.order;
        let w = self.half_bandwidth + 1;
        let mut y = vec![0.0; n];
        for j in 0..n {
            y[j] += self.band[j * w] * x[j];
            for d in 1..w {
                let i = j + d;
                if i >= n {
                    break;
                }
                let a = self.band[j * w + d];
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
        }
        y
    }

    /// `xᵀ A x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.order;
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Counts of negative, zero and positive pivots of a factored symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InertiaTriple {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl InertiaTriple {
    pub fn total(&self) -> usize {
        self.negative + self.zero + self.positive
    }
}

/// Banded `LDLᵀ` factors (unit lower `L` with the same bandwidth as `A`).
#[derive(Debug, Clone)]
pub struct LdlFactor {
    order: usize,
    half_bandwidth: usize,
    /// `lower[j * (b + 1) + d] = L[j + d][j]` for `d >= 1`.
    lower: Vec<f64>,
    diag: Vec<f64>,
}

impl LdlFactor {
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Solves `L D Lᵀ x = rhs`; components behind zero pivots are set to zero.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.order;
        let b = self.half_bandwidth;
        let w = b + 1;
        let mut x = rhs.to_vec();
        for j in 0..n {
            let xj = x[j];
            for d in 1..=b {
                let i = j + d;
                if i >= n {
                    break;
                }
                x[i] -= self.lower[j * w + d] * xj;
            }
        }
        for (xj, dj) in x.iter_mut().zip(&self.diag) {
            *xj = if *dj == 0.0 { 0.0 } else { *xj / dj };
        }
        for j in (0..n).rev() {
            let mut s = x[j];
            for d in 1..=b {
                let i = j + d;
                if i >= n {
                    break;
                }
                s -= self.lower[j * w + d] * x[i];
            }
            x[j] = s;
        }
        x
    }
}

/// Factors `A = L D Lᵀ` without pivoting and reads the inertia off `D`.
///
/// A pivot counts as zero when `|d_j| <= zero_tol * |a_jj|`, i.e. when the
/// elimination cancelled the diagonal entry to relative precision `zero_tol`.
/// The threshold is local so that diagonally scaled matrices (graded meshes
/// span many orders of magnitude) keep their inertia. A zero pivot is accepted
/// only when the column below it vanishes to the same precision; otherwise the
/// factorization breaks down and the caller should perturb its shift.
pub fn factor_inertia(a: &BandedSymMatrix, zero_tol: f64) -> Result<(LdlFactor, InertiaTriple)> {
    let n = a.order;
    let b = a.half_bandwidth;
    let w = b + 1;
    let mut lower = vec![0.0; n * w];
    let mut diag = vec![0.0; n];
    let mut inertia = InertiaTriple { negative: 0, zero: 0, positive: 0 };
    let mut col = vec![0.0; b + 1];
    for j in 0..n {
        let kmin = j.saturating_sub(b);
        let ajj = a.band[j * w];
        let mut dj = ajj;
        for k in kmin..j {
            let l = lower[k * w + (j - k)];
            dj -= l * l * diag[k];
        }
        // raw (unscaled) sub-diagonal column entries
        let mut col_max = 0.0f64;
        let mut col_scale = ajj.abs();
        for d in 1..=b {
            let i = j + d;
            if i >= n {
                col[d] = 0.0;
                continue;
            }
            let mut s = a.band[j * w + d];
            col_scale = col_scale.max(s.abs());
            let kmin_i = i.saturating_sub(b).max(kmin);
            for k in kmin_i..j {
                s -= lower[k * w + (i - k)] * lower[k * w + (j - k)] * diag[k];
            }
            col[d] = s;
            col_max = col_max.max(s.abs());
        }
        if dj.abs() <= zero_tol * ajj.abs() {
            if col_max <= zero_tol * col_scale {
                inertia.zero += 1;
                diag[j] = 0.0;
                continue;
            }
            return Err(Error::Factorization { index: j, pivot: dj });
        }
        if dj < 0.0 {
            inertia.negative += 1;
        } else {
            inertia.positive += 1;
        }
        diag[j] = dj;
        for d in 1..=b {
            if j + d < n {
                lower[j * w + d] = col[d] / dj;
            }
        }
    }
    Ok((LdlFactor { order: n, half_bandwidth: b, lower, diag }, inertia))
}
