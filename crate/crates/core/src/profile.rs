//! `C¹` piecewise-cubic Hermite profiles on a truncated mesh.

use crate::error::{Error, Result};
use crate::numerics::{GaussRule, TruncatedMesh};

/// Values of the four cubic Hermite shape functions and their first three
/// `r`-derivatives at a point of an element of length `h`.
///
/// Ordering: value at left node, slope at left node, value at right node,
/// slope at right node.
#[derive(Debug, Clone, Copy)]
pub struct HermiteShape {
    pub value: [f64; 4],
    pub d1: [f64; 4],
    pub d2: [f64; 4],
    pub d3: [f64; 4],
}

impl HermiteShape {
    pub fn at(h: f64, xi: f64) -> Self {
        let x2 = xi * xi;
        let x3 = x2 * xi;
        let value = [1.0 - 3.0 * x2 + 2.0 * x3, h * (xi - 2.0 * x2 + x3), 3.0 * x2 - 2.0 * x3, h * (x3 - x2)];
        let d1 = [
            (-6.0 * xi + 6.0 * x2) / h,
            1.0 - 4.0 * xi + 3.0 * x2,
            (6.0 * xi - 6.0 * x2) / h,
            -2.0 * xi + 3.0 * x2,
        ];
        let h2 = h * h;
        let d2 = [(-6.0 + 12.0 * xi) / h2, (-4.0 + 6.0 * xi) / h, (6.0 - 12.0 * xi) / h2, (-2.0 + 6.0 * xi) / h];
        let h3 = h2 * h;
        let d3 = [12.0 / h3, 6.0 / h2, -12.0 / h3, 6.0 / h2];
        Self { value, d1, d2, d3 }
    }
}

/// Piecewise-cubic profile with nodal values and slopes; clamped (`f = f' = 0`)
/// at the right end of the mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteProfile {
    mesh: TruncatedMesh,
    /// `[f(r_0), f'(r_0), f(r_1), f'(r_1), ...]`, last pair zero.
    coefficients: Vec<f64>,
    /// `∫ f² r dr` at construction time.
    weighted_norm_sq: f64,
}

impl HermiteProfile {
    /// Number of free coefficients on `mesh` (all nodes but the clamped last one).
    pub fn free_dofs(mesh: &TruncatedMesh) -> usize {
        2 * mesh.element_count()
    }

    pub fn from_dofs(mesh: TruncatedMesh, dofs: &[f64]) -> Result<Self> {
        if dofs.len() != Self::free_dofs(&mesh) {
            return Err(Error::param(format!(
                "expected {} coefficients, got {}",
                Self::free_dofs(&mesh),
                dofs.len()
            )));
        }
        let mut coefficients = dofs.to_vec();
        coefficients.extend([0.0, 0.0]);
        let mut p = Self { mesh, coefficients, weighted_norm_sq: 0.0 };
        p.weighted_norm_sq = p.weighted_norm_sq_now();
        Ok(p)
    }

    /// Hermite interpolant of `(f, f')`; the far end is clamped regardless of `f`.
    pub fn interpolate(mesh: TruncatedMesh, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Self {
        let n = mesh.node_count();
        let mut dofs = Vec::with_capacity(2 * (n - 1));
        for &r in &mesh.nodes()[..n - 1] {
            dofs.push(f(r));
            dofs.push(df(r));
        }
        Self::from_dofs(mesh, &dofs).expect("length matches by construction")
    }

    pub fn zero(mesh: TruncatedMesh) -> Self {
        let n = Self::free_dofs(&mesh);
        Self::from_dofs(mesh, &vec![0.0; n]).unwrap()
    }

    pub fn mesh(&self) -> &TruncatedMesh {
        &self.mesh
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// The free coefficients, i.e. the vector the fiber matrices act on.
    pub fn dofs(&self) -> &[f64] {
        &self.coefficients[..self.coefficients.len() - 2]
    }

    pub fn recorded_norm_sq(&self) -> f64 {
        self.weighted_norm_sq
    }

    pub fn scaled(&self, s: f64) -> Self {
        let dofs: Vec<f64> = self.dofs().iter().map(|c| c * s).collect();
        Self::from_dofs(self.mesh.clone(), &dofs).unwrap()
    }

    fn element_coeffs(&self, e: usize) -> [f64; 4] {
        let c = &self.coefficients[2 * e..2 * e + 4];
        [c[0], c[1], c[2], c[3]]
    }

    /// `(f, f', f'', f''')` at `r`, taken from the element containing `r`
    /// (the left element at interior nodes, the first element at `R`).
    pub fn eval(&self, r: f64) -> [f64; 4] {
        let e = self.mesh.locate(r);
        self.eval_in_element(e, r)
    }

    pub fn eval_in_element(&self, e: usize, r: f64) -> [f64; 4] {
        let (a, b) = self.mesh.element(e);
        let h = b - a;
        let shape = HermiteShape::at(h, (r - a) / h);
        let c = self.element_coeffs(e);
        let comb = |w: &[f64; 4]| w.iter().zip(&c).map(|(x, y)| x * y).sum::<f64>();
        [comb(&shape.value), comb(&shape.d1), comb(&shape.d2), comb(&shape.d3)]
    }

    /// Gauss samples `(r, weight, [f, f', f''])` over the whole mesh using `rule`.
    pub fn samples<'a>(&'a self, rule: &'a GaussRule) -> impl Iterator<Item = (f64, f64, [f64; 3])> + 'a {
        (0..self.mesh.element_count()).flat_map(move |e| {
            let (a, b) = self.mesh.element(e);
            let h = b - a;
            let c = self.element_coeffs(e);
            rule.unit_interval().map(move |(s, w)| {
                let shape = HermiteShape::at(h, s);
                let comb = |v: &[f64; 4]| v.iter().zip(&c).map(|(x, y)| x * y).sum::<f64>();
                (a + h * s, w * h, [comb(&shape.value), comb(&shape.d1), comb(&shape.d2)])
            })
        })
    }

    /// `∫ f² r dr` with the mesh's Gauss rule.
    pub fn weighted_norm_sq_now(&self) -> f64 {
        let rule = GaussRule::legendre(self.mesh.gauss_points());
        self.samples(&rule).map(|(r, w, f)| w * f[0] * f[0] * r).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::build_mesh;

    #[test]
    fn interpolates_cubics_exactly_away_from_clamp() {
        let mesh = build_mesh(1.0, 2.0, 8, 6).unwrap();
        let f = |r: f64| 2.0 - r + 0.5 * r * r - 0.25 * r.powi(3);
        let df = |r: f64| -1.0 + r - 0.75 * r * r;
        let p = HermiteProfile::interpolate(mesh, f, df);
        for r in [1.0, 1.1, 1.37, 2.2] {
            let v = p.eval(r);
            assert!((v[0] - f(r)).abs() < 1e-13);
            assert!((v[1] - df(r)).abs() < 1e-12);
            assert!((v[2] - (1.0 - 1.5 * r)).abs() < 1e-10);
            assert!((v[3] + 1.5).abs() < 1e-8);
        }
        assert_eq!(p.eval(3.0)[0], 0.0);
    }

    #[test]
    fn shape_functions_partition_unity() {
        for xi in [0.0, 0.3, 0.8, 1.0] {
            let s = HermiteShape::at(0.7, xi);
            assert!((s.value[0] + s.value[2] - 1.0).abs() < 1e-15);
            assert!((s.d1[0] + s.d1[2]).abs() < 1e-14);
        }
    }
}
