//! Meshes on the truncated radial interval `[R, R + T]`.

use crate::error::{Error, Result};

/// Default number of Gauss points per element.
pub const DEFAULT_GAUSS_POINTS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedMesh {
    nodes: Vec<f64>,
    gauss_points: usize,
}

impl TruncatedMesh {
    /// Builds a mesh from an explicit node list.
    pub fn from_nodes(nodes: Vec<f64>, gauss_points: usize) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::param("mesh needs at least two nodes"));
        }
        if !(nodes[0] > 0.0) {
            return Err(Error::param(format!("left endpoint must be positive, got {}", nodes[0])));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::param("mesh nodes must be strictly increasing"));
        }
        if gauss_points < 4 {
            return Err(Error::param(format!("need at least 4 Gauss points, got {gauss_points}")));
        }
        Ok(Self { nodes, gauss_points })
    }

    pub fn left(&self) -> f64 {
        self.nodes[0]
    }

    pub fn right(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Truncation length `T`.
    pub fn length(&self) -> f64 {
        self.right() - self.left()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn gauss_points(&self) -> usize {
        self.gauss_points
    }

    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    /// Index of the element containing `r` (clamped to the mesh).
    pub fn locate(&self, r: f64) -> usize {
        let n = self.element_count();
        match self.nodes.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(n - 1),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 1),
        }
    }

    /// Splits every element into two halves. The new discrete space contains the old one.
    pub fn refined(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.right());
        Self { nodes, gauss_points: self.gauss_points }
    }

    pub fn with_gauss_points(&self, q: usize) -> Result<Self> {
        Self::from_nodes(self.nodes.clone(), q)
    }
}

/// Uniform partition of `[R, R + T]` into `n_elems` elements.
pub fn build_mesh(radius: f64, length: f64, n_elems: usize, q: usize) -> Result<TruncatedMesh> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param(format!("radius must be positive, got {radius}")));
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::param(format!("truncation length must be positive, got {length}")));
    }
    if n_elems < 4 {
        return Err(Error::param(format!("need at least 4 elements, got {n_elems}")));
    }
    let h = length / n_elems as f64;
    let mut nodes: Vec<f64> = (0..n_elems).map(|i| radius + h * i as f64).collect();
    nodes.push(radius + length);
    TruncatedMesh::from_nodes(nodes, q)
}

/// Mesh that is uniform with spacing `h_core` near `R` and grows geometrically
/// (element size `growth * t` at distance `t` from `R`) further out.
///
/// For a fixed `(R, h_core, growth)` the node sequence is a prefix-stable
/// function of `T`: doubling `T` only appends elements (and moves the last node).
pub fn build_graded_mesh(
    radius: f64,
    length: f64,
    h_core: f64,
    growth: f64,
    q: usize,
) -> Result<TruncatedMesh> {
    if !(radius > 0.0) || !(length > 0.0) || !length.is_finite() {
        return Err(Error::param(format!(
            "graded mesh needs R > 0 and finite T > 0 (R = {radius}, T = {length})"
        )));
    }
    if !(h_core > 0.0) || !(growth >= 0.0) {
        return Err(Error::param("graded mesh needs h_core > 0 and growth >= 0"));
    }
    let h0 = h_core.min(length / 8.0);
    let mut ts = vec![0.0];
    let mut t = 0.0f64;
    loop {
        let h = h0.max(growth * t);
        if t + h >= length {
            // merge a short remainder into the previous element
            if length - t < 0.5 * h && ts.len() > 4 {
                ts.pop();
            }
            ts.push(length);
            break;
        }
        t += h;
        ts.push(t);
    }
    let nodes = ts.into_iter().map(|t| radius + t).collect();
    TruncatedMesh::from_nodes(nodes, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_example() {
        let m = build_mesh(1.0, 1.0, 4, 6).unwrap();
        assert_eq!(m.nodes(), &[1.0, 1.25, 1.5, 1.75, 2.0]);
    }

    #[test]
    fn uniform_spacing_example() {
        let m = build_mesh(2.0, 30.0, 600, 6).unwrap();
        assert_eq!(m.node_count(), 601);
        for w in m.nodes().windows(2) {
            assert!((w[1] - w[0] - 0.05).abs() < 1e-12);
        }
        assert_eq!(m.left(), 2.0);
        assert_eq!(m.right(), 32.0);
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(matches!(build_mesh(1.0, 0.0, 4, 6), Err(Error::Parameter(_))));
        assert!(build_mesh(0.0, 1.0, 4, 6).is_err());
        assert!(build_mesh(1.0, 1.0, 3, 6).is_err());
        assert!(build_mesh(1.0, 1.0, 4, 3).is_err());
    }

    #[test]
    fn refinement_nests_nodes() {
        let m = build_graded_mesh(1.0, 40.0, 0.1, 0.05, 6).unwrap();
        let r = m.refined();
        assert_eq!(r.element_count(), 2 * m.element_count());
        for (i, x) in m.nodes().iter().enumerate() {
            assert_eq!(r.nodes()[2 * i], *x);
        }
    }

    #[test]
    fn graded_mesh_is_prefix_stable_and_ends_at_t() {
        let a = build_graded_mesh(0.5, 15.0, 0.025, 0.02, 6).unwrap();
        let b = build_graded_mesh(0.5, 30.0, 0.025, 0.02, 6).unwrap();
        assert_eq!(a.left(), 0.5);
        assert!((a.right() - 15.5).abs() < 1e-12);
        let k = a.node_count() - 2;
        assert_eq!(&a.nodes()[..k], &b.nodes()[..k]);
        // far-field elements are much larger than the core spacing
        let n = b.node_count();
        assert!(b.nodes()[n - 2] - b.nodes()[n - 3] > 0.2);
    }

    #[test]
    fn locate_finds_element() {
        let m = build_mesh(1.0, 1.0, 4, 6).unwrap();
        assert_eq!(m.locate(1.0), 0);
        assert_eq!(m.locate(1.3), 1);
        assert_eq!(m.locate(2.0), 3);
    }
}
