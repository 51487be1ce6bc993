use nalgebra::DMatrix;

use crate::graph::Graph;

/// Normalized Laplacian L = D_w^{-1/2} L̃ D_w^{-1/2}, applied matrix-free.
///
/// Here L̃ is the combinatorial Laplacian built from the edge costs and
/// D_w is the diagonal of vertex weights, so
/// zᵀLz = Σ_{uv} c_uv (z_u/√w_u − z_v/√w_v)².
pub struct LaplacianOperator<'g> {
    g: &'g Graph,
    inv_sqrt_w: Vec<f64>,
}

impl<'g> LaplacianOperator<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let inv_sqrt_w = g.weights().iter().map(|w| 1.0 / w.sqrt()).collect();
        LaplacianOperator { g, inv_sqrt_w }
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let s = &self.inv_sqrt_w;
        for u in 0..self.g.n() {
            let zu = x[u] * s[u];
            let mut acc = 0.0;
            for (v, c) in self.g.neighbors(u) {
                acc += c * (zu - x[v] * s[v]);
            }
            y[u] = acc * s[u];
        }
    }

    pub fn quadratic_form(&self, z: &[f64]) -> f64 {
        let s = &self.inv_sqrt_w;
        self.g
            .edges()
            .iter()
            .map(|&(u, v, c)| c * (z[u] * s[u] - z[v] * s[v]).powi(2))
            .sum()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.g.n();
        let s = &self.inv_sqrt_w;
        let mut m = DMatrix::zeros(n, n);
        for u in 0..n {
            m[(u, u)] = self.g.incident_cost(u) * s[u] * s[u];
        }
        for &(u, v, c) in self.g.edges() {
            let x = -c * s[u] * s[v];
            m[(u, v)] = x;
            m[(v, u)] = x;
        }
        m
    }

    /// Upper bound on ‖L‖ (Gershgorin).
    pub fn norm_bound(&self) -> f64 {
        let s = &self.inv_sqrt_w;
        (0..self.g.n())
            .map(|u| {
                let off: f64 = self.g.neighbors(u).map(|(v, c)| c * s[u] * s[v]).sum();
                self.g.incident_cost(u) * s[u] * s[u] + off
            })
            .fold(0.0, f64::max)
    }
}
