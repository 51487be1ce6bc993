use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::SpectralBasis;

/// Spectral embedding of the vertices, stored row-major (`n × k`).
///
/// `bar(u)` is ū = (x_1(u), …, x_k(u)), `measure(u)` is μ(u) = ‖ū‖²,
/// `zhat(u)` is ū/√w_u and `psi(u)` is the unit vector ū/‖ū‖.
#[derive(Clone, Debug)]
pub struct Embedding {
    k: usize,
    bar: Vec<f64>,
    zhat: Vec<f64>,
    psi: Vec<f64>,
    mu: Vec<f64>,
}

impl Embedding {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn bar(&self, u: usize) -> &[f64] {
        &self.bar[u * self.k..(u + 1) * self.k]
    }

    pub fn zhat(&self, u: usize) -> &[f64] {
        &self.zhat[u * self.k..(u + 1) * self.k]
    }

    pub fn psi(&self, u: usize) -> &[f64] {
        &self.psi[u * self.k..(u + 1) * self.k]
    }

    pub fn measure(&self, u: usize) -> f64 {
        self.mu[u]
    }

    pub fn measures(&self) -> &[f64] {
        &self.mu
    }

    pub fn total_measure(&self) -> f64 {
        self.mu.iter().sum()
    }

    /// ‖ψ(u) − ψ(v)‖.
    pub fn psi_distance(&self, u: usize, v: usize) -> f64 {
        dist(self.psi(u), self.psi(v))
    }

    /// μ of Ball(u, r) in the ψ metric.
    pub fn ball_measure(&self, u: usize, r: f64) -> f64 {
        (0..self.n()).filter(|&v| self.psi_distance(u, v) <= r).map(|v| self.mu[v]).sum()
    }

    /// Σ_{uv} c_uv ‖ẑ_u − ẑ_v‖², which equals the sum of the basis eigenvalues.
    pub fn energy(&self, g: &Graph) -> f64 {
        g.edges().iter().map(|&(u, v, c)| c * dist(self.zhat(u), self.zhat(v)).powi(2)).sum()
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Embeds every vertex using the basis. Fails if some ū is zero, which
/// can only happen when the basis misses a vertex entirely; a re-randomized
/// basis ([`crate::spectral::eigenbasis_rerandomized`]) usually fixes it.
pub fn embed(g: &Graph, basis: &SpectralBasis) -> Result<Embedding> {
    let n = g.n();
    let k = basis.k();
    let mut bar = vec![0.0; n * k];
    for (i, x) in basis.vectors.iter().enumerate() {
        for u in 0..n {
            bar[u * k + i] = x[u];
        }
    }
    let mut zhat = vec![0.0; n * k];
    let mut psi = vec![0.0; n * k];
    let mut mu = vec![0.0; n];
    for u in 0..n {
        let row = &bar[u * k..(u + 1) * k];
        let m: f64 = row.iter().map(|x| x * x).sum();
        if m <= 1e-24 {
            return Err(Error::ZeroEmbedding(u));
        }
        let norm = m.sqrt();
        let sw = g.weight(u).sqrt();
        for i in 0..k {
            zhat[u * k + i] = row[i] / sw;
            psi[u * k + i] = row[i] / norm;
        }
        mu[u] = m;
    }
    Ok(Embedding { k, bar, zhat, psi, mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eigenbasis, EigenOptions};

    #[test]
    fn regular_graph_measures() {
        // 3-cube: 3-regular on 8 vertices.
        let mut e = vec![];
        for u in 0..8usize {
            for b in 0..3 {
                let v = u ^ (1 << b);
                if u < v {
                    e.push((u, v, 1.0));
                }
            }
        }
        let g = Graph::new(8, &e, None).unwrap();
        let basis = eigenbasis(&g, 4, &EigenOptions::default()).unwrap();
        let emb = embed(&g, &basis).unwrap();
        assert!((emb.total_measure() - 4.0).abs() < 1e-10);
        for u in 0..8 {
            assert!((emb.bar(u)[0] - 1.0 / 8f64.sqrt()).abs() < 1e-10);
            // Vertex-transitive: every vertex carries k/n.
            assert!((emb.measure(u) - 0.5).abs() < 1e-10);
        }
        let sum: f64 = basis.values.iter().sum();
        assert!((emb.energy(&g) - sum).abs() < 1e-9);
    }

    #[test]
    fn zero_vector_is_reported() {
        // Two triangles, k = 1: the kernel vector found may live on one component only.
        let e = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)];
        let g = Graph::new(6, &e, None).unwrap();
        let mut basis = eigenbasis(&g, 1, &EigenOptions::default()).unwrap();
        basis.vectors[0] = vec![1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt(), 1.0 / 3f64.sqrt(), 0.0, 0.0, 0.0];
        assert!(matches!(embed(&g, &basis), Err(Error::ZeroEmbedding(3))));
    }
}
