//! Normalized Laplacian spectra and the spectral embedding.

mod embedding;
mod jacobi;
mod lanczos;
mod laplacian;

pub use embedding::{embed, Embedding};
pub(crate) use embedding::dist as euclidean;
pub use laplacian::LaplacianOperator;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{RngFactory, StreamRng};

/// Dense decomposition is used up to this many vertices under `Auto`.
pub const DENSE_LIMIT: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenMethod {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Clone, Copy, Debug)]
pub struct EigenOptions {
    pub method: EigenMethod,
    /// Required residual ‖Lx − λx‖.
    pub tol: f64,
    /// Matvec budget for Lanczos; `None` means 50·n.
    pub max_matvecs: Option<usize>,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { method: EigenMethod::Auto, tol: 1e-10, max_matvecs: None, seed: 0 }
    }
}

/// The `k` smallest eigenpairs of L, ascending; `vectors[i]` has length n.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralBasis {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub method: EigenMethod,
    /// Operator applications used (0 for the dense path).
    pub matvecs: usize,
}

impl SpectralBasis {
    pub fn k(&self) -> usize {
        self.values.len()
    }

    pub fn lambda(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    /// Keeps only the first `k` pairs.
    pub fn truncated(&self, k: usize) -> SpectralBasis {
        SpectralBasis {
            values: self.values[..k].to_vec(),
            vectors: self.vectors[..k].to_vec(),
            residuals: self.residuals[..k].to_vec(),
            method: self.method,
            matvecs: self.matvecs,
        }
    }
}

/// Flip each eigenvector so that its first entry of largest magnitude is
/// positive. Makes the kernel vector D_w^{1/2}·1 come out positive.
fn canonical_sign(x: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &v in x.iter() {
        if v.abs() > best + 1e-12 {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

fn residual(op: &LaplacianOperator, lambda: f64, x: &[f64]) -> f64 {
    let mut y = vec![0.0; x.len()];
    op.apply(x, &mut y);
    y.iter().zip(x).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt()
}

/// Refines the leading eigenpairs of a dense decomposition. The implicit QR
/// iteration can leave nearby eigenvectors mixed at the 1e-9 level; a
/// first-order correction against the full basis, followed by Rayleigh–Ritz
/// on the corrected block, brings residuals down to rounding level.
/// Eigenpairs of a small symmetric matrix. Cyclic Jacobi up to
/// `JACOBI_LIMIT` (accurate to rounding and never mispairs values with
/// vectors, which nalgebra's implicit QR can do on nearly diagonal input);
/// beyond that, nalgebra with every value recomputed as the Rayleigh
/// quotient of its own vector.
pub(crate) fn small_eigen(h: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    if h.nrows() <= jacobi::JACOBI_LIMIT {
        return jacobi::eigen(h);
    }
    let eig = SymmetricEigen::new(h.clone());
    let vals = (0..h.nrows())
        .map(|i| {
            let v = eig.eigenvectors.column(i);
            v.dot(&(&h * v))
        })
        .collect();
    (vals, eig.eigenvectors)
}

fn refine_dense(op: &LaplacianOperator, values: &[f64], vecs: &DMatrix<f64>, k: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = op.n();
    // Keep a cluster straddling λ_k together.
    let lk = values[k - 1];
    let w = (k..n).find(|&i| values[i] > lk + 1e-4).unwrap_or(n);
    let mut y = DMatrix::zeros(n, w);
    for j in 0..w {
        let x: Vec<f64> = vecs.column(j).iter().copied().collect();
        let mut out = vec![0.0; n];
        op.apply(&x, &mut out);
        y.column_mut(j).copy_from_slice(&out);
    }
    let c = vecs.transpose() * &y;
    let mut block = vecs.columns(0, w).into_owned();
    if w < n {
        let d = DMatrix::from_fn(n - w, w, |i, j| c[(w + i, j)] / (values[j] - values[w + i]));
        block += vecs.columns(w, n - w) * d;
    }
    // Orthonormalize (twice) and diagonalize within the block.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(w);
    for j in 0..w {
        let mut v: Vec<f64> = block.column(j).iter().copied().collect();
        for _ in 0..2 {
            for q in &basis {
                let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
        basis.push(v);
    }
    let lq: Vec<Vec<f64>> = basis
        .iter()
        .map(|q| {
            let mut out = vec![0.0; n];
            op.apply(q, &mut out);
            out
        })
        .collect();
    let h = DMatrix::from_fn(w, w, |i, j| {
        let a: f64 = basis[i].iter().zip(&lq[j]).map(|(a, b)| a * b).sum();
        let b: f64 = basis[j].iter().zip(&lq[i]).map(|(a, b)| a * b).sum();
        0.5 * (a + b)
    });
    let (evals, evecs) = small_eigen(h);
    let mut order: Vec<usize> = (0..w).collect();
    order.sort_by(|&i, &j| evals[i].total_cmp(&evals[j]));
    let vals = order[..k].iter().map(|&i| evals[i]).collect();
    let vectors = order[..k]
        .iter()
        .map(|&i| {
            let col = evecs.column(i);
            let mut v = vec![0.0; n];
            for (j, q) in basis.iter().enumerate() {
                v.iter_mut().zip(q).for_each(|(a, b)| *a += col[j] * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
            v
        })
        .collect();
    (vals, vectors)
}

fn raw_pairs(g: &Graph, k: usize, opts: &EigenOptions, rng: &mut StreamRng) -> Result<(Vec<f64>, Vec<Vec<f64>>, EigenMethod, usize)> {
    let n = g.n();
    let op = LaplacianOperator::new(g);
    let method = match opts.method {
        EigenMethod::Auto if n <= DENSE_LIMIT => EigenMethod::Dense,
        EigenMethod::Auto => EigenMethod::Lanczos,
        m => m,
    };
    match method {
        EigenMethod::Dense => {
            let eig = SymmetricEigen::new(op.dense());
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
            let sorted_vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
            let sorted_vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
            let (values, vectors) = refine_dense(&op, &sorted_vals, &sorted_vecs, k);
            Ok((values, vectors, method, 0))
        }
        _ => {
            let budget = opts.max_matvecs.unwrap_or(50 * n).max(1);
            let out = lanczos::smallest_eigenpairs(
                &|x: &[f64], y: &mut [f64]| op.apply(x, y),
                n,
                k,
                opts.tol,
                op.norm_bound(),
                budget,
                rng,
            )?;
            Ok((out.values, out.vectors, EigenMethod::Lanczos, out.matvecs))
        }
    }
}

fn finish(g: &Graph, values: Vec<f64>, mut vectors: Vec<Vec<f64>>, method: EigenMethod, matvecs: usize, tol: f64) -> Result<SpectralBasis> {
    let op = LaplacianOperator::new(g);
    let mut residuals = Vec::with_capacity(values.len());
    for (l, x) in values.iter().zip(vectors.iter_mut()) {
        canonical_sign(x);
        residuals.push(residual(&op, *l, x));
    }
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::NonConvergence { matvecs: 0, residual: worst });
    }
    Ok(SpectralBasis { values, vectors, residuals, method, matvecs })
}

/// The `k` smallest eigenpairs of the normalized Laplacian of `g`.
pub fn eigenbasis(g: &Graph, k: usize, opts: &EigenOptions) -> Result<SpectralBasis> {
    if k == 0 || k > g.n() {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k = {k}, n = {}", g.n())));
    }
    let mut rng = RngFactory::new(opts.seed).stream("lanczos", 0, 0);
    let (values, vectors, method, matvecs) = raw_pairs(g, k, opts, &mut rng)?;
    finish(g, values, vectors, method, matvecs, opts.tol)
}

/// Like [`eigenbasis`], but when λ_k is repeated the basis of its
/// eigenspace is mixed by a random rotation before truncation to `k`.
/// Used to escape embeddings where some vertex maps to the zero vector.
pub fn eigenbasis_rerandomized(g: &Graph, k: usize, opts: &EigenOptions, attempt: u64) -> Result<SpectralBasis> {
    if k == 0 || k > g.n() {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k = {k}, n = {}", g.n())));
    }
    let n = g.n();
    let mut rng = RngFactory::new(opts.seed).stream("rerandomize", attempt, 0);
    let mut extra = (k + 8).min(n);
    let (values, vectors, method, matvecs) = loop {
        let (v, x, m, mv) = raw_pairs(g, extra, opts, &mut rng)?;
        let lk = v[k - 1];
        let close = |a: f64| (a - lk).abs() <= 1e-8 * (1.0 + lk.abs());
        if extra == n || !close(v[extra - 1]) {
            break (v, x, m, mv);
        }
        extra = (2 * extra).min(n);
    };
    let lk = values[k - 1];
    let cluster: Vec<usize> = (0..values.len())
        .filter(|&i| (values[i] - lk).abs() <= 1e-8 * (1.0 + lk.abs()))
        .collect();
    let c = cluster.len();
    // Random orthonormal c×c matrix by Gram–Schmidt on Gaussian columns.
    let mut rot: Vec<Vec<f64>> = Vec::with_capacity(c);
    while rot.len() < c {
        let mut v = rng.normal_vec(c);
        for r in &rot {
            let h: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(r).for_each(|(a, b)| *a -= h * b);
        }
        let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nv > 1e-8 {
            rot.push(v.into_iter().map(|a| a / nv).collect());
        }
    }
    let mut mixed = vectors.clone();
    for (a, r) in rot.iter().enumerate() {
        let mut x = vec![0.0; n];
        for (b, &i) in cluster.iter().enumerate() {
            x.iter_mut().zip(&vectors[i]).for_each(|(xv, v)| *xv += r[b] * v);
        }
        mixed[cluster[a]] = x;
    }
    let mut values = values;
    values.truncate(k);
    mixed.truncate(k);
    finish(g, values, mixed, method, matvecs, opts.tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut e = vec![];
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v, 1.0));
            }
        }
        Graph::new(n, &e, None).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        Graph::new(n, &e, None).unwrap()
    }

    #[test]
    fn clique_ring_any_edge_order() {
        // Bridges listed with their cliques instead of last: same graph,
        // different rounding; once mispaired the Ritz values in the refinement.
        let (g0, _) = crate::generators::clique_ring(&[10, 10, 10, 10], 0.01);
        let mut e = vec![];
        for u in 0..g0.n() {
            for (v, c) in g0.neighbors(u) {
                if u < v {
                    e.push((u, v, c));
                }
            }
        }
        let g = Graph::new(g0.n(), &e, None).unwrap();
        for k in 4..=8 {
            let b = eigenbasis(&g, k, &EigenOptions::default()).unwrap();
            assert!(b.residuals.iter().all(|&r| r < 1e-12), "k={k}: {:?}", b.residuals);
        }
    }

    #[test]
    fn k4_spectrum() {
        for method in [EigenMethod::Dense, EigenMethod::Lanczos] {
            let b = eigenbasis(&complete(4), 4, &EigenOptions { method, ..Default::default() }).unwrap();
            let want = [0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0];
            for (a, w) in b.values.iter().zip(want) {
                assert!((a - w).abs() < 1e-10, "{method:?}: {:?}", b.values);
            }
        }
    }

    #[test]
    fn c4_spectrum() {
        for method in [EigenMethod::Dense, EigenMethod::Lanczos] {
            let b = eigenbasis(&cycle(4), 4, &EigenOptions { method, ..Default::default() }).unwrap();
            let want = [0.0, 1.0, 1.0, 2.0];
            for (a, w) in b.values.iter().zip(want) {
                assert!((a - w).abs() < 1e-10, "{method:?}: {:?}", b.values);
            }
        }
    }

    #[test]
    fn kernel_vector_is_positive() {
        let b = eigenbasis(&cycle(7), 2, &EigenOptions::default()).unwrap();
        let x = &b.vectors[0];
        for &v in x {
            assert!((v - 1.0 / 7f64.sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn lanczos_handles_disconnected_multiplicity() {
        let e = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (6, 7, 1.0)];
        let g = Graph::new(8, &e, None).unwrap();
        let opts = EigenOptions { method: EigenMethod::Lanczos, ..Default::default() };
        let b = eigenbasis(&g, 4, &opts).unwrap();
        assert!(b.values[..3].iter().all(|v| v.abs() < 1e-10), "{:?}", b.values);
        assert!((b.values[3] - 1.5).abs() < 1e-10, "{:?}", b.values);
    }

    #[test]
    fn rejects_bad_k() {
        assert!(eigenbasis(&cycle(4), 0, &EigenOptions::default()).is_err());
        assert!(eigenbasis(&cycle(4), 5, &EigenOptions::default()).is_err());
    }

    #[test]
    fn rerandomized_spans_same_values() {
        let g = complete(6);
        let opts = EigenOptions::default();
        let a = eigenbasis(&g, 3, &opts).unwrap();
        let b = eigenbasis_rerandomized(&g, 3, &opts, 1).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}
