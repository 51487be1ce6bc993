//! Lanczos with full reorthogonalization for the smallest eigenpairs of a
//! symmetric operator.
//!
//! Single-vector Lanczos only sees one copy of a repeated eigenvalue, so on
//! breakdown the Krylov basis is extended with a fresh random direction, and
//! after convergence a second run on the orthogonal complement of the found
//! vectors checks that nothing smaller was missed.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rng::StreamRng;

pub(crate) struct LanczosOut {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub matvecs: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn orthogonalize(w: &mut [f64], against: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in against {
            let h = dot(w, q);
            axpy(w, -h, q);
        }
    }
}

/// Random unit vector orthogonal to `against`, or `None` if the complement
/// is numerically empty.
fn fresh_direction(n: usize, against: &[Vec<f64>], rng: &mut StreamRng) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut q = rng.normal_vec(n);
        orthogonalize(&mut q, against);
        let nq = dot(&q, &q).sqrt();
        if nq > 1e-8 {
            q.iter_mut().for_each(|x| *x /= nq);
            return Some(q);
        }
    }
    None
}

struct Run<'a, F: Fn(&[f64], &mut [f64])> {
    op: &'a F,
    n: usize,
    tol: f64,
    scale: f64,
    budget: usize,
    matvecs: usize,
}

impl<F: Fn(&[f64], &mut [f64])> Run<'_, F> {
    fn residual(&mut self, lambda: f64, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.n];
        (self.op)(x, &mut y);
        self.matvecs += 1;
        axpy(&mut y, -lambda, x);
        dot(&y, &y).sqrt()
    }

    /// The `k` smallest eigenpairs of the operator restricted to the
    /// orthogonal complement of `deflate`.
    fn smallest(&mut self, k: usize, deflate: &[Vec<f64>], rng: &mut StreamRng) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.n;
        let avail = n - deflate.len();
        let k = k.min(avail);
        if k == 0 {
            return Ok((vec![], vec![]));
        }
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut q = fresh_direction(n, deflate, rng).ok_or_else(|| Error::InvalidParameter("empty complement".into()))?;
        let mut best = f64::INFINITY;
        loop {
            let mut w = vec![0.0; n];
            (self.op)(&q, &mut w);
            self.matvecs += 1;
            let a = dot(&w, &q);
            axpy(&mut w, -a, &q);
            if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
                axpy(&mut w, -b, prev);
            }
            basis.push(q);
            alpha.push(a);
            orthogonalize(&mut w, deflate);
            orthogonalize(&mut w, &basis);
            let b = dot(&w, &w).sqrt();
            let m = basis.len();
            let exhausted = m == avail;
            let check = m >= k && (m < 40 || m % 8 == 0 || exhausted || b < 1e-10 * self.scale);
            if check {
                let mut t = DMatrix::zeros(m, m);
                for i in 0..m {
                    t[(i, i)] = alpha[i];
                    if i + 1 < m {
                        t[(i, i + 1)] = beta[i];
                        t[(i + 1, i)] = beta[i];
                    }
                }
                let (evals, evecs) = super::small_eigen(t);
                let mut order: Vec<usize> = (0..m).collect();
                order.sort_by(|&i, &j| evals[i].total_cmp(&evals[j]));
                let est = order[..k]
                    .iter()
                    .map(|&i| (b * evecs[(m - 1, i)]).abs())
                    .fold(0.0, f64::max);
                if exhausted || est <= 0.1 * self.tol {
                    let mut vals = Vec::with_capacity(k);
                    let mut vecs = Vec::with_capacity(k);
                    for &i in &order[..k] {
                        let mut x = vec![0.0; n];
                        for (j, qj) in basis.iter().enumerate() {
                            axpy(&mut x, evecs[(j, i)], qj);
                        }
                        let nx = dot(&x, &x).sqrt();
                        x.iter_mut().for_each(|v| *v /= nx);
                        vals.push(evals[i]);
                        vecs.push(x);
                    }
                    let worst = vals
                        .iter()
                        .zip(&vecs)
                        .map(|(&l, x)| self.residual(l, x))
                        .fold(0.0, f64::max);
                    best = best.min(worst);
                    if worst <= self.tol || exhausted {
                        return Ok((vals, vecs));
                    }
                }
            }
            if self.matvecs >= self.budget {
                return Err(Error::NonConvergence { matvecs: self.matvecs, residual: best });
            }
            if b < 1e-10 * self.scale {
                let mut against = deflate.to_vec();
                against.extend(basis.iter().cloned());
                q = fresh_direction(n, &against, rng).ok_or_else(|| Error::NonConvergence {
                    matvecs: self.matvecs,
                    residual: best,
                })?;
                beta.push(0.0);
            } else {
                w.iter_mut().for_each(|x| *x /= b);
                q = w;
                beta.push(b);
            }
        }
    }
}

/// The `k` smallest eigenpairs of the symmetric operator `op` on ℝⁿ.
/// `scale` is an upper bound on the operator norm.
pub(crate) fn smallest_eigenpairs<F: Fn(&[f64], &mut [f64])>(
    op: &F,
    n: usize,
    k: usize,
    tol: f64,
    scale: f64,
    max_matvecs: usize,
    rng: &mut StreamRng,
) -> Result<LanczosOut> {
    let mut run = Run { op, n, tol, scale: scale.max(1e-300), budget: max_matvecs, matvecs: 0 };
    let (mut values, mut vectors) = run.smallest(k, &[], rng)?;
    // Look for eigenvalues the first run skipped.
    while vectors.len() == k && k < n {
        let (v2, x2) = run.smallest(1, &vectors, rng)?;
        let lk = values[k - 1];
        if v2[0] >= lk - tol.max(1e-9 * lk.abs()) {
            break;
        }
        let pos = values.partition_point(|&v| v <= v2[0]);
        values.insert(pos, v2[0]);
        vectors.insert(pos, x2.into_iter().next().unwrap());
        values.truncate(k);
        vectors.truncate(k);
    }
    Ok(LanczosOut { values, vectors, matvecs: run.matvecs })
}
