//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use nalgebra::DMatrix;

/// Largest order handed to [`eigen`]; each sweep costs O(n³).
pub const JACOBI_LIMIT: usize = 96;

/// Eigenvalues (unsorted) and eigenvectors (columns) of symmetric `a`.
pub fn eigen(mut a: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut v = DMatrix::identity(n, n);
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)] * a[(i, j)]).sum();
        if off.sqrt() <= f64::EPSILON * 1e-3 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // Rotation zeroing a[p][q] (Golub–Van Loan, symmetric Schur 2×2).
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)]).collect(), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &DMatrix<f64>) {
        let (vals, vecs) = eigen(a.clone());
        let n = a.nrows();
        for i in 0..n {
            let x = vecs.column(i);
            assert!((a * x - x * vals[i]).norm() < 1e-13 * (1.0 + a.norm()), "pair {i}");
        }
        assert!((vecs.transpose() * &vecs - DMatrix::<f64>::identity(n, n)).norm() < 1e-13);
    }

    #[test]
    fn nearly_diagonal_spread_spectrum() {
        let d = [4.4e-4, 0.0, 1.1098, 2.2e-4, 2.2e-4 + 1e-16, 1.11, 1.11 + 1e-15];
        let a = DMatrix::from_fn(7, 7, |i, j| if i == j { d[i] } else { 1e-12 * ((i + j) as f64).sin() });
        check(&a);
    }

    #[test]
    fn dense_random_like() {
        let a = DMatrix::from_fn(12, 12, |i, j| (((i * j) as f64) + ((i + j) as f64).cos()).sin());
        check(&(&a + a.transpose()));
    }
}
