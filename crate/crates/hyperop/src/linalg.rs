//! Dense symmetric eigensolver used across the crate.
//!
//! The spectra handled here are heavily degenerate by construction (every
//! eigenvalue of a right-linear operator repeats once per generator), and the
//! eigenvectors must span each eigenspace to working precision for the graded
//! machinery to hold together. The cyclic Jacobi iteration delivers an
//! orthogonal eigenbasis with a diagonalization residual at the rounding
//! level, independent of clustering.

use nalgebra::{DMatrix, DVector};

/// Eigenvalues and orthonormal eigenvector columns of a symmetric matrix by
/// the cyclic Jacobi method. The input is symmetrized first.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = DMatrix::identity(n, n);
    if n == 0 {
        return (DVector::zeros(0), v);
    }
    let scale = a.norm().max(1e-300);
    for _sweep in 0..128 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    (DVector::from(a.diagonal()), v)
}

/// Smallest eigenvalue of the symmetrized matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    symmetric_eigen(m)
        .0
        .iter()
        .fold(f64::INFINITY, |acc, l| acc.min(*l))
}

/// Applies a real function to a symmetric matrix through its eigensystem.
pub fn symmetric_fn<F: Fn(f64) -> f64>(m: &DMatrix<f64>, f: F) -> DMatrix<f64> {
    let (vals, vecs) = symmetric_eigen(m);
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for (i, l) in vals.iter().enumerate() {
        let v = DVector::from(vecs.column(i).clone_owned());
        out += (&v * v.transpose()) * f(*l);
    }
    out
}
