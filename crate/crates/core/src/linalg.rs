//! Small dense linear algebra.
//!
//! Everything in this crate works on matrices of single-digit size
//! (moduli counts, Cholesky factors of norm bodies), so the routines
//! below are written directly rather than pulling in a linear-algebra
//! dependency: Cholesky, an SPD solve, cyclic Jacobi for symmetric
//! eigenproblems, and a partially pivoted complex LU determinant.
//! Matrices are row-major `&[f64]` / `&[Complex]` slices.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Complex, Error, Result};

/// Lower-triangular Cholesky factor of a symmetric positive definite
/// matrix, or `NotPositiveDefinite`.
pub(crate) fn cholesky(n: usize, a: &[f64]) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err(Error::NotPositiveDefinite);
                }
                l[i * n + i] = libm::sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Solve `A x = b` given the Cholesky factor `l` of `A`.
pub(crate) fn cholesky_solve(n: usize, l: &[f64], b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[i * n + k] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[k * n + i] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    y
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi.
///
/// Returns eigenvalues sorted ascending and the matching orthonormal
/// eigenvectors as rows of the second vector (eigenvector `k` occupies
/// `vectors[k*n..(k+1)*n]`).
pub(crate) fn symmetric_eigen(n: usize, a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    // v starts as the identity; accumulated rotations live in its columns.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a
        .iter()
        .fold(0.0_f64, |acc, &x| {
            if libm::fabs(x) > acc {
                libm::fabs(x)
            } else {
                acc
            }
        })
        .max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if libm::sqrt(off) <= tol * n as f64 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if libm::fabs(apq) <= tol * 1e-2 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // smaller root of t^2 + 2 theta t - 1 = 0, for stability
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + libm::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[i * n + i]
            .partial_cmp(&m[j * n + j])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut values = Vec::with_capacity(n);
    let mut vectors = vec![0.0; n * n];
    for (slot, &col) in order.iter().enumerate() {
        values.push(m[col * n + col]);
        for k in 0..n {
            vectors[slot * n + k] = v[k * n + col];
        }
    }
    (values, vectors)
}

/// Determinant of a complex matrix by LU with partial pivoting.
pub(crate) fn complex_determinant(n: usize, a: &[Complex]) -> Complex {
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut det = Complex::new(1.0, 0.0);
    for col in 0..n {
        let mut pivot = col;
        let mut best = m[col * n + col].norm_sqr();
        for row in col + 1..n {
            let cand = m[row * n + col].norm_sqr();
            if cand > best {
                best = cand;
                pivot = row;
            }
        }
        if best == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let d = m[col * n + col];
        det *= d;
        for row in col + 1..n {
            let factor = m[row * n + col] / d;
            for k in col..n {
                let sub = factor * m[col * n + k];
                m[row * n + k] -= sub;
            }
        }
    }
    det
}
