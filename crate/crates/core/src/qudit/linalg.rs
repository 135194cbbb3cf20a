//! Dense complex linear algebra for small matrices.
//!
//! Everything in this crate works on matrices of dimension at most a few
//! dozen, so both decompositions use Jacobi sweeps: bit-stable, dependency
//! free, and accurate to machine precision at these sizes.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::tolerances;

/// Result of a singular value decomposition `M = U S V^dagger`.
///
/// `u` is m x r, `v` is n x r with r = min(m, n); singular values are
/// sorted descending. Ties keep the pre-sort column order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: Array2<Complex64>,
    pub v: Array2<Complex64>,
}

/// One-sided Jacobi SVD.
///
/// Orthogonalizes the columns of `M` by right-multiplication with complex
/// plane rotations until the relative off-diagonal mass of the implicit
/// Gram matrix falls below [`tolerances::JACOBI`].
pub fn jacobi_svd(m: &Array2<Complex64>) -> Svd {
    let (rows, cols) = m.dim();
    let mut a = m.clone();
    let mut v: Array2<Complex64> = Array2::eye(cols);

    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let app: f64 = (0..rows).map(|i| a[(i, p)].norm_sqr()).sum();
                let aqq: f64 = (0..rows).map(|i| a[(i, q)].norm_sqr()).sum();
                let apq: Complex64 = (0..rows).map(|i| a[(i, p)].conj() * a[(i, q)]).sum();
                let off = apq.norm();
                if off <= tolerances::JACOBI * (app * aqq).sqrt().max(f64::MIN_POSITIVE) {
                    continue;
                }
                rotated = true;
                // Phase the q column so the cross term becomes real, then
                // apply the classic symmetric-Jacobi rotation.
                let phase = apq / off;
                let tau = (aqq - app) / (2.0 * off);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let ap = a[(i, p)];
                    let aq = a[(i, q)] * phase.conj();
                    a[(i, p)] = c * ap - s * aq;
                    a[(i, q)] = s * ap + c * aq;
                }
                for i in 0..cols {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)] * phase.conj();
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Column norms are the singular values; stable sort keeps input order
    // on ties so repeated decompositions are deterministic.
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());

    let rank_bound = rows.min(cols);
    let mut singular_values = Vec::with_capacity(rank_bound);
    let mut u = Array2::<Complex64>::zeros((rows, rank_bound));
    let mut vv = Array2::<Complex64>::zeros((cols, rank_bound));
    for (out, &j) in order.iter().take(rank_bound).enumerate() {
        let sigma = norms[j];
        singular_values.push(sigma);
        if sigma > 1e-300 {
            for i in 0..rows {
                u[(i, out)] = a[(i, j)] / sigma;
            }
        }
        for i in 0..cols {
            vv[(i, out)] = v[(i, j)];
        }
    }
    // Columns of U belonging to zero singular values are completed to an
    // orthonormal set so downstream consumers always see unit vectors.
    complete_orthonormal(&mut u, &singular_values);

    Svd {
        singular_values,
        u,
        v: vv,
    }
}

fn complete_orthonormal(u: &mut Array2<Complex64>, sigmas: &[f64]) {
    let (rows, cols) = u.dim();
    for (j, &s) in sigmas.iter().enumerate() {
        if s > 1e-300 {
            continue;
        }
        // Gram-Schmidt a standard basis vector against the existing columns.
        'candidates: for cand in 0..rows {
            let mut vec: Array1<Complex64> = Array1::zeros(rows);
            vec[cand] = Complex64::ONE;
            for k in 0..cols {
                if k == j {
                    continue;
                }
                let proj: Complex64 = (0..rows).map(|i| u[(i, k)].conj() * vec[i]).sum();
                for i in 0..rows {
                    let correction = proj * u[(i, k)];
                    vec[i] -= correction;
                }
            }
            let norm = vec.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for i in 0..rows {
                    u[(i, j)] = vec[i] / norm;
                }
                break 'candidates;
            }
        }
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic two-sided Jacobi sweeps.
///
/// Returns the eigenvalues in ascending order. The input is assumed
/// Hermitian; only the strict lower/upper agreement up to round-off matters.
pub fn hermitian_eigenvalues(h: &Array2<Complex64>) -> Vec<f64> {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "matrix must be square");
    let mut a = h.clone();

    let scale = (0..n)
        .map(|i| a[(i, i)].norm())
        .fold(1e-300_f64, f64::max)
        .max(frobenius(&a) / n as f64);

    let max_sweeps = 80;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let off = a[(p, q)].norm();
                if off <= tolerances::JACOBI * scale {
                    continue;
                }
                rotated = true;
                let phase = a[(p, q)] / off;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * off);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Unitary J: identity except
                //   J[p][p] = c, J[p][q] = s, J[q][p] = -s*e^{-i phi}, J[q][q] = c*e^{-i phi}
                // and we update A <- J^dagger A J.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -s * phase.conj();
                let jqq = c * phase.conj();
                // Columns.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * jpp + aiq * jqp;
                    a[(i, q)] = aip * jpq + aiq * jqq;
                }
                // Rows (J^dagger from the left).
                for i in 0..n {
                    let api = a[(p, i)];
                    let aqi = a[(q, i)];
                    a[(p, i)] = jpp.conj() * api + jqp.conj() * aqi;
                    a[(q, i)] = jpq.conj() * api + jqq.conj() * aqi;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

pub fn frobenius(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value (operator 2-norm) of a small dense matrix.
pub fn operator_norm(m: &Array2<Complex64>) -> f64 {
    jacobi_svd(m)
        .singular_values
        .first()
        .copied()
        .unwrap_or(0.0)
}

/// Max entrywise deviation of `U^dagger U` from the identity.
pub fn unitarity_defect(m: &Array2<Complex64>) -> f64 {
    let n = m.ncols();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let dot: Complex64 = (0..m.nrows()).map(|r| m[(r, i)].conj() * m[(r, j)]).sum();
            let target = if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}
