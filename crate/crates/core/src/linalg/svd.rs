//! One-sided (Hestenes) Jacobi SVD.

use super::eig::{jacobi_rotation, rotate_columns};
use super::matrix::{vec_inner, vec_norm, ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 100;

/// Thin SVD `m = u · diag(s) · v†` with `k = min(rows, cols)` singular
/// values in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.u.clone();
        for (j, &s) in self.s.iter().enumerate() {
            for i in 0..us.rows() {
                us[(i, j)] *= s;
            }
        }
        us.matmul(&self.v.adjoint())
    }

    /// Number of singular values above `rel_tol · s[0]`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        match self.s.first() {
            Some(&top) if top > 0.0 => self.s.iter().filter(|&&x| x > rel_tol * top).count(),
            _ => 0,
        }
    }
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    if m.rows() < m.cols() {
        let t = tall_svd(&m.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    tall_svd(m)
}

fn tall_svd(m: &ComplexMatrix) -> Svd {
    let (rows, n) = (m.rows(), m.cols());
    let mut w = m.clone();
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for k in 0..rows {
                    let a = w[(k, i)];
                    let b = w[(k, j)];
                    alpha += a.norm_sqr();
                    beta += b.norm_sqr();
                    gamma += a.conj() * b;
                }
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() < 1e-300 {
                    continue;
                }
                if let Some(g) = jacobi_rotation(alpha, beta, gamma) {
                    rotate_columns(&mut w, i, j, &g);
                    rotate_columns(&mut v, i, j, &g);
                    rotated = true;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| vec_norm(&w.col(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let top = s.first().copied().unwrap_or(0.0);

    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut pending = Vec::new();
    for (pos, &j) in order.iter().enumerate() {
        if s[pos] > 1e-14 * top && s[pos] > 0.0 {
            u_cols.push(w.col(j).iter().map(|z| z / s[pos]).collect());
        } else {
            u_cols.push(Vec::new());
            pending.push(pos);
        }
    }
    // Null directions: complete to an orthonormal set.
    for pos in pending {
        let accepted: Vec<Vec<C64>> = u_cols.iter().filter(|c| !c.is_empty()).cloned().collect();
        u_cols[pos] = complete_orthonormal(rows, &accepted);
    }
    let u = ComplexMatrix::from_columns(rows, &u_cols);
    let v = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Svd { u, s, v }
}

/// A unit vector orthogonal to every vector in `basis` (assumed orthonormal,
/// with fewer than `dim` members).
pub fn complete_orthonormal(dim: usize, basis: &[Vec<C64>]) -> Vec<C64> {
    let mut best: Option<Vec<C64>> = None;
    let mut best_norm = 0.0;
    for e in 0..dim {
        let mut cand = vec![ZERO; dim];
        cand[e] = C64::new(1.0, 0.0);
        // two Gram-Schmidt passes
        for _ in 0..2 {
            for b in basis {
                let c = vec_inner(b, &cand);
                for (x, y) in cand.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let nrm = vec_norm(&cand);
        if nrm > best_norm {
            best_norm = nrm;
            best = Some(cand);
        }
        if best_norm > 0.5 {
            break;
        }
    }
    let v = best.expect("dimension must exceed basis size");
    v.iter().map(|z| z / best_norm).collect()
}
