//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector
/// columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V·diag(λ)·V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= self.values[j];
            }
        }
        scaled.matmul(&self.vectors.adjoint())
    }
}

/// Unitary 2×2 rotation `[[g_pp, g_pq], [g_qp, g_qq]]` that diagonalizes the
/// Hermitian block `[[alpha, gamma], [conj(gamma), beta]]` by congruence.
///
/// Returns `None` when `gamma` is already zero.
pub(crate) fn jacobi_rotation(alpha: f64, beta: f64, gamma: C64) -> Option<[C64; 4]> {
    let g = gamma.norm();
    if g == 0.0 {
        return None;
    }
    let phase = gamma / g;
    let theta = (beta - alpha) / (2.0 * g);
    let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ph = phase.conj();
    Some([C64::new(c, 0.0), C64::new(s, 0.0), ph * (-s), ph * c])
}

/// Right-multiplies columns `p`, `q` of `m` by the 2×2 rotation `g`.
pub(crate) fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, g: &[C64; 4]) {
    for k in 0..m.rows() {
        let a = m[(k, p)];
        let b = m[(k, q)];
        m[(k, p)] = a * g[0] + b * g[2];
        m[(k, q)] = a * g[1] + b * g[3];
    }
}

/// Left-multiplies rows `p`, `q` of `m` by the adjoint of `g`.
fn rotate_rows_adjoint(m: &mut ComplexMatrix, p: usize, q: usize, g: &[C64; 4]) {
    for k in 0..m.cols() {
        let a = m[(p, k)];
        let b = m[(q, k)];
        m[(p, k)] = g[0].conj() * a + g[2].conj() * b;
        m[(q, k)] = g[1].conj() * a + g[3].conj() * b;
    }
}

/// Eigendecomposition of a Hermitian matrix. Inputs farther than `tol` from
/// Hermitian (max-entry norm) are rejected; the Hermitian part is used.
pub fn hermitian_eig(h: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", h.rows(), h.cols())));
    }
    let deviation = h.hermiticity_deviation();
    if deviation > tol * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    let mut a = (h + &h.adjoint()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-16 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let Some(g) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq) else {
                    continue;
                };
                rotate_columns(&mut a, p, q, &g);
                rotate_rows_adjoint(&mut a, p, q, &g);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                rotate_columns(&mut v, p, q, &g);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// exp(i·t·H) for Hermitian `h`, via its eigendecomposition.
pub fn expi_hermitian(h: &ComplexMatrix, t: f64, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h, tol)?;
    let n = eig.values.len();
    let mut scaled = eig.vectors.clone();
    for j in 0..n {
        let phase = C64::from_polar(1.0, t * eig.values[j]);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    Ok(scaled.matmul(&eig.vectors.adjoint()))
}

/// Groups sorted eigenvalues into clusters whose consecutive gaps do not
/// exceed `threshold`. Returns index ranges into the sorted list.
pub fn cluster_sorted(values: &[f64], threshold: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > threshold {
            out.push(start..i);
            start = i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{ONE, ZERO};
    use crate::linalg::random::{random_hermitian, seeded_rng};

    #[test]
    fn diagonal_input_sorted_ascending() {
        let h = ComplexMatrix::from_real(3, 3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]);
        let e = hermitian_eig(&h, 1e-10).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        // permutation basis: column j has a single unit entry
        for j in 0..3 {
            let col = e.vectors.col(j);
            let ones = col.iter().filter(|z| (z.norm() - 1.0).abs() < 1e-15).count();
            assert_eq!(ones, 1);
        }
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 2)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = hermitian_eig(&x, 1e-10).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        let minus = e.vectors.col(0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // |−⟩ up to phase
        let overlap = minus[0] * s - minus[1] * s;
        assert!((overlap.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_vec(2, 2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        assert!(matches!(hermitian_eig(&m, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn random_reconstruction_and_residuals() {
        let mut rng = seeded_rng(11);
        for n in 1..=16 {
            for _ in 0..6 {
                let h = random_hermitian(n, &mut rng);
                let e = hermitian_eig(&h, 1e-10).unwrap();
                let norm = h.frobenius_norm();
                assert!((&e.reconstruct() - &h).max_abs() <= 1e-9 * norm.max(1.0));
                assert!(e.vectors.unitarity_deviation() <= 1e-10);
                for j in 0..n {
                    let v = e.vectors.col(j);
                    let hv = h.mul_vec(&v);
                    let r: f64 = hv.iter().zip(&v).map(|(a, b)| (a - b * e.values[j]).norm_sqr()).sum::<f64>().sqrt();
                    assert!(r <= 1e-9 * norm.max(1.0));
                }
                assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let mut rng = seeded_rng(3);
        let v = crate::linalg::random::random_unitary_with(4, &mut rng);
        let d = ComplexMatrix::diag(&[ONE, ONE, -ONE, -ONE]);
        let h = v.matmul(&d).matmul(&v.adjoint());
        let e = hermitian_eig(&h, 1e-10).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-12 && (e.values[3] - 1.0).abs() < 1e-12);
        assert!((&e.reconstruct() - &h).max_abs() < 1e-12);
    }

    #[test]
    fn clusters() {
        let c = cluster_sorted(&[0.0, 1e-12, 1.0, 2.0, 2.0 + 1e-10], 1e-8);
        assert_eq!(c, vec![0..2, 2..3, 3..5]);
        assert!(cluster_sorted(&[], 1e-8).is_empty());
    }

    #[test]
    fn expi_of_pauli_z() {
        let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let u = expi_hermitian(&z, 0.7, 1e-10).unwrap();
        assert!((u[(0, 0)] - C64::from_polar(1.0, 0.7)).norm() < 1e-14);
        assert!((u[(1, 1)] - C64::from_polar(1.0, -0.7)).norm() < 1e-14);
    }
}
