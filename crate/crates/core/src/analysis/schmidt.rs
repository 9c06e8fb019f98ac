//! Operator Schmidt decomposition U = Σ_k λ_k A_k ⊗ B_k.

use serde::{Deserialize, Serialize};

use crate::bipartite::{kron, reshuffle, BipartiteUnitary};
use crate::linalg::{svd, ComplexMatrix};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchmidtDecomposition {
    pub d_a: usize,
    pub d_b: usize,
    /// Descending, min(d_a², d_b²) entries including zeros.
    pub lambdas: Vec<f64>,
    /// Hilbert-Schmidt orthonormal operators on H_A.
    pub a_ops: Vec<ComplexMatrix>,
    /// Hilbert-Schmidt orthonormal operators on H_B.
    pub b_ops: Vec<ComplexMatrix>,
    /// ‖U − Σ λ_k A_k ⊗ B_k‖_max measured when the decomposition was built.
    pub reconstruction_error: f64,
}

impl SchmidtDecomposition {
    /// Number of coefficients above `tol_rank · λ_1`.
    pub fn rank(&self, tol_rank: f64) -> usize {
        let top = self.lambdas.first().copied().unwrap_or(0.0);
        self.lambdas.iter().filter(|&&l| l > tol_rank * top).count()
    }

    /// Σ_k λ_k A_k ⊗ B_k over the first `terms` coefficients.
    pub fn partial_sum(&self, terms: usize) -> ComplexMatrix {
        let n = self.d_a * self.d_b;
        (0..terms.min(self.lambdas.len())).fold(ComplexMatrix::zeros(n, n), |acc, k| {
            &acc + &kron(&self.a_ops[k], &self.b_ops[k]).scale_real(self.lambdas[k])
        })
    }
}

/// SVD of the realigned matrix: R = Σ s_k u_k v_k† gives A_k = mat(u_k) and
/// B_k = mat(conj(v_k)).
pub fn operator_schmidt_decomposition(u: &BipartiteUnitary) -> SchmidtDecomposition {
    let (d_a, d_b) = (u.d_a(), u.d_b());
    let r = reshuffle(u);
    let dec = svd(&r);
    let terms = dec.s.len();
    let a_ops = (0..terms).map(|k| ComplexMatrix::column(&dec.u.col(k)).reshape(d_a, d_a)).collect();
    let b_ops = (0..terms).map(|k| ComplexMatrix::column(&dec.v.col(k)).conj().reshape(d_b, d_b)).collect();
    let mut out = SchmidtDecomposition { d_a, d_b, lambdas: dec.s, a_ops, b_ops, reconstruction_error: 0.0 };
    out.reconstruction_error = (&out.partial_sum(terms) - u.matrix()).max_abs();
    out
}

/// Operator Schmidt rank with relative cutoff `tol_rank`.
pub fn operator_schmidt_rank(u: &BipartiteUnitary, tol_rank: f64) -> usize {
    operator_schmidt_decomposition(u).rank(tol_rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::linalg::random_unitary;

    fn check_invariants(sd: &SchmidtDecomposition) {
        assert!(sd.reconstruction_error <= 1e-9);
        let sum_sq: f64 = sd.lambdas.iter().map(|l| l * l).sum();
        assert!((sum_sq - (sd.d_a * sd.d_b) as f64).abs() <= 1e-8);
        for k in 0..sd.lambdas.len() {
            for l in 0..sd.lambdas.len() {
                let want = if k == l { 1.0 } else { 0.0 };
                assert!((sd.a_ops[k].hs_inner(&sd.a_ops[l]).norm() - want).abs() <= 1e-9);
                assert!((sd.b_ops[k].hs_inner(&sd.b_ops[l]).norm() - want).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn product_operator_single_term() {
        let u = BipartiteUnitary::product(&random_unitary(2, 1), &random_unitary(3, 2)).unwrap();
        let sd = operator_schmidt_decomposition(&u);
        check_invariants(&sd);
        assert!((sd.lambdas[0] - 6f64.sqrt()).abs() < 1e-12);
        assert_eq!(sd.rank(1e-7), 1);
    }

    #[test]
    fn cnot_two_equal_terms() {
        let sd = operator_schmidt_decomposition(&gates::cnot());
        check_invariants(&sd);
        assert!((sd.lambdas[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!((sd.lambdas[1] - 2f64.sqrt()).abs() < 1e-12);
        assert!(sd.lambdas[2] / sd.lambdas[0] < 1e-10);
        // A-ops are diagonal: they span {|0⟩⟨0|, |1⟩⟨1|}
        for k in 0..2 {
            assert!(sd.a_ops[k].max_offdiag() < 1e-12);
        }
    }

    #[test]
    fn heisenberg_full_rank() {
        for alpha in [0.1, 0.3, std::f64::consts::PI / 5.0] {
            assert_eq!(operator_schmidt_rank(&gates::heisenberg(alpha).unwrap(), 1e-7), 4);
        }
        assert_eq!(operator_schmidt_rank(&gates::heisenberg(0.0).unwrap(), 1e-7), 1);
    }

    #[test]
    fn random_unitaries_satisfy_invariants() {
        for (da, db) in [(2, 2), (2, 3), (3, 3), (4, 2)] {
            for seed in 0..5 {
                let u = BipartiteUnitary::new(da, db, random_unitary(da * db, seed)).unwrap();
                check_invariants(&operator_schmidt_decomposition(&u));
            }
        }
    }
}
