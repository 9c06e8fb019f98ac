//! Simultaneous diagonalization of commuting Hermitian families.
//!
//! Works by recursive eigenspace splitting: diagonalize a random real
//! combination of the family restricted to the current subspace, cut the
//! spectrum at gaps, and recurse into every cluster that some member does
//! not yet act on as a scalar. A final sweep checks the off-diagonal mass of
//! every member in the returned basis.

use rand_distr::{Distribution, StandardNormal};

use super::eig::{cluster_sorted, hermitian_eig};
use super::matrix::{ComplexMatrix, C64};
use super::random::{seeded_rng, Rng};
use crate::error::{Error, Result};

const RANDOM_ATTEMPTS: usize = 3;

/// Returns a unitary whose columns jointly diagonalize `family`.
pub fn joint_diagonalize(family: &[ComplexMatrix], tol_commute: f64, seed: u64) -> Result<ComplexMatrix> {
    let Some(first) = family.first() else {
        return Err(Error::Dimension("empty family".into()));
    };
    let n = first.rows();
    for h in family {
        if h.rows() != n || h.cols() != n {
            return Err(Error::Dimension("family members differ in shape".into()));
        }
        let deviation = h.hermiticity_deviation();
        if deviation > tol_commute * h.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
    }
    let max_commutator = max_relative_commutator(family);
    if max_commutator > tol_commute {
        return Err(Error::NonCommuting { max_commutator });
    }

    let mut rng = seeded_rng(seed);
    let cluster_tol = tol_commute.max(1e-8);
    let mut columns = Vec::with_capacity(n);
    split(ComplexMatrix::identity(n), family, cluster_tol, &mut rng, &mut columns);
    let basis = ComplexMatrix::from_columns(n, &columns);

    let mut worst = 0.0f64;
    for h in family {
        let off = basis.adjoint().matmul(h).matmul(&basis).max_offdiag();
        worst = worst.max(off / h.max_abs().max(1.0));
    }
    if worst > 10.0 * tol_commute {
        return Err(Error::NonCommuting { max_commutator: worst });
    }
    Ok(basis)
}

/// max ‖[H_i, H_j]‖_max normalized by max(1, ‖H_i‖·‖H_j‖).
pub fn max_relative_commutator(family: &[ComplexMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            let scale = (a.max_abs() * b.max_abs()).max(1.0);
            worst = worst.max(a.commutator(b).max_abs() / scale);
        }
    }
    worst
}

fn is_scalar(m: &ComplexMatrix, tol: f64) -> bool {
    let k = m.rows();
    let mean = m.trace() / k as f64;
    (m - &ComplexMatrix::identity(k).scale(mean)).max_abs() <= tol * m.max_abs().max(1.0)
}

fn split(basis: ComplexMatrix, family: &[ComplexMatrix], tol: f64, rng: &mut Rng, out: &mut Vec<Vec<C64>>) {
    let k = basis.cols();
    let adj = basis.adjoint();
    let restricted: Vec<ComplexMatrix> =
        family.iter().map(|h| adj.matmul(h).matmul(&basis)).filter(|r| k > 1 && !is_scalar(r, tol)).collect();
    if restricted.is_empty() {
        out.extend((0..k).map(|j| basis.col(j)));
        return;
    }

    // Random combinations first, then single members as a fallback.
    let mut candidates: Vec<ComplexMatrix> = (0..RANDOM_ATTEMPTS)
        .map(|_| {
            restricted.iter().fold(ComplexMatrix::zeros(k, k), |acc, r| {
                let w: f64 = StandardNormal.sample(rng);
                &acc + &r.scale_real(w)
            })
        })
        .collect();
    candidates.extend(restricted.iter().cloned());

    for combo in candidates {
        let Ok(eig) = hermitian_eig(&combo, 1e-6) else { continue };
        let scale = combo.frobenius_norm().max(1e-300);
        let clusters = cluster_sorted(&eig.values, tol * scale);
        if clusters.len() < 2 {
            continue;
        }
        let rotated = basis.matmul(&eig.vectors);
        for range in clusters {
            let cols: Vec<Vec<C64>> = range.map(|j| rotated.col(j)).collect();
            split(ComplexMatrix::from_columns(basis.rows(), &cols), family, tol, rng, out);
        }
        return;
    }
    // No split found: leave the block; the verification sweep decides.
    out.extend((0..k).map(|j| basis.col(j)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ONE;
    use crate::linalg::random::random_unitary;

    fn max_offdiag_in(basis: &ComplexMatrix, h: &ComplexMatrix) -> f64 {
        basis.adjoint().matmul(h).matmul(basis).max_offdiag()
    }

    #[test]
    fn diagonal_family_gives_permuted_standard_basis() {
        let d1 = ComplexMatrix::diag(&[ONE, ONE * 2.0, ONE * 3.0]);
        let d2 = ComplexMatrix::diag(&[ONE * 5.0, ONE, ONE]);
        let b = joint_diagonalize(&[d1, d2], 1e-8, 0).unwrap();
        for j in 0..3 {
            let col = b.col(j);
            assert_eq!(col.iter().filter(|z| z.norm() > 1e-12).count(), 1);
        }
    }

    #[test]
    fn identity_family_accepts_any_basis() {
        let b = joint_diagonalize(&[ComplexMatrix::identity(4)], 1e-8, 1).unwrap();
        assert!(b.unitarity_deviation() < 1e-14);
    }

    #[test]
    fn recovers_hidden_basis() {
        let v = random_unitary(4, 99);
        let d1 = ComplexMatrix::diag(&[ONE * 0.3, ONE * 0.3, ONE * -1.1, ONE * 2.0]);
        let d2 = ComplexMatrix::diag(&[ONE * 1.0, ONE * -0.5, ONE * -0.5, ONE * -0.5]);
        let h1 = v.matmul(&d1).matmul(&v.adjoint());
        let h2 = v.matmul(&d2).matmul(&v.adjoint());
        let b = joint_diagonalize(&[h1.clone(), h2.clone()], 1e-8, 7).unwrap();
        assert!(b.unitarity_deviation() < 1e-12);
        assert!(max_offdiag_in(&b, &h1) < 1e-10);
        assert!(max_offdiag_in(&b, &h2) < 1e-10);
        // Jointly non-degenerate: each recovered column matches a column of v up to phase.
        for j in 0..4 {
            let bj = b.col(j);
            let best = (0..4).map(|m| super::super::matrix::vec_inner(&v.col(m), &bj).norm()).fold(0.0, f64::max);
            assert!((best - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn non_commuting_is_reported() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(joint_diagonalize(&[x, z], 1e-8, 0), Err(Error::NonCommuting { .. })));
    }
}
