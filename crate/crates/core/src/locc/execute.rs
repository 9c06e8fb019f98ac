use serde::{Deserialize, Serialize};

use super::protocol::{apply_local, AccumulatedPath, LoccProtocol};
use crate::bipartite::kron;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, vec_norm, ComplexMatrix, C64};

/// Branches below this probability are dropped.
pub const PRUNE_PROBABILITY: f64 = 1e-12;
/// Total probability that may be dropped by pruning.
pub const MAX_PRUNED_MASS: f64 = 1e-10;

/// One complete outcome sequence of an executed protocol.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Branch {
    pub outcomes: Vec<usize>,
    pub probability: f64,
    /// Normalized post-measurement state, corrections applied.
    pub post_state: Vec<C64>,
    pub accumulated_a: ComplexMatrix,
    pub accumulated_b: ComplexMatrix,
}

pub(crate) fn check_input(p: &LoccProtocol, input: &[C64]) -> Result<()> {
    if input.len() != p.d_a * p.d_b {
        return Err(Error::Dimension(format!(
            "state has {} amplitudes, protocol expects {}",
            input.len(),
            p.d_a * p.d_b
        )));
    }
    let norm = vec_norm(input);
    if norm.is_nan() || (norm * norm - 1.0).abs() > 1e-9 {
        return Err(Error::Unnormalized { norm });
    }
    Ok(())
}

pub(crate) fn run_leaves(leaves: &[AccumulatedPath], input: &[C64]) -> Result<Vec<Branch>> {
    let mut branches = Vec::with_capacity(leaves.len());
    let mut pruned = 0.0;
    for leaf in leaves {
        let phi = apply_local(&leaf.a, &leaf.b, input);
        let probability = phi.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if probability <= PRUNE_PROBABILITY {
            pruned += probability;
            continue;
        }
        let scale = 1.0 / probability.sqrt();
        branches.push(Branch {
            outcomes: leaf.outcomes.clone(),
            probability,
            post_state: phi.iter().map(|z| z * scale).collect(),
            accumulated_a: leaf.a.clone(),
            accumulated_b: leaf.b.clone(),
        });
    }
    if pruned > MAX_PRUNED_MASS {
        return Err(Error::MalformedProtocol(format!("pruned probability mass {pruned:.3e} too large")));
    }
    Ok(branches)
}

/// Runs the protocol on a pure input, returning every branch with non-negligible
/// probability in depth-first outcome order.
pub fn execute_protocol(p: &LoccProtocol, input: &[C64]) -> Result<Vec<Branch>> {
    p.validate()?;
    check_input(p, input)?;
    run_leaves(&p.leaves(), input)
}

/// Λ(ρ) = Σ_R (M^(R) ⊗ K^(R)) ρ (M^(R) ⊗ K^(R))†.
pub fn apply_channel(p: &LoccProtocol, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    p.validate()?;
    let n = p.d_a * p.d_b;
    if rho.rows() != n || rho.cols() != n {
        return Err(Error::Dimension(format!("density matrix must be {n}x{n}")));
    }
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
    }
    let eig = hermitian_eig(rho, 1e-9).map_err(|e| Error::InvalidDensity(e.to_string()))?;
    if eig.values[0] < -1e-9 {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {:.3e}", eig.values[0])));
    }
    Ok(p.leaves().iter().fold(ComplexMatrix::zeros(n, n), |acc, leaf| {
        let k = kron(&leaf.a, &leaf.b);
        &acc + &k.matmul(rho).matmul(&k.adjoint())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::Side;
    use crate::gates::ket_bra;
    use crate::linalg::random::random_state;
    use crate::linalg::{kron_vec, seeded_rng, ONE, ZERO};
    use crate::locc::measurement::Measurement;
    use crate::locc::protocol::{random_protocol, ProtocolNode};

    fn plus() -> Vec<C64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![ONE * s, ONE * s]
    }

    fn a_computational() -> LoccProtocol {
        let m = Measurement::new(Side::A, vec![ket_bra(2, 0, 0), ket_bra(2, 1, 1)]);
        LoccProtocol { d_a: 2, d_b: 2, root: ProtocolNode::measure(m, Vec::new()) }
    }

    #[test]
    fn empty_protocol_keeps_state() {
        let mut rng = seeded_rng(1);
        let psi = random_state(6, &mut rng);
        let b = execute_protocol(&LoccProtocol::empty(2, 3), &psi).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b[0].probability - 1.0).abs() < 1e-12);
        assert!(b[0].post_state.iter().zip(&psi).all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn born_rule_on_plus_zero() {
        let input = kron_vec(&plus(), &[ONE, ZERO]);
        let b = execute_protocol(&a_computational(), &input).unwrap();
        assert_eq!(b.len(), 2);
        for (r, br) in b.iter().enumerate() {
            assert!((br.probability - 0.5).abs() < 1e-15);
            assert_eq!(br.outcomes, vec![r]);
        }
    }

    #[test]
    fn zero_probability_branches_are_pruned() {
        let input = kron_vec(&[ONE, ZERO], &[ONE, ZERO]);
        let b = execute_protocol(&a_computational(), &input).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].outcomes, vec![0]);
    }

    #[test]
    fn rejects_unnormalized_or_wrong_size() {
        let p = a_computational();
        assert!(matches!(execute_protocol(&p, &[ONE, ONE, ZERO, ZERO]), Err(Error::Unnormalized { .. })));
        assert!(execute_protocol(&p, &[ONE, ZERO]).is_err());
    }

    #[test]
    fn pinching_channel() {
        let plus_proj = ComplexMatrix::outer(&plus(), &plus());
        let mut rng = seeded_rng(3);
        let psi_b = random_state(2, &mut rng);
        let rho_b = ComplexMatrix::outer(&psi_b, &psi_b);
        let out = apply_channel(&a_computational(), &kron(&plus_proj, &rho_b)).unwrap();
        let expected = kron(&ComplexMatrix::identity(2).scale_real(0.5), &rho_b);
        assert!((&out - &expected).max_abs() < 1e-15);
        assert_eq!(
            apply_channel(&LoccProtocol::empty(2, 2), &kron(&plus_proj, &rho_b)).unwrap(),
            kron(&plus_proj, &rho_b)
        );
    }

    #[test]
    fn channel_rejects_bad_density() {
        let p = LoccProtocol::empty(2, 2);
        assert!(apply_channel(&p, &ComplexMatrix::identity(4)).is_err());
        let neg = ComplexMatrix::diag(&[ONE * 1.5, ONE * -0.5, ZERO, ZERO]);
        assert!(matches!(apply_channel(&p, &neg), Err(Error::InvalidDensity(_))));
    }

    #[test]
    fn branches_agree_with_channel() {
        let mut rng = seeded_rng(21);
        for _ in 0..20 {
            let p = random_protocol(2, 3, 3, &mut rng);
            let psi = random_state(6, &mut rng);
            let branches = execute_protocol(&p, &psi).unwrap();
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            assert!((total - 1.0).abs() < 1e-9);
            let mixed = branches.iter().fold(ComplexMatrix::zeros(6, 6), |acc, b| {
                &acc + &ComplexMatrix::outer(&b.post_state, &b.post_state).scale_real(b.probability)
            });
            let channel = apply_channel(&p, &ComplexMatrix::outer(&psi, &psi)).unwrap();
            assert!((&mixed - &channel).max_abs() < 1e-9);
        }
    }
}
