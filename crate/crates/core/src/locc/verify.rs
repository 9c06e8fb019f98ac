//! Checking that a protocol restores one party's input after a unitary.
//!
//! For every input product |ψ_A⟩|ψ_B⟩ the protocol runs on U|ψ_A⟩|ψ_B⟩.
//! With side B protected, each branch must leave B in |ψ_B⟩ and the averaged
//! output must equal τ ⊗ |ψ_B⟩⟨ψ_B| for τ its own A-marginal (and
//! symmetrically for side A).
//!
//! Inputs are seeded Haar products plus every product of the structured
//! states |i⟩, (|i⟩+|j⟩)/√2 and (|i⟩+i|j⟩)/√2. Their projectors span the
//! operators on each factor, so by linearity of the channel a pass on this
//! set extends to all inputs up to tolerance.

use serde::{Deserialize, Serialize};

use super::execute::{check_input, run_leaves, Branch};
use super::protocol::LoccProtocol;
use crate::bipartite::{kron, partial_trace, reduced_state, BipartiteUnitary, Side};
use crate::error::{Error, Result};
use crate::linalg::random::random_state;
use crate::linalg::{basis_vector, kron_vec, seeded_rng, vec_inner, ComplexMatrix, C64, I};

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelocalizationReport {
    /// Party whose input is to be restored.
    pub side: Side,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub inputs_checked: usize,
    /// Per input, the fidelity of the protected party's state on each
    /// branch with probability above the pruning threshold.
    pub branch_fidelities: Vec<Vec<f64>>,
    pub min_fidelity: f64,
    /// Largest ‖Λ(ρ) − (product form)‖_F over inputs.
    pub max_channel_residual: f64,
    pub verdict: bool,
}

/// Structured states on C^d spanning the operator space.
pub fn spanning_states(d: usize) -> Vec<Vec<C64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<Vec<C64>> = (0..d).map(|i| basis_vector(d, i)).collect();
    for i in 0..d {
        for j in i + 1..d {
            let mut plus = vec![C64::new(0.0, 0.0); d];
            plus[i] = C64::new(s, 0.0);
            plus[j] = C64::new(s, 0.0);
            out.push(plus.clone());
            plus[j] = I * s;
            out.push(plus);
        }
    }
    out
}

/// Seeded Haar products followed by all structured products.
pub fn verification_inputs(d_a: usize, d_b: usize, samples: usize, seed: u64) -> Vec<(Vec<C64>, Vec<C64>)> {
    let mut rng = seeded_rng(seed);
    let mut inputs: Vec<(Vec<C64>, Vec<C64>)> =
        (0..samples).map(|_| (random_state(d_a, &mut rng), random_state(d_b, &mut rng))).collect();
    let sa = spanning_states(d_a);
    let sb = spanning_states(d_b);
    for a in &sa {
        for b in &sb {
            inputs.push((a.clone(), b.clone()));
        }
    }
    inputs
}

pub fn verify_one_piece_relocalization(
    u: &BipartiteUnitary,
    p: &LoccProtocol,
    side: Side,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<RelocalizationReport> {
    let inputs = verification_inputs(u.d_a(), u.d_b(), samples, seed);
    let mut report = verify_on_inputs(u, p, side, &inputs, tol)?;
    report.samples = samples;
    report.seed = seed;
    Ok(report)
}

/// Verification on an explicit list of (ψ_A, ψ_B) inputs.
pub fn verify_on_inputs(
    u: &BipartiteUnitary,
    p: &LoccProtocol,
    side: Side,
    inputs: &[(Vec<C64>, Vec<C64>)],
    tol: f64,
) -> Result<RelocalizationReport> {
    p.validate()?;
    if (p.d_a, p.d_b) != (u.d_a(), u.d_b()) {
        return Err(Error::Dimension(format!(
            "protocol acts on {}x{}, unitary on {}x{}",
            p.d_a,
            p.d_b,
            u.d_a(),
            u.d_b()
        )));
    }
    let leaves = p.leaves();
    let (d_a, d_b) = (u.d_a(), u.d_b());
    let mut branch_fidelities = Vec::with_capacity(inputs.len());
    let mut min_fidelity = f64::INFINITY;
    let mut max_channel_residual = 0.0f64;

    for (psi_a, psi_b) in inputs {
        let delocalized = u.matrix().mul_vec(&kron_vec(psi_a, psi_b));
        check_input(p, &delocalized)?;
        let branches = run_leaves(&leaves, &delocalized)?;
        let target = match side {
            Side::A => psi_a,
            Side::B => psi_b,
        };
        let fids: Vec<f64> = branches.iter().map(|b| branch_fidelity(b, d_a, d_b, side, target)).collect();
        min_fidelity = fids.iter().copied().fold(min_fidelity, f64::min);
        max_channel_residual = max_channel_residual.max(channel_residual(&branches, d_a, d_b, side, target)?);
        branch_fidelities.push(fids);
    }

    Ok(RelocalizationReport {
        side,
        samples: inputs.len(),
        seed: 0,
        tolerance: tol,
        inputs_checked: inputs.len(),
        branch_fidelities,
        min_fidelity,
        max_channel_residual,
        verdict: min_fidelity >= 1.0 - tol,
    })
}

/// ⟨ψ|ρ|ψ⟩ for the protected party's reduced state on one branch.
fn branch_fidelity(b: &Branch, d_a: usize, d_b: usize, side: Side, target: &[C64]) -> f64 {
    let rho = reduced_state(&b.post_state, d_a, d_b, side);
    let r_psi = rho.mul_vec(target);
    vec_inner(target, &r_psi).re
}

fn channel_residual(branches: &[Branch], d_a: usize, d_b: usize, side: Side, target: &[C64]) -> Result<f64> {
    let n = d_a * d_b;
    let out = branches.iter().fold(ComplexMatrix::zeros(n, n), |acc, b| {
        &acc + &ComplexMatrix::outer(&b.post_state, &b.post_state).scale_real(b.probability)
    });
    let pure = ComplexMatrix::outer(target, target);
    let product = match side {
        Side::A => kron(&pure, &partial_trace(&out, d_a, d_b, Side::A)?),
        Side::B => kron(&partial_trace(&out, d_a, d_b, Side::B)?, &pure),
    };
    Ok((&out - &product).frobenius_norm())
}
