//! Relocalization for the swap-phase gate when A's input is fixed to |+⟩.
//!
//! U(|+⟩ ⊗ (a|0⟩ + b|1⟩)) = a|0⟩|+⟩ + b|1⟩|−⟩, so measuring A in {|+⟩, |−⟩}
//! leaves B in a|+⟩ ± b|−⟩, which H = |0⟩⟨+| + |1⟩⟨−| (followed by σ_z on
//! the minus outcome) maps back to a|0⟩ + b|1⟩. The gate admits no protocol
//! for arbitrary A inputs, so the number of unknown inputs matters.

use super::measurement::Measurement;
use super::protocol::{Corrections, LoccProtocol, ProtocolNode};
use super::verify::{verify_on_inputs, RelocalizationReport};
use crate::bipartite::Side;
use crate::error::Result;
use crate::gates::{pauli_z, swap_phase};
use crate::linalg::random::random_state;
use crate::linalg::{basis_vector, seeded_rng, ComplexMatrix, C64};

pub const DEMO_TOL: f64 = 1e-10;

fn plus_minus() -> (Vec<C64>, Vec<C64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (vec![C64::new(s, 0.0), C64::new(s, 0.0)], vec![C64::new(s, 0.0), C64::new(-s, 0.0)])
}

/// A measures {|+⟩⟨+|, |−⟩⟨−|}; B applies H or σ_z·H.
pub fn fixed_input_protocol() -> LoccProtocol {
    let (plus, minus) = plus_minus();
    let measurement =
        Measurement::new(Side::A, vec![ComplexMatrix::outer(&plus, &plus), ComplexMatrix::outer(&minus, &minus)]);
    let h = &ComplexMatrix::outer(&basis_vector(2, 0), &plus) + &ComplexMatrix::outer(&basis_vector(2, 1), &minus);
    let zh = pauli_z().matmul(&h);
    let children =
        vec![ProtocolNode::leaf(Corrections::on(Side::B, h)), ProtocolNode::leaf(Corrections::on(Side::B, zh))];
    LoccProtocol { d_a: 2, d_b: 2, root: ProtocolNode::measure(measurement, children) }
}

/// Runs the fixed-input protocol with ψ_A = |+⟩ on |0⟩, |1⟩ and `samples`
/// seeded random ψ_B.
pub fn fixed_input_relocalization_demo(samples: usize, seed: u64) -> Result<RelocalizationReport> {
    let (plus, _) = plus_minus();
    let mut rng = seeded_rng(seed);
    let mut inputs = vec![(plus.clone(), basis_vector(2, 0)), (plus.clone(), basis_vector(2, 1))];
    inputs.extend((0..samples).map(|_| (plus.clone(), random_state(2, &mut rng))));
    let mut report = verify_on_inputs(&swap_phase(), &fixed_input_protocol(), Side::B, &inputs, DEMO_TOL)?;
    report.samples = samples;
    report.seed = seed;
    Ok(report)
}
