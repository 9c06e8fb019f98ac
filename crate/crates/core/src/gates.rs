//! Gallery of named two-party gates.

use serde::{Deserialize, Serialize};

use crate::analysis::form::{ControlBlock, ControlledUnitaryForm};
use crate::bipartite::{kron, BipartiteUnitary, Side};
use crate::error::{Error, Result};
use crate::linalg::eig::expi_hermitian;
use crate::linalg::{random_unitary_with, seeded_rng, ComplexMatrix, C64, I, ONE, ZERO};

pub const GALLERY: &[&str] = &["cnot", "swap_phase", "swap", "identity", "heisenberg", "controlled_random"];

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO]).expect("2x2")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// |i⟩⟨j| on C^d.
pub fn ket_bra(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = ONE;
    m
}

/// |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ σ_x
pub fn cnot() -> BipartiteUnitary {
    let m = &kron(&ket_bra(2, 0, 0), &ComplexMatrix::identity(2)) + &kron(&ket_bra(2, 1, 1), &pauli_x());
    BipartiteUnitary::new(2, 2, m).expect("CNOT is unitary")
}

/// |0⟩⟨0|⊗|0⟩⟨0| + |0⟩⟨1|⊗|1⟩⟨0| + |1⟩⟨0|⊗|0⟩⟨1| − |1⟩⟨1|⊗|1⟩⟨1|
pub fn swap_phase() -> BipartiteUnitary {
    let terms = [
        kron(&ket_bra(2, 0, 0), &ket_bra(2, 0, 0)),
        kron(&ket_bra(2, 0, 1), &ket_bra(2, 1, 0)),
        kron(&ket_bra(2, 1, 0), &ket_bra(2, 0, 1)),
        kron(&ket_bra(2, 1, 1), &ket_bra(2, 1, 1)).scale_real(-1.0),
    ];
    let m = terms.iter().fold(ComplexMatrix::zeros(4, 4), |acc, t| &acc + t);
    BipartiteUnitary::new(2, 2, m).expect("swap-phase gate is unitary")
}

/// Plain SWAP on C^d ⊗ C^d.
pub fn swap(d: usize) -> BipartiteUnitary {
    let m = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (a, b) = (r / d, r % d);
        if c == b * d + a {
            ONE
        } else {
            ZERO
        }
    });
    BipartiteUnitary::new(d, d, m).expect("SWAP is unitary")
}

pub fn identity(d_a: usize, d_b: usize) -> BipartiteUnitary {
    BipartiteUnitary::new(d_a, d_b, ComplexMatrix::identity(d_a * d_b)).expect("identity is unitary")
}

/// exp(iα Σ_j σ^j ⊗ σ^j), exponentiated through the eigendecomposition of
/// the Hermitian generator.
pub fn heisenberg(alpha: f64) -> Result<BipartiteUnitary> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParams("alpha must be finite".into()));
    }
    let generator =
        [pauli_x(), pauli_y(), pauli_z()].iter().fold(ComplexMatrix::zeros(4, 4), |acc, p| &acc + &kron(p, p));
    let u = expi_hermitian(&generator, alpha, 1e-12)?;
    BipartiteUnitary::with_tolerance(2, 2, u, 1e-10)
}

/// Random local-unitary equivalent of a controlled unitary with control on
/// A: Haar `u_local`, `n_blocks` projectors from a Haar basis split into
/// contiguous non-empty groups, Haar target unitaries.
pub fn controlled_random(
    d_a: usize,
    d_b: usize,
    n_blocks: usize,
    seed: u64,
) -> Result<(BipartiteUnitary, ControlledUnitaryForm)> {
    if d_a == 0 || d_b == 0 {
        return Err(Error::InvalidParams("dimensions must be positive".into()));
    }
    if n_blocks == 0 || n_blocks > d_a {
        return Err(Error::InvalidParams(format!("need 1 <= n_blocks <= d_a ({d_a}), got {n_blocks}")));
    }
    let mut rng = seeded_rng(seed);
    let basis = random_unitary_with(d_a, &mut rng);
    let u_local = random_unitary_with(d_a, &mut rng);

    // Block sizes: one vector each, the remainder assigned at random.
    let mut sizes = vec![1usize; n_blocks];
    for _ in n_blocks..d_a {
        let k = rand::Rng::random_range(&mut rng, 0..n_blocks);
        sizes[k] += 1;
    }
    let mut blocks = Vec::with_capacity(n_blocks);
    let mut start = 0;
    for size in sizes {
        let mut p = ComplexMatrix::zeros(d_a, d_a);
        for m in start..start + size {
            let e = basis.col(m);
            p = &p + &ComplexMatrix::outer(&e, &e);
        }
        start += size;
        blocks.push(ControlBlock { projector: p, unitary: random_unitary_with(d_b, &mut rng) });
    }
    let form = ControlledUnitaryForm { control_side: Side::A, u_local, blocks };
    let u = form.reconstruct()?;
    Ok((u, form))
}

/// Parameters accepted by [`build_gate`]; unused fields are ignored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    pub alpha: Option<f64>,
    pub d_a: Option<usize>,
    pub d_b: Option<usize>,
    pub n_blocks: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct BuiltGate {
    pub unitary: BipartiteUnitary,
    /// Generating form, for gates constructed from one.
    pub form: Option<ControlledUnitaryForm>,
}

pub fn build_gate(name: &str, params: &GateParams) -> Result<BuiltGate> {
    let plain = |unitary| Ok(BuiltGate { unitary, form: None });
    match name {
        "cnot" => plain(cnot()),
        "swap_phase" => plain(swap_phase()),
        "swap" => plain(swap(params.d_a.unwrap_or(2))),
        "identity" => {
            let d_a = params.d_a.unwrap_or(2);
            let d_b = params.d_b.unwrap_or(d_a);
            if d_a == 0 || d_b == 0 {
                return Err(Error::InvalidParams("dimensions must be positive".into()));
            }
            plain(identity(d_a, d_b))
        }
        "heisenberg" => {
            let alpha = params.alpha.ok_or_else(|| Error::InvalidParams("heisenberg needs alpha".into()))?;
            plain(heisenberg(alpha)?)
        }
        "controlled_random" => {
            let d_a = params.d_a.unwrap_or(2);
            let d_b = params.d_b.unwrap_or(2);
            let n_blocks = params.n_blocks.unwrap_or(2);
            let (unitary, form) = controlled_random(d_a, d_b, n_blocks, params.seed.unwrap_or(0))?;
            Ok(BuiltGate { unitary, form: Some(form) })
        }
        other => Err(Error::UnknownGate(other.to_string())),
    }
}

/// exp(iα(2·SWAP − I)) written out in closed form; test oracle for
/// [`heisenberg`].
#[doc(hidden)]
pub fn heisenberg_closed_form(alpha: f64) -> ComplexMatrix {
    let phase = C64::from_polar(1.0, -alpha);
    let id = ComplexMatrix::identity(4).scale_real((2.0 * alpha).cos());
    let sw = swap(2).into_matrix().scale(I * (2.0 * alpha).sin());
    (&id + &sw).scale(phase)
}
