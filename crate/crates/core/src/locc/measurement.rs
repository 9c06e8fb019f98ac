use serde::{Deserialize, Serialize};

use crate::bipartite::Side;
use crate::linalg::ComplexMatrix;

/// Completeness slack Σ_r M_r† M_r = I.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// A generalized measurement performed by one party. Outcome `r` is the
/// index into `operators`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub party: Side,
    pub operators: Vec<ComplexMatrix>,
}

/// Result of the completeness check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompletenessCheck {
    pub ok: bool,
    /// ‖Σ_r M_r† M_r − I‖_max, infinite for malformed operator lists.
    pub deviation: f64,
}

impl Measurement {
    pub fn new(party: Side, operators: Vec<ComplexMatrix>) -> Self {
        Self { party, operators }
    }

    /// Single-outcome measurement applying a unitary.
    pub fn unitary(party: Side, u: ComplexMatrix) -> Self {
        Self { party, operators: vec![u] }
    }

    pub fn outcomes(&self) -> usize {
        self.operators.len()
    }

    pub fn dim(&self) -> Option<usize> {
        self.operators.first().map(|m| m.cols())
    }
}

pub fn validate_measurement(m: &Measurement) -> CompletenessCheck {
    let Some(d) = m.dim() else {
        return CompletenessCheck { ok: false, deviation: f64::INFINITY };
    };
    if m.operators.iter().any(|op| op.rows() != d || op.cols() != d) {
        return CompletenessCheck { ok: false, deviation: f64::INFINITY };
    }
    let sum = m.operators.iter().fold(ComplexMatrix::zeros(d, d), |acc, op| &acc + &op.adjoint().matmul(op));
    let deviation = (&sum - &ComplexMatrix::identity(d)).max_abs();
    CompletenessCheck { ok: deviation <= COMPLETENESS_TOL, deviation }
}
