use serde::{Deserialize, Serialize};

use super::detect::{detect_controlled_verbose, Detection};
use super::form::ControlledUnitaryForm;
use super::schmidt::operator_schmidt_decomposition;
use crate::bipartite::{BipartiteUnitary, Side};
use crate::tolerance::ToleranceConfig;

/// Verdict on one-piece relocalizability of a two-party unitary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Classification {
    pub d_a: usize,
    pub d_b: usize,
    pub osr: usize,
    pub schmidt_coefficients: Vec<f64>,
    /// Rank-one operators are local; they are reported as trivially
    /// controlled.
    pub local: bool,
    pub controlled_from_a: Option<ControlledUnitaryForm>,
    pub controlled_from_b: Option<ControlledUnitaryForm>,
    pub relocalizable: bool,
    pub detection_a: Detection,
    pub detection_b: Detection,
    pub tolerances: ToleranceConfig,
    pub seed: u64,
}

impl Classification {
    pub fn form(&self, side: Side) -> Option<&ControlledUnitaryForm> {
        match side {
            Side::A => self.controlled_from_a.as_ref(),
            Side::B => self.controlled_from_b.as_ref(),
        }
    }
}

pub fn classify(u: &BipartiteUnitary, tol: &ToleranceConfig, seed: u64) -> Classification {
    let sd = operator_schmidt_decomposition(u);
    let osr = sd.rank(tol.tol_rank);
    let mut detection_a = detect_controlled_verbose(u, Side::A, tol, seed);
    let mut detection_b = detect_controlled_verbose(u, Side::B, tol, seed);
    let controlled_from_a = detection_a.form.take();
    let controlled_from_b = detection_b.form.take();
    let relocalizable = controlled_from_a.is_some() || controlled_from_b.is_some();
    Classification {
        d_a: u.d_a(),
        d_b: u.d_b(),
        osr,
        schmidt_coefficients: sd.lambdas,
        local: osr == 1,
        controlled_from_a,
        controlled_from_b,
        relocalizable,
        detection_a,
        detection_b,
        tolerances: *tol,
        seed,
    }
}
