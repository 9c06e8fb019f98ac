//! Local-unitary equivalents of controlled-unitary operations.

use serde::{Deserialize, Serialize};

use crate::bipartite::{hs_distance, kron, BipartiteUnitary, Side};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const FORM_TOL: f64 = 1e-9;
/// Distinct blocks must differ by more than a global phase by this margin.
const DISTINCT_MARGIN: f64 = 1e-6;

/// One control subspace and the unitary applied to the target when the
/// control party is found there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlBlock {
    pub projector: ComplexMatrix,
    pub unitary: ComplexMatrix,
}

/// `U = (Σ_i P_i ⊗ v_i)(u_local ⊗ I)` when the control party is A, and
/// `U = (Σ_i v_i ⊗ P_i)(I ⊗ u_local)` when it is B.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlledUnitaryForm {
    pub control_side: Side,
    pub u_local: ComplexMatrix,
    pub blocks: Vec<ControlBlock>,
}

impl ControlledUnitaryForm {
    pub fn control_dim(&self) -> usize {
        self.u_local.rows()
    }

    pub fn target_dim(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.unitary.rows())
    }

    pub fn target_side(&self) -> Side {
        self.control_side.other()
    }

    /// (d_a, d_b) of the operator this form describes.
    pub fn dims(&self) -> (usize, usize) {
        match self.control_side {
            Side::A => (self.control_dim(), self.target_dim()),
            Side::B => (self.target_dim(), self.control_dim()),
        }
    }

    /// Checks shapes, completeness and orthogonality of the projectors,
    /// unitarity of every local factor, and that no two blocks coincide up
    /// to a phase.
    pub fn validate(&self) -> Result<()> {
        let dc = self.control_dim();
        let dt = self.target_dim();
        if self.blocks.is_empty() {
            return Err(Error::MalformedForm("no blocks".into()));
        }
        if !self.u_local.is_square() || dc == 0 || dt == 0 {
            return Err(Error::MalformedForm("u_local must be square and non-empty".into()));
        }
        let dev = self.u_local.unitarity_deviation();
        if dev > FORM_TOL {
            return Err(Error::MalformedForm(format!("u_local not unitary ({dev:.3e})")));
        }
        let mut total = ComplexMatrix::zeros(dc, dc);
        for (i, b) in self.blocks.iter().enumerate() {
            if b.projector.rows() != dc || b.projector.cols() != dc {
                return Err(Error::MalformedForm(format!("projector {i} has wrong shape")));
            }
            if b.unitary.rows() != dt || b.unitary.cols() != dt {
                return Err(Error::MalformedForm(format!("block unitary {i} has wrong shape")));
            }
            let dev = b.unitary.unitarity_deviation();
            if dev > FORM_TOL {
                return Err(Error::MalformedForm(format!("block unitary {i} not unitary ({dev:.3e})")));
            }
            for (j, c) in self.blocks.iter().enumerate() {
                let prod = b.projector.matmul(&c.projector);
                let expected = if i == j { b.projector.clone() } else { ComplexMatrix::zeros(dc, dc) };
                let dev = (&prod - &expected).max_abs();
                if dev > FORM_TOL {
                    return Err(Error::MalformedForm(format!(
                        "projectors {i},{j} violate P_i P_j = δ_ij P_i ({dev:.3e})"
                    )));
                }
                if i < j {
                    let overlap = b.unitary.hs_inner(&c.unitary).norm();
                    if overlap >= dt as f64 * (1.0 - DISTINCT_MARGIN) {
                        return Err(Error::MalformedForm(format!("blocks {i},{j} carry the same unitary up to phase")));
                    }
                }
            }
            total = &total + &b.projector;
        }
        let dev = (&total - &ComplexMatrix::identity(dc)).max_abs();
        if dev > FORM_TOL {
            return Err(Error::MalformedForm(format!("projectors do not sum to identity ({dev:.3e})")));
        }
        Ok(())
    }

    /// The full operator, without validation.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let dc = self.control_dim();
        let dt = self.target_dim();
        let mut controlled = ComplexMatrix::zeros(dc * dt, dc * dt);
        for b in &self.blocks {
            let term = match self.control_side {
                Side::A => kron(&b.projector, &b.unitary),
                Side::B => kron(&b.unitary, &b.projector),
            };
            controlled = &controlled + &term;
        }
        let local = match self.control_side {
            Side::A => kron(&self.u_local, &ComplexMatrix::identity(dt)),
            Side::B => kron(&ComplexMatrix::identity(dt), &self.u_local),
        };
        controlled.matmul(&local)
    }

    /// Rebuilds the operator after validating the form.
    pub fn reconstruct(&self) -> Result<BipartiteUnitary> {
        self.validate()?;
        let (d_a, d_b) = self.dims();
        BipartiteUnitary::with_tolerance(d_a, d_b, self.to_matrix(), FORM_TOL)
    }

    /// ‖U − reconstruct(form)‖_HS against a reference operator.
    pub fn residual(&self, reference: &BipartiteUnitary) -> Result<f64> {
        let rebuilt = self.reconstruct()?;
        if (rebuilt.d_a(), rebuilt.d_b()) != (reference.d_a(), reference.d_b()) {
            return Err(Error::Dimension("form and reference differ in local dimensions".into()));
        }
        Ok(hs_distance(rebuilt.matrix(), reference.matrix()))
    }

    /// Same operator described with the parties exchanged.
    pub fn swapped(&self) -> ControlledUnitaryForm {
        ControlledUnitaryForm {
            control_side: self.control_side.other(),
            u_local: self.u_local.clone(),
            blocks: self.blocks.clone(),
        }
    }
}

/// Rebuilds a form and returns the operator together with its distance to
/// `reference`.
pub fn reconstruct(form: &ControlledUnitaryForm, reference: &BipartiteUnitary) -> Result<(BipartiteUnitary, f64)> {
    let rebuilt = form.reconstruct()?;
    let residual = hs_distance(rebuilt.matrix(), reference.matrix());
    Ok((rebuilt, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;

    fn proj(d: usize, i: usize) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(d, d);
        p[(i, i)] = crate::linalg::ONE;
        p
    }

    fn sx() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    fn cnot_form() -> ControlledUnitaryForm {
        ControlledUnitaryForm {
            control_side: Side::A,
            u_local: ComplexMatrix::identity(2),
            blocks: vec![
                ControlBlock { projector: proj(2, 0), unitary: ComplexMatrix::identity(2) },
                ControlBlock { projector: proj(2, 1), unitary: sx() },
            ],
        }
    }

    #[test]
    fn cnot_form_reconstructs_cnot() {
        let cnot = crate::gates::cnot();
        let (rebuilt, residual) = reconstruct(&cnot_form(), &cnot).unwrap();
        assert_eq!(residual, 0.0);
        assert_eq!(rebuilt, cnot);
    }

    #[test]
    fn single_block_is_product() {
        let u = random_unitary(3, 1);
        let v = random_unitary(2, 2);
        let form = ControlledUnitaryForm {
            control_side: Side::A,
            u_local: u.clone(),
            blocks: vec![ControlBlock { projector: ComplexMatrix::identity(3), unitary: v.clone() }],
        };
        let rebuilt = form.reconstruct().unwrap();
        assert!((rebuilt.matrix() - &kron(&u, &v)).max_abs() < 1e-14);
    }

    #[test]
    fn side_b_layout() {
        let form = cnot_form().swapped();
        let m = form.reconstruct().unwrap();
        // control on B: |a,b⟩ → (v_b |a⟩) |b⟩
        let expected = crate::gates::cnot().swapped();
        assert_eq!(m, expected);
    }

    #[test]
    fn malformed_forms_rejected() {
        let mut f = cnot_form();
        f.blocks[1].projector = proj(2, 0);
        assert!(f.reconstruct().is_err());

        let mut f = cnot_form();
        f.blocks[1].unitary = ComplexMatrix::identity(2).scale(crate::linalg::I);
        assert!(matches!(f.validate(), Err(Error::MalformedForm(m)) if m.contains("same unitary")));

        let mut f = cnot_form();
        f.blocks.pop();
        assert!(f.validate().is_err());

        let mut f = cnot_form();
        f.blocks[0].unitary = ComplexMatrix::identity(2).scale_real(2.0);
        assert!(f.validate().is_err());

        let f = ControlledUnitaryForm { control_side: Side::A, u_local: ComplexMatrix::identity(2), blocks: vec![] };
        assert!(f.validate().is_err());
    }
}
