use super::measurement::Measurement;
use super::protocol::{Corrections, LoccProtocol, ProtocolNode};
use crate::analysis::ControlledUnitaryForm;
use crate::error::{Error, Result};

/// One-way, one-turn protocol for a controlled form: the control party
/// measures `{P_i}`, and on outcome `i` the target party undoes `v_i`.
///
/// This restores the target party's input.
pub fn synthesize_relocalization_protocol(form: &ControlledUnitaryForm) -> Result<LoccProtocol> {
    form.validate().map_err(|e| Error::MalformedForm(e.to_string()))?;
    let (d_a, d_b) = form.dims();
    let control = form.control_side;
    let target = form.target_side();

    let root = if form.blocks.len() == 1 {
        ProtocolNode::leaf(Corrections::on(target, form.blocks[0].unitary.adjoint()))
    } else {
        let measurement = Measurement::new(control, form.blocks.iter().map(|b| b.projector.clone()).collect());
        let children =
            form.blocks.iter().map(|b| ProtocolNode::leaf(Corrections::on(target, b.unitary.adjoint()))).collect();
        ProtocolNode::measure(measurement, children)
    };
    let p = LoccProtocol { d_a, d_b, root };
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::detect_controlled;
    use crate::bipartite::Side;
    use crate::gates;
    use crate::linalg::{random_unitary, ComplexMatrix};
    use crate::locc::verify::verify_one_piece_relocalization;
    use crate::ToleranceConfig;

    #[test]
    fn cnot_protocol_shape() {
        let form = detect_controlled(&gates::cnot(), Side::A, &ToleranceConfig::default(), 0).unwrap();
        let p = synthesize_relocalization_protocol(&form).unwrap();
        let m = p.root.measurement.as_ref().unwrap();
        assert_eq!(m.party, Side::A);
        assert!((&m.operators[0] - &gates::ket_bra(2, 0, 0)).max_abs() < 1e-12);
        assert!((&m.operators[1] - &gates::ket_bra(2, 1, 1)).max_abs() < 1e-12);
        let fixes: Vec<&ComplexMatrix> = p.root.children.iter().map(|c| c.corrections.b.as_ref().unwrap()).collect();
        assert!((fixes[0] - &ComplexMatrix::identity(2)).max_abs() < 1e-12);
        assert!((fixes[1] - &gates::pauli_x()).max_abs() < 1e-12);
        assert!(p.root.children.iter().all(|c| c.corrections.a.is_none()));
    }

    #[test]
    fn single_block_is_deterministic_correction() {
        let v = random_unitary(3, 7);
        let u = gates::identity(2, 3);
        let form = ControlledUnitaryForm {
            control_side: Side::A,
            u_local: ComplexMatrix::identity(2),
            blocks: vec![crate::analysis::ControlBlock { projector: ComplexMatrix::identity(2), unitary: v.clone() }],
        };
        let p = synthesize_relocalization_protocol(&form).unwrap();
        assert!(p.root.measurement.is_none());
        assert!((p.root.corrections.b.as_ref().unwrap() - &v.adjoint()).max_abs() < 1e-15);
        assert_eq!(p.depth(), 0);
        let _ = u;
    }

    #[test]
    fn controlled_random_closed_loop() {
        let (u, form) = gates::controlled_random(3, 3, 2, 11).unwrap();
        let p = synthesize_relocalization_protocol(&form).unwrap();
        let r = verify_one_piece_relocalization(&u, &p, Side::B, 20, 5, 1e-9).unwrap();
        assert!(r.verdict, "min fidelity {}", r.min_fidelity);
        assert!(r.min_fidelity >= 1.0 - 1e-9);
    }

    #[test]
    fn side_b_control_restores_a() {
        let form = detect_controlled(&gates::cnot(), Side::B, &ToleranceConfig::default(), 0).unwrap();
        let p = synthesize_relocalization_protocol(&form).unwrap();
        let r = verify_one_piece_relocalization(&gates::cnot(), &p, Side::A, 20, 5, 1e-9).unwrap();
        assert!(r.verdict);
    }

    #[test]
    fn malformed_form_rejected() {
        let form = ControlledUnitaryForm { control_side: Side::A, u_local: ComplexMatrix::identity(2), blocks: vec![] };
        assert!(matches!(synthesize_relocalization_protocol(&form), Err(Error::MalformedForm(_))));
    }
}
