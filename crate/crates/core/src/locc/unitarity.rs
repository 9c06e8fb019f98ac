use serde::{Deserialize, Serialize};

use super::protocol::LoccProtocol;
use crate::bipartite::Side;
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchUnitarity {
    pub outcomes: Vec<usize>,
    /// ‖X X† − (Tr(X X†)/d)·I‖_max
    pub deviation: f64,
    pub pass: bool,
}

/// Tests whether each branch's accumulated operator on `side` is
/// proportional to a unitary. Input independent.
pub fn check_accumulated_unitary(p: &LoccProtocol, side: Side, tol: f64) -> Vec<BranchUnitarity> {
    p.leaves()
        .into_iter()
        .map(|leaf| {
            let x = match side {
                Side::A => &leaf.a,
                Side::B => &leaf.b,
            };
            let d = x.rows();
            let g = x.matmul(&x.adjoint());
            let mean = g.trace() / d as f64;
            let deviation = (&g - &ComplexMatrix::identity(d).scale(mean)).max_abs();
            BranchUnitarity { outcomes: leaf.outcomes, deviation, pass: deviation <= tol }
        })
        .collect()
}

/// Necessary condition for restoring B's input: every K^(R) ∝ unitary.
pub fn check_bob_accumulated_unitary(p: &LoccProtocol, tol: f64) -> Vec<BranchUnitarity> {
    check_accumulated_unitary(p, Side::B, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::ket_bra;
    use crate::locc::measurement::Measurement;
    use crate::locc::protocol::ProtocolNode;

    #[test]
    fn projective_bob_measurement_fails() {
        let m = Measurement::new(Side::B, vec![ket_bra(2, 0, 0), ket_bra(2, 1, 1)]);
        let p = LoccProtocol { d_a: 2, d_b: 2, root: ProtocolNode::measure(m, Vec::new()) };
        let r = check_bob_accumulated_unitary(&p, 1e-9);
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|b| !b.pass && (b.deviation - 0.5).abs() < 1e-15));
    }

    #[test]
    fn weak_bob_measurement_passes() {
        let half = ComplexMatrix::identity(2).scale_real(std::f64::consts::FRAC_1_SQRT_2);
        let m = Measurement::new(Side::B, vec![half.clone(), half]);
        let p = LoccProtocol { d_a: 2, d_b: 2, root: ProtocolNode::measure(m, Vec::new()) };
        assert!(check_bob_accumulated_unitary(&p, 1e-12).iter().all(|b| b.pass));
    }

    #[test]
    fn alice_measurement_leaves_bob_unitary() {
        let m = Measurement::new(Side::A, vec![ket_bra(3, 0, 0), &ket_bra(3, 1, 1) + &ket_bra(3, 2, 2)]);
        let p = LoccProtocol { d_a: 3, d_b: 2, root: ProtocolNode::measure(m, Vec::new()) };
        assert!(check_bob_accumulated_unitary(&p, 1e-12).iter().all(|b| b.pass));
        assert!(check_accumulated_unitary(&p, Side::A, 1e-9).iter().all(|b| !b.pass));
    }
}
