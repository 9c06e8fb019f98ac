use deloc_core::analysis::{classify, detect_controlled, operator_schmidt_rank};
use deloc_core::entangling::{entanglement_entropy, entangling_power, OptimizationConfig};
use deloc_core::gates;
use deloc_core::io::{parse_protocol_file, parse_unitary_file, write_protocol_file, write_unitary_file};
use deloc_core::linalg::random::random_state;
use deloc_core::linalg::{random_unitary, seeded_rng, C64};
use deloc_core::locc::protocol::random_protocol;
use deloc_core::locc::{
    accumulated_recursion_error, check_bob_accumulated_unitary, synthesize_relocalization_protocol,
    verify_one_piece_relocalization,
};
use deloc_core::{BipartiteUnitary, Side, ToleranceConfig};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn swap_parties(psi: &[C64], d_a: usize, d_b: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); psi.len()];
    for a in 0..d_a {
        for b in 0..d_b {
            out[b * d_a + a] = psi[a * d_b + b];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn controlled_gates_round_trip(d_a in 2usize..=4, d_b in 2usize..=3, blocks in 1usize..=4, seed in any::<u64>()) {
        let blocks = blocks.min(d_a);
        let (u, _) = gates::controlled_random(d_a, d_b, blocks, seed).unwrap();
        let form = detect_controlled(&u, Side::A, &tol(), seed).expect("controlled gate detected");
        prop_assert!(form.residual(&u).unwrap() <= 1e-8);
        let p = synthesize_relocalization_protocol(&form).unwrap();
        let r = verify_one_piece_relocalization(&u, &p, Side::B, 10, seed, 1e-9).unwrap();
        prop_assert!(r.verdict, "min fidelity {}", r.min_fidelity);
        prop_assert!(check_bob_accumulated_unitary(&p, 1e-9).iter().all(|b| b.pass));
    }

    #[test]
    fn side_b_control_detected_after_swap(d in 2usize..=3, seed in any::<u64>()) {
        let (u, _) = gates::controlled_random(d, 2, 2.min(d), seed).unwrap();
        let s = u.swapped();
        let form = detect_controlled(&s, Side::B, &tol(), seed).expect("detected with control on B");
        prop_assert_eq!(form.control_side, Side::B);
        let p = synthesize_relocalization_protocol(&form).unwrap();
        prop_assert!(verify_one_piece_relocalization(&s, &p, Side::A, 10, seed, 1e-9).unwrap().verdict);
    }

    #[test]
    fn verdict_and_rank_invariant_under_local_unitaries(which in 0usize..4, seed in any::<u64>()) {
        let u = match which {
            0 => gates::cnot(),
            1 => gates::swap_phase(),
            2 => gates::heisenberg(0.25).unwrap(),
            _ => gates::controlled_random(3, 2, 2, 9).unwrap().0,
        };
        let (d_a, d_b) = (u.d_a(), u.d_b());
        let v = u
            .sandwich(
                &random_unitary(d_a, seed),
                &random_unitary(d_b, seed ^ 1),
                &random_unitary(d_a, seed ^ 2),
                &random_unitary(d_b, seed ^ 3),
            )
            .unwrap();
        let (c0, c1) = (classify(&u, &tol(), 0), classify(&v, &tol(), seed));
        prop_assert_eq!(c0.osr, c1.osr);
        prop_assert_eq!(c0.relocalizable, c1.relocalizable);
        prop_assert_eq!(c0.controlled_from_a.is_some(), c1.controlled_from_a.is_some());
        prop_assert_eq!(c0.controlled_from_b.is_some(), c1.controlled_from_b.is_some());
    }

    #[test]
    fn haar_gates_not_controlled(d in 2usize..=3, seed in any::<u64>()) {
        let u = BipartiteUnitary::new(d, d, random_unitary(d * d, seed)).unwrap();
        prop_assert!(detect_controlled(&u, Side::A, &tol(), seed).is_none());
        prop_assert!(detect_controlled(&u, Side::B, &tol(), seed).is_none());
        prop_assert_eq!(operator_schmidt_rank(&u, 1e-7), d * d);
    }

    #[test]
    fn entropy_symmetric_in_parties(d_a in 1usize..=4, d_b in 1usize..=4, seed in any::<u64>()) {
        let psi = random_state(d_a * d_b, &mut seeded_rng(seed));
        let s_ab = entanglement_entropy(&psi, d_a, d_b).unwrap();
        let s_ba = entanglement_entropy(&swap_parties(&psi, d_a, d_b), d_b, d_a).unwrap();
        prop_assert!((s_ab - s_ba).abs() < 1e-10);
        prop_assert!(s_ab >= 0.0 && s_ab <= (d_a.min(d_b) as f64).log2() + 1e-9);
    }

    #[test]
    fn random_protocols_round_trip_and_recurse(d_a in 1usize..=3, d_b in 1usize..=3, seed in any::<u64>()) {
        let p = random_protocol(d_a, d_b, 3, &mut seeded_rng(seed));
        prop_assert!(accumulated_recursion_error(&p) <= 1e-9);
        let back = parse_protocol_file(&write_protocol_file(&p)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn unitary_files_round_trip(d_a in 1usize..=3, d_b in 1usize..=3, seed in any::<u64>()) {
        let u = BipartiteUnitary::new(d_a, d_b, random_unitary(d_a * d_b, seed)).unwrap();
        prop_assert_eq!(parse_unitary_file(&write_unitary_file(&u)).unwrap(), u);
    }

    #[test]
    fn parsers_never_panic(text in ".{0,200}") {
        let _ = parse_unitary_file(&text);
        let _ = parse_protocol_file(&text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn entangling_power_invariant_under_local_unitaries(which in 0usize..3, seed in any::<u64>()) {
        let u = match which {
            0 => gates::cnot(),
            1 => gates::heisenberg(0.2).unwrap(),
            _ => gates::swap_phase(),
        };
        let v = u
            .sandwich(&random_unitary(2, seed), &random_unitary(2, seed ^ 1), &random_unitary(2, seed ^ 2), &random_unitary(2, seed ^ 3))
            .unwrap();
        let cfg = OptimizationConfig { restarts: 16, ..Default::default() };
        let (p, q) = (entangling_power(&u, &cfg).unwrap().value, entangling_power(&v, &cfg).unwrap().value);
        prop_assert!((p - q).abs() <= 2e-4, "{} vs {}", p, q);
    }
}

#[test]
fn restoring_b_implies_unitary_b_operators() {
    // Random protocols paired with gates they might happen to undo, plus
    // synthesized ones that certainly do.
    let mut rng = seeded_rng(21);
    let mut checked = 0;
    for k in 0..20u64 {
        let (u, form) = gates::controlled_random(2, 2, 2, k).unwrap();
        let candidates = [random_protocol(2, 2, 2, &mut rng), synthesize_relocalization_protocol(&form).unwrap()];
        for p in candidates {
            let r = verify_one_piece_relocalization(&u, &p, Side::B, 10, k, 1e-9).unwrap();
            if r.verdict {
                checked += 1;
                assert!(check_bob_accumulated_unitary(&p, 1e-9).iter().all(|b| b.pass));
            }
        }
    }
    assert!(checked >= 20);
}

#[test]
fn more_restarts_never_lower_power() {
    let u = gates::heisenberg(0.2).unwrap();
    let mut last = 0.0;
    for restarts in [1, 2, 4, 8] {
        let cfg = OptimizationConfig { restarts, max_iters: 300, seed: 5, ..Default::default() };
        let v = entangling_power(&u, &cfg).unwrap().value;
        assert!(v >= last);
        last = v;
    }
}

#[test]
fn heisenberg_matches_closed_form() {
    for alpha in [0.0, 0.1, 0.3, std::f64::consts::PI / 5.0, 1.3] {
        let u = gates::heisenberg(alpha).unwrap();
        let diff = (u.matrix() - &gates::heisenberg_closed_form(alpha)).max_abs();
        assert!(diff < 1e-12, "alpha {alpha}: {diff:.2e}");
    }
}

#[test]
fn heisenberg_power_matches_overlap_formula() {
    // With orthogonal inputs the output is cos2α|01⟩ + i sin2α|10⟩ up to phase.
    let alpha: f64 = 0.2;
    let p = (2.0 * alpha).cos().powi(2);
    let expected = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
    let v = entangling_power(&gates::heisenberg(alpha).unwrap(), &OptimizationConfig::default()).unwrap().value;
    assert!((v - expected).abs() < 1e-6, "{v} vs {expected}");
}
