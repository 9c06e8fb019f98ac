//! Detection of local-unitary equivalence to a controlled-unitary operation.
//!
//! With control on A, `U = Σ_i P_i u ⊗ v_i`, so the Schmidt operators on A
//! span `{P_i u}` and the products `A_k A_l†` span the commuting projectors
//! `{P_i}`. A joint eigenbasis `{e_m}` of that family refines the control
//! decomposition, and every slice `(⟨e_m| ⊗ I) U` factors as
//! `⟨f_m| ⊗ w_m` with `f_m = u† e_m` and `w_m ∝ v_i`. Slices whose target
//! factors agree up to phase are merged into one block.
//!
//! Every returned form has passed the reconstruction check, so heuristics
//! upstream can only cost a detection, never produce a false one.

use serde::{Deserialize, Serialize};

use super::form::{ControlBlock, ControlledUnitaryForm};
use super::schmidt::{operator_schmidt_decomposition, SchmidtDecomposition};
use crate::bipartite::{BipartiteUnitary, Side};
use crate::linalg::joint::{joint_diagonalize, max_relative_commutator};
use crate::linalg::{svd, vec_inner, ComplexMatrix, C64, I, ZERO};
use crate::tolerance::ToleranceConfig;

/// Why detection returned no form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Rejection {
    /// The Schmidt operators on the control side generate a non-commuting
    /// algebra.
    NonCommuting { max_commutator: f64 },
    /// Joint diagonalization of the family failed.
    NoJointBasis,
    /// A control-basis slice has target-side rank above one.
    SliceRank { ratio: f64 },
    /// The recovered control-side factors are not orthonormal.
    FactorGram { deviation: f64 },
    /// The assembled form failed validation.
    Malformed { message: String },
    /// The assembled form does not reproduce U.
    Reconstruction { residual: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Detection {
    pub side: Side,
    pub form: Option<ControlledUnitaryForm>,
    /// ‖U − reconstruct(form)‖_HS of the accepted form, or of the last
    /// assembled candidate.
    pub residual: Option<f64>,
    pub rejection: Option<Rejection>,
    pub attempts: usize,
}

/// Returns the controlled-unitary form with control on `side`, if `u` has one.
pub fn detect_controlled(
    u: &BipartiteUnitary,
    side: Side,
    tol: &ToleranceConfig,
    seed: u64,
) -> Option<ControlledUnitaryForm> {
    detect_controlled_verbose(u, side, tol, seed).form
}

/// As [`detect_controlled`], keeping diagnostics.
pub fn detect_controlled_verbose(u: &BipartiteUnitary, side: Side, tol: &ToleranceConfig, seed: u64) -> Detection {
    match side {
        Side::A => detect_side_a(u, tol, seed),
        Side::B => {
            let mut det = detect_side_a(&u.swapped(), tol, seed);
            det.side = Side::B;
            det.form = det.form.map(|f| f.swapped());
            det
        }
    }
}

fn detect_side_a(u: &BipartiteUnitary, tol: &ToleranceConfig, seed: u64) -> Detection {
    let sd = operator_schmidt_decomposition(u);
    let rank = sd.rank(tol.tol_rank);
    let mut det = Detection { side: Side::A, form: None, residual: None, rejection: None, attempts: 0 };

    if rank <= 1 {
        det.attempts = 1;
        let candidate = product_form(&sd);
        finish(u, candidate, tol, &mut det);
        return det;
    }

    let family = hermitian_family(&sd, rank);
    let max_commutator = max_relative_commutator(&family);
    if max_commutator > tol.tol_commute {
        det.rejection = Some(Rejection::NonCommuting { max_commutator });
        return det;
    }

    for attempt in 0..2u64 {
        det.attempts += 1;
        let attempt_seed = seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let basis = match joint_diagonalize(&family, tol.tol_commute, attempt_seed) {
            Ok(b) => b,
            Err(_) => {
                det.rejection = Some(Rejection::NoJointBasis);
                continue;
            }
        };
        match assemble(u, &basis, tol) {
            Ok(candidate) => {
                finish(u, candidate, tol, &mut det);
                return det;
            }
            Err(r) => det.rejection = Some(r),
        }
    }
    det
}

/// Validates and verifies a candidate, recording the verdict in `det`.
fn finish(u: &BipartiteUnitary, mut candidate: ControlledUnitaryForm, tol: &ToleranceConfig, det: &mut Detection) {
    canonicalize(&mut candidate);
    if let Err(e) = candidate.validate() {
        det.rejection = Some(Rejection::Malformed { message: e.to_string() });
        return;
    }
    let residual = (&candidate.to_matrix() - u.matrix()).frobenius_norm();
    det.residual = Some(residual);
    if residual <= tol.tol_reconstruct * ((u.dim()) as f64).sqrt() {
        det.form = Some(candidate);
        det.rejection = None;
    } else {
        det.rejection = Some(Rejection::Reconstruction { residual });
    }
}

/// `U ≈ λ A ⊗ B` → `(I ⊗ v)(u ⊗ I)` with `u = √d_a A`, `v = λ/√d_a B`.
fn product_form(sd: &SchmidtDecomposition) -> ControlledUnitaryForm {
    let sa = (sd.d_a as f64).sqrt();
    ControlledUnitaryForm {
        control_side: Side::A,
        u_local: sd.a_ops[0].scale_real(sa),
        blocks: vec![ControlBlock {
            projector: ComplexMatrix::identity(sd.d_a),
            unitary: sd.b_ops[0].scale_real(sd.lambdas[0] / sa),
        }],
    }
}

/// Hermitian and anti-Hermitian parts of A_k A_l† for k ≤ l < rank.
fn hermitian_family(sd: &SchmidtDecomposition, rank: usize) -> Vec<ComplexMatrix> {
    let mut family = Vec::new();
    for k in 0..rank {
        for l in k..rank {
            let x = sd.a_ops[k].matmul(&sd.a_ops[l].adjoint());
            let xd = x.adjoint();
            family.push(&x + &xd);
            if k != l {
                family.push((&x - &xd).scale(I));
            }
        }
    }
    family
}

/// Builds a candidate form from a control basis (columns of `basis`).
fn assemble(
    u: &BipartiteUnitary,
    basis: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<ControlledUnitaryForm, Rejection> {
    let (d_a, d_b) = (u.d_a(), u.d_b());
    let m = u.matrix();

    let mut factors: Vec<Vec<C64>> = Vec::with_capacity(d_a);
    let mut targets: Vec<ComplexMatrix> = Vec::with_capacity(d_a);
    for col in 0..d_a {
        let e = basis.col(col);
        // G[a', (b, b')] = Σ_a conj(e[a]) U[(a, b), (a', b')]
        let g = ComplexMatrix::from_fn(d_a, d_b * d_b, |a2, bb| {
            let (b, b2) = (bb / d_b, bb % d_b);
            (0..d_a).map(|a| e[a].conj() * m[(a * d_b + b, a2 * d_b + b2)]).sum()
        });
        let dec = svd(&g);
        let top = dec.s[0];
        let ratio = dec.s.get(1).map_or(0.0, |s2| s2 / top.max(f64::MIN_POSITIVE));
        if ratio > tol.tol_rank {
            return Err(Rejection::SliceRank { ratio });
        }
        // G = top · u1 v1†  ⇒  conj(f) = u1, w = top · conj(v1)
        factors.push(dec.u.col(0).iter().map(|z| z.conj()).collect());
        targets.push(ComplexMatrix::column(&dec.v.col(0)).conj().reshape(d_b, d_b).scale_real(top));
    }

    let mut deviation = 0.0f64;
    for i in 0..d_a {
        for j in 0..d_a {
            let want = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((vec_inner(&factors[i], &factors[j]) - want).norm());
        }
    }
    if deviation > tol.tol_reconstruct.max(1e-10) {
        return Err(Rejection::FactorGram { deviation });
    }

    // Group slices whose target factors agree up to a global phase.
    let threshold = d_b as f64 * (1.0 - tol.tol_reconstruct);
    let mut groups: Vec<(ComplexMatrix, Vec<usize>)> = Vec::new();
    for (idx, w) in targets.iter().enumerate() {
        let hit = groups.iter().position(|(rep, _)| rep.hs_inner(w).norm() >= threshold);
        match hit {
            Some(g) => {
                let overlap = groups[g].0.hs_inner(w);
                // w = e^{iθ} rep  ⇒  f ← e^{−iθ} f keeps conj(f)·w fixed
                let phase = overlap / overlap.norm();
                for z in factors[idx].iter_mut() {
                    *z *= phase.conj();
                }
                groups[g].1.push(idx);
            }
            None => groups.push((w.clone(), vec![idx])),
        }
    }

    let mut u_local = ComplexMatrix::zeros(d_a, d_a);
    for (idx, f) in factors.iter().enumerate() {
        u_local = &u_local + &ComplexMatrix::outer(&basis.col(idx), f);
    }
    let blocks = groups
        .into_iter()
        .map(|(rep, members)| {
            let projector = members.iter().fold(ComplexMatrix::zeros(d_a, d_a), |acc, &idx| {
                let e = basis.col(idx);
                &acc + &ComplexMatrix::outer(&e, &e)
            });
            ControlBlock { projector, unitary: rep }
        })
        .collect();
    Ok(ControlledUnitaryForm { control_side: Side::A, u_local, blocks })
}

/// Fixes the phase freedom `v_i → e^{iθ} v_i`, `u → (Σ e^{-iθ_i} P_i) u` so
/// that each block unitary has a real positive trace (or, when the trace
/// vanishes, a real positive first non-negligible entry), then orders blocks
/// by the first control basis state they cover.
fn canonicalize(form: &mut ControlledUnitaryForm) {
    let dc = form.control_dim();
    let mut correction = ComplexMatrix::zeros(dc, dc);
    for block in form.blocks.iter_mut() {
        let v = &block.unitary;
        let anchor = {
            let tr = v.trace();
            if tr.norm() > 1e-6 {
                tr
            } else {
                v.as_slice().iter().copied().find(|z| z.norm() > 1e-6).unwrap_or(C64::new(1.0, 0.0))
            }
        };
        let phase = anchor / anchor.norm();
        block.unitary = v.scale(phase.conj());
        correction = &correction + &block.projector.scale(phase);
    }
    form.u_local = correction.matmul(&form.u_local);

    let key = |p: &ComplexMatrix| {
        let first = (0..dc).find(|&a| p[(a, a)].re > 1e-6).unwrap_or(dc);
        let row: f64 = p.row(0).iter().map(|z| z.re).sum();
        (first, -row)
    };
    form.blocks.sort_by(|x, y| {
        let (kx, ky) = (key(&x.projector), key(&y.projector));
        kx.0.cmp(&ky.0).then(kx.1.total_cmp(&ky.1))
    });
    for b in form.blocks.iter_mut() {
        clean(&mut b.projector);
        clean(&mut b.unitary);
    }
    clean(&mut form.u_local);
}

/// Flushes round-off sized entries to exact zero.
fn clean(m: &mut ComplexMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    for i in 0..rows {
        for j in 0..cols {
            let z = m[(i, j)];
            let re = if z.re.abs() < 1e-15 { 0.0 } else { z.re };
            let im = if z.im.abs() < 1e-15 { 0.0 } else { z.im };
            m[(i, j)] = if re == 0.0 && im == 0.0 { ZERO } else { C64::new(re, im) };
        }
    }
}
