//! LOCC protocol trees and their accumulated operators.
//!
//! A node either measures (one party, one operator per outcome) or is a
//! leaf. After a measurement, outcome `r` continues at `children[r]`; a
//! measuring node without children is terminal for every outcome. Terminal
//! points apply the optional local corrections of the node they end at.
//!
//! The accumulated operator of a party along a path is the product of that
//! party's operators in turn order, latest on the left, with the identity
//! standing in for the other party's turns. Corrections count as a final
//! single-outcome turn.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::measurement::{validate_measurement, Measurement};
use crate::bipartite::Side;
use crate::error::{Error, Result};
use crate::linalg::random::{random_gaussian_matrix, Rng};
use crate::linalg::{hermitian_eig, random_unitary_with, ComplexMatrix, C64};

pub const MAX_DEPTH: usize = 16;
const CORRECTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Corrections {
    pub a: Option<ComplexMatrix>,
    pub b: Option<ComplexMatrix>,
}

impl Corrections {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn on(side: Side, u: ComplexMatrix) -> Self {
        match side {
            Side::A => Self { a: Some(u), b: None },
            Side::B => Self { a: None, b: Some(u) },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_none() && self.b.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProtocolNode {
    pub measurement: Option<Measurement>,
    pub children: Vec<ProtocolNode>,
    pub corrections: Corrections,
}

impl ProtocolNode {
    pub fn leaf(corrections: Corrections) -> Self {
        Self { measurement: None, children: Vec::new(), corrections }
    }

    pub fn measure(measurement: Measurement, children: Vec<ProtocolNode>) -> Self {
        Self { measurement: Some(measurement), children, corrections: Corrections::none() }
    }

    /// Number of measurement turns on the longest path.
    pub fn depth(&self) -> usize {
        match &self.measurement {
            None => 0,
            Some(_) => 1 + self.children.iter().map(ProtocolNode::depth).max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoccProtocol {
    pub d_a: usize,
    pub d_b: usize,
    pub root: ProtocolNode,
}

/// Accumulated operators after a sequence of outcomes.
#[derive(Debug, Clone)]
pub struct AccumulatedPath {
    pub outcomes: Vec<usize>,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl LoccProtocol {
    /// No operation at all: the channel is the identity.
    pub fn empty(d_a: usize, d_b: usize) -> Self {
        Self { d_a, d_b, root: ProtocolNode::default() }
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    fn dim_of(&self, side: Side) -> usize {
        match side {
            Side::A => self.d_a,
            Side::B => self.d_b,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_a == 0 || self.d_b == 0 {
            return Err(Error::MalformedProtocol("local dimensions must be positive".into()));
        }
        let depth = self.depth();
        if depth > MAX_DEPTH {
            return Err(Error::MalformedProtocol(format!("depth {depth} exceeds {MAX_DEPTH}")));
        }
        self.validate_node(&self.root, &mut Vec::new())
    }

    fn validate_node(&self, node: &ProtocolNode, path: &mut Vec<usize>) -> Result<()> {
        let here = || if path.is_empty() { "root".to_string() } else { format!("node {path:?}") };
        match &node.measurement {
            None => {
                if !node.children.is_empty() {
                    return Err(Error::MalformedProtocol(format!("{}: children without a measurement", here())));
                }
            }
            Some(m) => {
                let d = self.dim_of(m.party);
                if m.operators.is_empty() {
                    return Err(Error::MalformedProtocol(format!("{}: measurement has no outcomes", here())));
                }
                if m.operators.iter().any(|op| op.rows() != d || op.cols() != d) {
                    return Err(Error::MalformedProtocol(format!(
                        "{}: party {} operators must be {d}x{d}",
                        here(),
                        m.party
                    )));
                }
                let check = validate_measurement(m);
                if !check.ok {
                    return Err(Error::Incomplete { deviation: check.deviation });
                }
                if !node.children.is_empty() {
                    if node.children.len() != m.outcomes() {
                        return Err(Error::MalformedProtocol(format!(
                            "{}: {} outcomes but {} children",
                            here(),
                            m.outcomes(),
                            node.children.len()
                        )));
                    }
                    if !node.corrections.is_empty() {
                        return Err(Error::MalformedProtocol(format!(
                            "{}: corrections are only allowed at terminal nodes",
                            here()
                        )));
                    }
                }
            }
        }
        for (side, c) in [(Side::A, &node.corrections.a), (Side::B, &node.corrections.b)] {
            if let Some(c) = c {
                let d = self.dim_of(side);
                if c.rows() != d || c.cols() != d {
                    return Err(Error::MalformedProtocol(format!("{}: correction on {side} must be {d}x{d}", here())));
                }
                let dev = c.unitarity_deviation();
                if dev > CORRECTION_TOL {
                    return Err(Error::MalformedProtocol(format!(
                        "{}: correction on {side} is not unitary ({dev:.3e})",
                        here()
                    )));
                }
            }
        }
        for (r, child) in node.children.iter().enumerate() {
            path.push(r);
            self.validate_node(child, path)?;
            path.pop();
        }
        Ok(())
    }

    /// Accumulated operators for every complete outcome sequence, in
    /// depth-first outcome order.
    pub fn leaves(&self) -> Vec<AccumulatedPath> {
        let mut out = Vec::new();
        let start = AccumulatedPath {
            outcomes: Vec::new(),
            a: ComplexMatrix::identity(self.d_a),
            b: ComplexMatrix::identity(self.d_b),
        };
        collect_leaves(&self.root, start, &mut out);
        out
    }

    /// Accumulated operators at every measuring node, before its
    /// measurement, paired with the node.
    pub fn measuring_prefixes(&self) -> Vec<(AccumulatedPath, &ProtocolNode)> {
        let mut out = Vec::new();
        let start = AccumulatedPath {
            outcomes: Vec::new(),
            a: ComplexMatrix::identity(self.d_a),
            b: ComplexMatrix::identity(self.d_b),
        };
        collect_prefixes(&self.root, start, &mut out);
        out
    }
}

fn advance(path: &AccumulatedPath, party: Side, op: &ComplexMatrix, outcome: Option<usize>) -> AccumulatedPath {
    let mut next = path.clone();
    if let Some(r) = outcome {
        next.outcomes.push(r);
    }
    match party {
        Side::A => next.a = op.matmul(&path.a),
        Side::B => next.b = op.matmul(&path.b),
    }
    next
}

fn terminate(node: &ProtocolNode, mut path: AccumulatedPath, out: &mut Vec<AccumulatedPath>) {
    if let Some(c) = &node.corrections.a {
        path = advance(&path, Side::A, c, None);
    }
    if let Some(c) = &node.corrections.b {
        path = advance(&path, Side::B, c, None);
    }
    out.push(path);
}

fn collect_leaves(node: &ProtocolNode, path: AccumulatedPath, out: &mut Vec<AccumulatedPath>) {
    match &node.measurement {
        None => terminate(node, path, out),
        Some(m) => {
            for (r, op) in m.operators.iter().enumerate() {
                let next = advance(&path, m.party, op, Some(r));
                match node.children.get(r) {
                    Some(child) => collect_leaves(child, next, out),
                    None => terminate(node, next, out),
                }
            }
        }
    }
}

fn collect_prefixes<'a>(
    node: &'a ProtocolNode,
    path: AccumulatedPath,
    out: &mut Vec<(AccumulatedPath, &'a ProtocolNode)>,
) {
    if let Some(m) = &node.measurement {
        for (r, child) in node.children.iter().enumerate() {
            collect_prefixes(child, advance(&path, m.party, &m.operators[r], Some(r)), out);
        }
        out.push((path, node));
    }
}

/// Largest violation of the accumulated completeness recursion
/// `Σ_r X^(R,r)† X^(R,r) = X^(R)† X^(R)` for the measuring party at every
/// node. The other party's accumulated operator is unchanged by the turn.
pub fn accumulated_recursion_error(p: &LoccProtocol) -> f64 {
    let mut worst = 0.0f64;
    for (prefix, node) in p.measuring_prefixes() {
        let m = node.measurement.as_ref().expect("measuring node");
        let before = match m.party {
            Side::A => &prefix.a,
            Side::B => &prefix.b,
        };
        let lhs = m.operators.iter().fold(ComplexMatrix::zeros(before.cols(), before.cols()), |acc, op| {
            let x = op.matmul(before);
            &acc + &x.adjoint().matmul(&x)
        });
        let rhs = before.adjoint().matmul(before);
        worst = worst.max((&lhs - &rhs).max_abs());
    }
    worst
}

/// Random generalized measurement with `outcomes` operators on C^d:
/// `M_r = G_r S^{-1/2}` with `S = Σ_r G_r† G_r` for Ginibre `G_r`.
pub fn random_measurement(party: Side, d: usize, outcomes: usize, rng: &mut Rng) -> Measurement {
    let gs: Vec<ComplexMatrix> = (0..outcomes).map(|_| random_gaussian_matrix(d, d, rng)).collect();
    let s = gs.iter().fold(ComplexMatrix::zeros(d, d), |acc, g| &acc + &g.adjoint().matmul(g));
    let eig = hermitian_eig(&s, 1e-8).expect("Gram matrix is Hermitian");
    let inv_sqrt = {
        let mut v = eig.vectors.clone();
        for j in 0..d {
            let f = 1.0 / eig.values[j].sqrt();
            for i in 0..d {
                v[(i, j)] *= f;
            }
        }
        v.matmul(&eig.vectors.adjoint())
    };
    Measurement::new(party, gs.iter().map(|g| g.matmul(&inv_sqrt)).collect())
}

/// Random valid protocol of at most `max_depth` turns, alternating parties
/// with occasional projective measurements and terminal corrections.
pub fn random_protocol(d_a: usize, d_b: usize, max_depth: usize, rng: &mut Rng) -> LoccProtocol {
    let first = if rng.random_bool(0.5) { Side::A } else { Side::B };
    let root = random_node(d_a, d_b, first, max_depth, rng);
    LoccProtocol { d_a, d_b, root }
}

fn random_node(d_a: usize, d_b: usize, party: Side, depth: usize, rng: &mut Rng) -> ProtocolNode {
    let d = if party == Side::A { d_a } else { d_b };
    if depth == 0 || rng.random_bool(0.2) {
        let mut c = Corrections::none();
        if rng.random_bool(0.5) {
            c.a = Some(random_unitary_with(d_a, rng));
        }
        if rng.random_bool(0.5) {
            c.b = Some(random_unitary_with(d_b, rng));
        }
        return ProtocolNode::leaf(c);
    }
    let outcomes = rng.random_range(1..=3usize);
    let m = if rng.random_bool(0.3) && d >= 2 {
        let basis = random_unitary_with(d, rng);
        let ops = (0..d).map(|j| ComplexMatrix::outer(&basis.col(j), &basis.col(j))).collect();
        Measurement::new(party, ops)
    } else {
        random_measurement(party, d, outcomes, rng)
    };
    let n = m.outcomes();
    if rng.random_bool(0.25) {
        let mut node = ProtocolNode::measure(m, Vec::new());
        if rng.random_bool(0.5) {
            node.corrections = Corrections::on(Side::B, random_unitary_with(d_b, rng));
        }
        return node;
    }
    let children = (0..n).map(|_| random_node(d_a, d_b, party.other(), depth - 1, rng)).collect();
    ProtocolNode::measure(m, children)
}

/// Applies `a ⊗ b` to a composite vector without forming the Kronecker
/// product: reshaping ψ into a d_a×d_b matrix Ψ, the result is `a Ψ bᵀ`.
pub fn apply_local(a: &ComplexMatrix, b: &ComplexMatrix, psi: &[C64]) -> Vec<C64> {
    let (d_a, d_b) = (a.cols(), b.cols());
    let mut tmp = vec![C64::new(0.0, 0.0); d_a * d_b];
    // tmp = Ψ bᵀ
    for i in 0..d_a {
        for k in 0..d_b {
            tmp[i * d_b + k] = (0..d_b).map(|j| psi[i * d_b + j] * b[(k, j)]).sum();
        }
    }
    let mut out = vec![C64::new(0.0, 0.0); d_a * d_b];
    for i in 0..d_a {
        for k in 0..d_b {
            out[i * d_b + k] = (0..d_a).map(|j| a[(i, j)] * tmp[j * d_b + k]).sum();
        }
    }
    out
}
