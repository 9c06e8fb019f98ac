//! JSON file formats.
//!
//! Matrices are `{"re": [[..], ..], "im": [[..], ..]}` with row-major
//! nested arrays. A unitary file is
//!
//! ```json
//! {"d_a": 2, "d_b": 2, "re": [[...]], "im": [[...]]}
//! ```
//!
//! in composite index order `a * d_b + b`. A protocol file is
//!
//! ```json
//! {"d_a": 2, "d_b": 2, "root": {
//!     "party": "A",
//!     "operators": [{"re": ..., "im": ...}, ...],
//!     "children": {"0": {...}, "1": {...}},
//!     "corrections": {"a": {...}, "b": {...}}
//! }}
//! ```
//!
//! where every node field is optional. Outcomes missing from `children`
//! terminate without corrections.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bipartite::{BipartiteUnitary, Side};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::locc::{Corrections, LoccProtocol, Measurement, ProtocolNode, MAX_DEPTH};

/// Largest accepted total dimension `d_a * d_b` in input files.
pub const MAX_FILE_DIM: usize = 1024;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl MatrixRepr {
    fn from_matrix(m: &ComplexMatrix) -> Self {
        let re = (0..m.rows()).map(|i| m.row(i).iter().map(|z| z.re).collect()).collect();
        let im = (0..m.rows()).map(|i| m.row(i).iter().map(|z| z.im).collect()).collect();
        Self { re, im }
    }

    fn into_matrix(self) -> Result<ComplexMatrix> {
        let rows = self.re.len();
        if rows == 0 {
            return Err(Error::Parse("matrix has no rows".into()));
        }
        if self.im.len() != rows {
            return Err(Error::Parse(format!("re has {rows} rows but im has {}", self.im.len())));
        }
        let cols = self.re[0].len();
        if cols == 0 {
            return Err(Error::Parse("matrix has no columns".into()));
        }
        let mut data = Vec::with_capacity(rows.saturating_mul(cols));
        for (i, (r, m)) in self.re.iter().zip(&self.im).enumerate() {
            if r.len() != cols || m.len() != cols {
                return Err(Error::Parse(format!("row {i} is not {cols} entries long")));
            }
            data.extend(r.iter().zip(m).map(|(&x, &y)| C64::new(x, y)));
        }
        ComplexMatrix::from_vec(rows, cols, data)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr::from_matrix(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatrixRepr::deserialize(d)?.into_matrix().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitaryFile {
    d_a: usize,
    d_b: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn check_dims(d_a: usize, d_b: usize) -> Result<usize> {
    if d_a == 0 || d_b == 0 {
        return Err(Error::Dimension("local dimensions must be positive".into()));
    }
    match d_a.checked_mul(d_b) {
        Some(n) if n <= MAX_FILE_DIM => Ok(n),
        _ => Err(Error::Dimension(format!("d_a * d_b must not exceed {MAX_FILE_DIM}"))),
    }
}

/// Parses and validates a unitary file (unitarity to 1e-10).
pub fn parse_unitary_file(text: &str) -> Result<BipartiteUnitary> {
    let file: UnitaryFile = serde_json::from_str(text)?;
    let n = check_dims(file.d_a, file.d_b)?;
    let m = MatrixRepr { re: file.re, im: file.im }.into_matrix()?;
    if m.rows() != n || m.cols() != n {
        return Err(Error::Dimension(format!("matrix is {}x{} but d_a * d_b = {n}", m.rows(), m.cols())));
    }
    BipartiteUnitary::new(file.d_a, file.d_b, m)
}

pub fn write_unitary_file(u: &BipartiteUnitary) -> String {
    let repr = MatrixRepr::from_matrix(u.matrix());
    let file = UnitaryFile { d_a: u.d_a(), d_b: u.d_b(), re: repr.re, im: repr.im };
    serde_json::to_string_pretty(&file).expect("finite floats serialize")
}

#[derive(Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    party: Option<Side>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    operators: Option<Vec<ComplexMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    children: Option<BTreeMap<String, NodeFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    corrections: Option<Corrections>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProtocolFile {
    d_a: usize,
    d_b: usize,
    root: NodeFile,
}

fn node_to_file(node: &ProtocolNode) -> NodeFile {
    let children = (!node.children.is_empty())
        .then(|| node.children.iter().enumerate().map(|(r, c)| (r.to_string(), node_to_file(c))).collect());
    NodeFile {
        party: node.measurement.as_ref().map(|m| m.party),
        operators: node.measurement.as_ref().map(|m| m.operators.clone()),
        children,
        corrections: (!node.corrections.is_empty()).then(|| node.corrections.clone()),
    }
}

fn node_from_file(file: NodeFile, depth: usize) -> Result<ProtocolNode> {
    if depth > MAX_DEPTH {
        return Err(Error::MalformedProtocol(format!("depth exceeds {MAX_DEPTH}")));
    }
    let corrections = file.corrections.unwrap_or_default();
    let measurement = match (file.party, file.operators) {
        (None, None) => None,
        (Some(party), Some(operators)) => Some(Measurement::new(party, operators)),
        (Some(_), None) => return Err(Error::MalformedProtocol("`party` without `operators`".into())),
        (None, Some(_)) => return Err(Error::MalformedProtocol("`operators` without `party`".into())),
    };
    let raw_children = file.children.unwrap_or_default();
    let Some(m) = &measurement else {
        if !raw_children.is_empty() {
            return Err(Error::MalformedProtocol("`children` without a measurement".into()));
        }
        return Ok(ProtocolNode::leaf(corrections));
    };
    let mut children = Vec::new();
    if !raw_children.is_empty() {
        let n = m.outcomes();
        let mut slots: Vec<Option<ProtocolNode>> = (0..n).map(|_| None).collect();
        for (key, child) in raw_children {
            let r: usize = key
                .parse()
                .map_err(|_| Error::MalformedProtocol(format!("child key `{key}` is not an outcome index")))?;
            if r >= n {
                return Err(Error::MalformedProtocol(format!("child key {r} but only {n} outcomes")));
            }
            if slots[r].is_some() {
                return Err(Error::MalformedProtocol(format!("outcome {r} listed twice")));
            }
            slots[r] = Some(node_from_file(child, depth + 1)?);
        }
        children = slots.into_iter().map(|c| c.unwrap_or_default()).collect();
    }
    Ok(ProtocolNode { measurement, children, corrections })
}

/// Parses a protocol file and runs [`LoccProtocol::validate`].
pub fn parse_protocol_file(text: &str) -> Result<LoccProtocol> {
    let file: ProtocolFile = serde_json::from_str(text)?;
    check_dims(file.d_a, file.d_b)?;
    let root = node_from_file(file.root, 0)?;
    let p = LoccProtocol { d_a: file.d_a, d_b: file.d_b, root };
    p.validate()?;
    Ok(p)
}

pub fn write_protocol_file(p: &LoccProtocol) -> String {
    let file = ProtocolFile { d_a: p.d_a, d_b: p.d_b, root: node_to_file(&p.root) };
    serde_json::to_string_pretty(&file).expect("finite floats serialize")
}

/// Pretty JSON for any report type.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}
