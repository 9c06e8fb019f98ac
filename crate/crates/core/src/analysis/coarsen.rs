//! Merging non-orthogonal projectors into projectors onto sum-spaces.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, svd, ComplexMatrix, C64};

/// Orthonormal basis of the range of a projector (columns).
fn range_basis(p: &ComplexMatrix) -> Result<Vec<Vec<C64>>> {
    let eig = hermitian_eig(p, 1e-6)?;
    Ok((0..p.rows()).filter(|&j| eig.values[j] > 0.5).map(|j| eig.vectors.col(j)).collect())
}

/// Projector onto span(range(p) ∪ range(q)).
fn sum_space(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = p.rows();
    let mut cols = range_basis(p)?;
    cols.extend(range_basis(q)?);
    if cols.is_empty() {
        return Ok(ComplexMatrix::zeros(d, d));
    }
    let stacked = ComplexMatrix::from_columns(d, &cols);
    let dec = svd(&stacked);
    let rank = dec.rank(1e-8);
    let mut out = ComplexMatrix::zeros(d, d);
    for k in 0..rank {
        let v = dec.u.col(k);
        out = &out + &ComplexMatrix::outer(&v, &v);
    }
    Ok(out)
}

/// Repeatedly replaces a non-orthogonal pair by the projector onto the sum of
/// their ranges until the set is mutually orthogonal. Each merge removes one
/// element, so the loop ends after at most `len − 1` merges.
pub fn coarsen_projectors(projectors: &[ComplexMatrix], tol: f64) -> Result<Vec<ComplexMatrix>> {
    let Some(first) = projectors.first() else {
        return Ok(Vec::new());
    };
    let d = first.rows();
    for p in projectors {
        if p.rows() != d || p.cols() != d {
            return Err(Error::Dimension("projectors differ in shape".into()));
        }
        let deviation = (&p.matmul(p) - p).max_abs().max(p.hermiticity_deviation());
        if deviation > tol {
            return Err(Error::NotProjector { deviation });
        }
    }

    let mut set: Vec<ComplexMatrix> = projectors.to_vec();
    'merge: loop {
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                if set[i].matmul(&set[j]).max_abs() > tol {
                    let merged = sum_space(&set[i], &set[j])?;
                    set.remove(j);
                    set[i] = merged;
                    continue 'merge;
                }
            }
        }
        return Ok(set);
    }
}
