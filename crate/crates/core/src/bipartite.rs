//! Two-party operators and the composite index convention.
//!
//! A basis vector |a⟩ ⊗ |b⟩ of C^{d_a} ⊗ C^{d_b} sits at composite index
//! `a * d_b + b` (A-major, row-major). `kron`, `partial_trace`, `reshuffle`
//! and the file formats all use this ordering.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Which party a statement refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(Error::Parse(format!("side must be A or B, got `{other}`"))),
        }
    }
}

/// Unitary default check: ‖U†U − I‖_max ≤ 1e-10.
pub const UNITARY_TOL: f64 = 1e-10;

/// A unitary on C^{d_a} ⊗ C^{d_b}.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteUnitary {
    d_a: usize,
    d_b: usize,
    matrix: ComplexMatrix,
}

impl BipartiteUnitary {
    pub fn new(d_a: usize, d_b: usize, matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(d_a, d_b, matrix, UNITARY_TOL)
    }

    pub fn with_tolerance(d_a: usize, d_b: usize, matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::Dimension("local dimensions must be positive".into()));
        }
        let n = d_a.checked_mul(d_b).ok_or_else(|| Error::Dimension("dimension overflow".into()))?;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Dimension(format!(
                "expected {n}x{n} matrix for d_a={d_a}, d_b={d_b}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.unitarity_deviation();
        if deviation.is_nan() || deviation > tol {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { d_a, d_b, matrix })
    }

    /// u_a ⊗ u_b
    pub fn product(u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<Self> {
        Self::new(u_a.rows(), u_b.rows(), kron(u_a, u_b))
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// S·U·S† as an operator on H_B ⊗ H_A, where S|a,b⟩ = |b,a⟩.
    pub fn swapped(&self) -> BipartiteUnitary {
        let (da, db) = (self.d_a, self.d_b);
        let m = ComplexMatrix::from_fn(da * db, da * db, |r, c| {
            let (b, a) = (r / da, r % da);
            let (b2, a2) = (c / da, c % da);
            self.matrix[(a * db + b, a2 * db + b2)]
        });
        BipartiteUnitary { d_a: db, d_b: da, matrix: m }
    }

    /// (a ⊗ b) · U · (c ⊗ d)
    pub fn sandwich(
        &self,
        a: &ComplexMatrix,
        b: &ComplexMatrix,
        c: &ComplexMatrix,
        d: &ComplexMatrix,
    ) -> Result<BipartiteUnitary> {
        let m = kron(a, b).matmul(&self.matrix).matmul(&kron(c, d));
        BipartiteUnitary::with_tolerance(self.d_a, self.d_b, m, 1e-9)
    }
}

/// Kronecker product: (A⊗B)[(i,k),(j,l)] = A[i,j]·B[k,l].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

/// Partial trace of an operator on C^{d_a} ⊗ C^{d_b}; `traced` names the
/// subsystem that is removed.
pub fn partial_trace(rho: &ComplexMatrix, d_a: usize, d_b: usize, traced: Side) -> Result<ComplexMatrix> {
    let n = d_a * d_b;
    if rho.rows() != n || rho.cols() != n {
        return Err(Error::Dimension(format!("partial trace expects {n}x{n}, got {}x{}", rho.rows(), rho.cols())));
    }
    Ok(match traced {
        Side::B => ComplexMatrix::from_fn(d_a, d_a, |a, a2| (0..d_b).map(|b| rho[(a * d_b + b, a2 * d_b + b)]).sum()),
        Side::A => ComplexMatrix::from_fn(d_b, d_b, |b, b2| (0..d_a).map(|a| rho[(a * d_b + b, a * d_b + b2)]).sum()),
    })
}

/// Reduced density matrix of a pure state |ψ⟩, keeping `kept`.
pub fn reduced_state(psi: &[C64], d_a: usize, d_b: usize, kept: Side) -> ComplexMatrix {
    debug_assert_eq!(psi.len(), d_a * d_b);
    match kept {
        Side::A => ComplexMatrix::from_fn(d_a, d_a, |a, a2| {
            (0..d_b).map(|b| psi[a * d_b + b] * psi[a2 * d_b + b].conj()).sum()
        }),
        Side::B => ComplexMatrix::from_fn(d_b, d_b, |b, b2| {
            (0..d_a).map(|a| psi[a * d_b + b] * psi[a * d_b + b2].conj()).sum()
        }),
    }
}

/// Realignment R[(a·d_a + a'), (b·d_b + b')] = U[(a,b),(a',b')].
///
/// A product operator A ⊗ B maps to the outer product vec(A)·vec(B)ᵀ, so the
/// singular value decomposition of R is the operator Schmidt decomposition.
pub fn reshuffle(u: &BipartiteUnitary) -> ComplexMatrix {
    reshuffle_raw(u.matrix(), u.d_a(), u.d_b())
}

pub fn reshuffle_raw(m: &ComplexMatrix, d_a: usize, d_b: usize) -> ComplexMatrix {
    let mut r = ComplexMatrix::zeros(d_a * d_a, d_b * d_b);
    for a in 0..d_a {
        for b in 0..d_b {
            for a2 in 0..d_a {
                for b2 in 0..d_b {
                    r[(a * d_a + a2, b * d_b + b2)] = m[(a * d_b + b, a2 * d_b + b2)];
                }
            }
        }
    }
    r
}

/// Inverse of [`reshuffle_raw`].
pub fn unreshuffle(r: &ComplexMatrix, d_a: usize, d_b: usize) -> ComplexMatrix {
    let n = d_a * d_b;
    let mut m = ComplexMatrix::zeros(n, n);
    for a in 0..d_a {
        for b in 0..d_b {
            for a2 in 0..d_a {
                for b2 in 0..d_b {
                    m[(a * d_b + b, a2 * d_b + b2)] = r[(a * d_a + a2, b * d_b + b2)];
                }
            }
        }
    }
    m
}

/// Hilbert-Schmidt distance ‖X − Y‖_F.
pub fn hs_distance(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    (x - y).frobenius_norm()
}
