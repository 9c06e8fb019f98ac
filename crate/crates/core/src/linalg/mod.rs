//! Dense complex linear algebra sized for two-qudit problems.

pub mod eig;
pub mod joint;
pub mod matrix;
pub mod random;
pub mod svd;

pub use eig::{expi_hermitian, hermitian_eig, HermitianEigen};
pub use joint::joint_diagonalize;
pub use matrix::{basis_vector, kron_vec, normalized, vec_inner, vec_norm, ComplexMatrix, C64, I, ONE, ZERO};
pub use random::{random_state, random_unitary, random_unitary_with, seeded_rng, Rng};
pub use svd::{svd, Svd};
