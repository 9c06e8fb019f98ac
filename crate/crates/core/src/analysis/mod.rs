//! Operator Schmidt analysis and controlled-unitary classification.

pub mod classify;
pub mod coarsen;
pub mod detect;
pub mod form;
pub mod schmidt;

pub use classify::{classify, Classification};
pub use coarsen::coarsen_projectors;
pub use detect::{detect_controlled, detect_controlled_verbose, Detection, Rejection};
pub use form::{reconstruct, ControlBlock, ControlledUnitaryForm};
pub use schmidt::{operator_schmidt_decomposition, operator_schmidt_rank, SchmidtDecomposition};
