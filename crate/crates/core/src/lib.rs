//! Delocalization power of two-party unitary operations.
//!
//! A unitary `U` on `C^{d_a} ⊗ C^{d_b}` applied to two unknown pure states
//! spreads both across the pair. This crate decides whether local operations
//! and classical communication can restore one of the two states, which
//! happens exactly when `U` is a local-unitary equivalent of a
//! controlled-unitary operation, and builds the restoring protocol when it
//! exists.
//!
//! * [`analysis`]: operator Schmidt decomposition, controlled-unitary
//!   detection and classification.
//! * [`locc`]: multi-turn LOCC protocols, accumulated operators, the induced
//!   channel, relocalization verification and protocol synthesis.
//! * [`entangling`]: entangling power by multistart search over product
//!   inputs.
//! * [`io`]: JSON file formats for unitaries, protocols and reports.
//!
//! ```
//! use deloc_core::{analysis::classify, gates, ToleranceConfig};
//!
//! let report = classify(&gates::cnot(), &ToleranceConfig::default(), 0);
//! assert!(report.relocalizable);
//! assert_eq!(report.osr, 2);
//! ```

pub mod analysis;
pub mod bipartite;
pub mod entangling;
pub mod error;
pub mod gates;
pub mod io;
pub mod linalg;
pub mod locc;
pub mod tolerance;

pub use bipartite::{kron, partial_trace, reshuffle, BipartiteUnitary, Side};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use tolerance::ToleranceConfig;
