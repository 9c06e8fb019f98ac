//! LOCC protocols on two-qudit pure states.

pub mod demo;
pub mod execute;
pub mod measurement;
pub mod protocol;
pub mod synth;
pub mod unitarity;
pub mod verify;

pub use demo::{fixed_input_protocol, fixed_input_relocalization_demo};
pub use execute::{apply_channel, execute_protocol, Branch};
pub use measurement::{validate_measurement, CompletenessCheck, Measurement};
pub use protocol::{accumulated_recursion_error, Corrections, LoccProtocol, ProtocolNode, MAX_DEPTH};
pub use synth::synthesize_relocalization_protocol;
pub use unitarity::{check_accumulated_unitary, check_bob_accumulated_unitary, BranchUnitarity};
pub use verify::{verify_on_inputs, verify_one_piece_relocalization, RelocalizationReport};
