//! Dense complex matrices and the two-qubit state, channel and projector vocabulary.

pub mod bell;
pub mod eigen;
pub mod matrix;
pub mod state;
pub mod statefile;

pub use bell::{bell_diagonal, bell_ket, bell_weights, BellProbs};
pub use eigen::{hermitian_eigensystem, Eigensystem};
pub use matrix::ComplexMatrix;
pub use state::{
    conjugate_bob, density_spectrum, full_dephase, local_rotate, make_state, parity_projectors,
    partial_dephase, partial_trace_a, partial_trace_b, validate_density, BasisLabel,
    ParityProjectors, TwoQubitState,
};
pub use statefile::{parse_state_file, parse_state_matrix, write_state_file};
