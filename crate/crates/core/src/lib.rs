//! Coherence-based key-rate bounds for two-qubit QKD statistics.
//!
//! The key rate of a shared state `rho` measured in Z is the relative entropy
//! of coherence of its parity-dephased form minus the error-correction cost.
//! Around that core sit the standard BB84 and six-state rates, improved rates
//! from fine-grained statistics, a detector-mismatch analysis, entanglement
//! bounds, and a small simulator for coherent error correction.

// range checks are written `!(lo <= x && x <= hi)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherence;
pub mod entanglement;
pub mod error;
pub mod finegrained;
pub mod keyrate;
pub mod mismatch;
pub mod optimize;
pub mod qecsim;
pub mod qstate;
pub mod random;
pub mod sweep;

pub use entanglement::{BasisSearchConfig, BasisSearchResult};
pub use error::{Error, Result};
pub use finegrained::{FineGrainedStats, Problem1Solution, SolveMethod};
pub use keyrate::{KeyRateReport, Protocol};
pub use mismatch::{DetectorModel, MismatchAnalysis, ObservedDiag};
pub use qecsim::{HashingMatrix, KeyDistribution};
pub use qstate::{BasisLabel, BellProbs, ComplexMatrix, TwoQubitState};
pub use sweep::{AlphaRow, MismatchRow, SweepRange};
