use thiserror::Error;

/// Errors raised by state construction, entropy evaluation and key-rate solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^dagger| = {max_deviation:e} exceeds 1e-12")]
    NotHermitian { max_deviation: f64 },

    #[error("trace is not one: Tr M = {trace}")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e} < -1e-9")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary: max |U U^dagger - I| = {max_deviation:e} exceeds 1e-10")]
    NotUnitary { max_deviation: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("expected a {expected} matrix, got {rows}x{cols}")]
    DimensionMismatch {
        expected: String,
        rows: usize,
        cols: usize,
    },

    #[error("invalid probability distribution: {reason}")]
    InvalidDistribution { reason: String },

    #[error("{name} = {value} is outside the allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("error rates are inconsistent with any quantum state: p{index} = {value:e} < 0")]
    InconsistentErrorRates { index: usize, value: f64 },

    #[error("statistics are infeasible: {reason}")]
    Infeasible { reason: String },

    #[error("bad basis index pair ({i}, {j}): need distinct indices in 0..4")]
    BadIndex { i: usize, j: usize },

    #[error("filtered state has vanishing norm {norm:e}")]
    VanishingNorm { norm: f64 },

    #[error("simulation too large: {what} = {value} exceeds the cap of {cap}")]
    TooLarge {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("the {basis} basis is not supported here (expected {expected})")]
    UnsupportedBasis {
        basis: crate::qstate::BasisLabel,
        expected: &'static str,
    },

    #[error("alpha = {alpha} lies outside the positive-semidefinite region [{lo:.6}, {hi:.6}] for e = {e}")]
    InfeasibleAlpha {
        alpha: f64,
        e: f64,
        lo: f64,
        hi: f64,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that signal measured statistics no quantum state can produce.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::InconsistentErrorRates { .. }
                | Error::Infeasible { .. }
                | Error::NotPositive { .. }
                | Error::VanishingNorm { .. }
                | Error::InfeasibleAlpha { .. }
        )
    }
}
