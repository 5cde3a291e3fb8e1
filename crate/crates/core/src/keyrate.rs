//! Per-state coherence key rate and the standard BB84 / six-state rates.

use std::fmt;

use serde::Serialize;

use crate::coherence::{h2, rel_entropy_coherence};
use crate::error::{Error, Result};
use crate::qstate::{
    bell_diagonal, parity_projectors, partial_dephase, BasisLabel, BellProbs, TwoQubitState,
};

/// Which rate formula produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    State,
    Bb84,
    SixState,
    Bb84Opt,
    SixStateOpt,
    Mismatch,
    MismatchPipeline,
    BasisOptimized,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Protocol::State => "state",
            Protocol::Bb84 => "bb84",
            Protocol::SixState => "six",
            Protocol::Bb84Opt => "bb84-opt",
            Protocol::SixStateOpt => "six-opt",
            Protocol::Mismatch => "mismatch",
            Protocol::MismatchPipeline => "mismatch-pipeline",
            Protocol::BasisOptimized => "basis-optimized",
        };
        f.write_str(s)
    }
}

/// A key rate with its coherence / reconciliation split.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyRateReport {
    pub rate: f64,
    pub coherence_term: f64,
    pub reconciliation_term: f64,
    /// A state attaining the rate, when one is known.
    pub witness: Option<TwoQubitState>,
    pub protocol: Protocol,
}

impl KeyRateReport {
    pub fn new(
        protocol: Protocol,
        coherence_term: f64,
        reconciliation_term: f64,
        witness: Option<TwoQubitState>,
    ) -> Self {
        Self {
            rate: coherence_term - reconciliation_term,
            coherence_term,
            reconciliation_term,
            witness,
            protocol,
        }
    }

    /// True when no secret key can be extracted (`rate <= 0`).
    pub fn below_zero(&self) -> bool {
        self.rate <= 0.0
    }

    pub fn has_key(&self) -> bool {
        !self.below_zero()
    }
}

pub(crate) fn check_error_rate(name: &'static str, e: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&e) {
        return Err(Error::OutOfRange {
            name,
            value: e,
            range: "[0, 0.5]",
        });
    }
    Ok(())
}

/// `(e_x, e_y, e_z)` as `Tr(Pi- rho)` in each basis.
pub fn error_rates(rho: &TwoQubitState) -> (f64, f64, f64) {
    let e = |b: BasisLabel| {
        let p = parity_projectors(b);
        (&p.minus * rho.matrix()).trace().re.clamp(0.0, 1.0)
    };
    (e(BasisLabel::X), e(BasisLabel::Y), e(BasisLabel::Z))
}

/// Bit error rate `Tr(Pi- rho)` in the Z basis.
pub fn bit_error_rate(rho: &TwoQubitState) -> f64 {
    let d = rho.diagonal();
    (d[1] + d[2]).clamp(0.0, 1.0)
}

/// `K = C(Phi(rho)) - iec` in the Z basis.
pub fn keyrate_of_state(rho: &TwoQubitState, iec: f64) -> Result<KeyRateReport> {
    if !(iec >= 0.0) {
        return Err(Error::OutOfRange {
            name: "iec",
            value: iec,
            range: "[0, inf)",
        });
    }
    let c = rel_entropy_coherence(&partial_dephase(rho), BasisLabel::Z)?;
    Ok(KeyRateReport::new(
        Protocol::State,
        c,
        iec,
        Some(rho.clone()),
    ))
}

/// [`keyrate_of_state`] with `iec = H(e_b)`.
pub fn keyrate_symmetric(rho: &TwoQubitState) -> Result<KeyRateReport> {
    keyrate_of_state(rho, h2(bit_error_rate(rho)))
}

/// Bell-diagonal state with weights `(1-eb)(1-ep), (1-eb)ep, eb(1-ep), eb ep`.
pub fn bb84_worstcase_state(e_b: f64, e_p: f64) -> Result<TwoQubitState> {
    check_error_rate("e_b", e_b)?;
    check_error_rate("e_p", e_p)?;
    let p = BellProbs::new([
        (1.0 - e_b) * (1.0 - e_p),
        (1.0 - e_b) * e_p,
        e_b * (1.0 - e_p),
        e_b * e_p,
    ])?;
    Ok(bell_diagonal(&p))
}

/// `K = 1 - H(e_p) - H(e_b)`.
pub fn bb84_keyrate(e_b: f64, e_p: f64) -> Result<KeyRateReport> {
    let witness = bb84_worstcase_state(e_b, e_p)?;
    Ok(KeyRateReport::new(
        Protocol::Bb84,
        1.0 - h2(e_p),
        h2(e_b),
        Some(witness),
    ))
}

/// `K = 1 - H({p_i})` with the Bell weights inferred from the three error rates.
pub fn sixstate_keyrate(e_x: f64, e_y: f64, e_z: f64) -> Result<KeyRateReport> {
    check_error_rate("e_x", e_x)?;
    check_error_rate("e_y", e_y)?;
    check_error_rate("e_z", e_z)?;
    let p = BellProbs::from_error_rates(e_x, e_y, e_z)?;
    let h_p = crate::coherence::entropy_of(&p.probs());
    let h_z = h2(e_z);
    Ok(KeyRateReport::new(
        Protocol::SixState,
        1.0 - h_p + h_z,
        h_z,
        Some(bell_diagonal(&p)),
    ))
}
