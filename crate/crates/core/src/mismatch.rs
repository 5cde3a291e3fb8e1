//! Detector efficiency mismatch: Bob's detectors are modelled as a local filter
//! followed by an ideal measurement, and the filtered state's phase error is
//! recovered from the detection-conditioned statistics.

use serde::Serialize;

use crate::coherence::h2;
use crate::error::{Error, Result};
use crate::finegrained::{bb84_opt_keyrate, lemma2_closed_form, rho_of_ab, FineGrainedStats};
use crate::keyrate::{check_error_rate, KeyRateReport, Protocol};
use crate::qstate::{conjugate_bob, full_dephase, BasisLabel, ComplexMatrix, TwoQubitState};

const DIST_TOL: f64 = 1e-9;
/// Filtered states with trace below this are rejected.
pub const VANISHING_NORM: f64 = 1e-12;

/// Efficiencies of Bob's `0` and `1` detectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorModel {
    eta0: f64,
    eta1: f64,
}

impl DetectorModel {
    pub fn new(eta0: f64, eta1: f64) -> Result<Self> {
        for (name, v) in [("eta0", eta0), ("eta1", eta1)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    range: "(0, 1]",
                });
            }
        }
        Ok(Self { eta0, eta1 })
    }

    pub fn eta0(&self) -> f64 {
        self.eta0
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    /// Mismatch ratio `eta0 / (eta0 + eta1)`.
    pub fn x(&self) -> f64 {
        self.eta0 / (self.eta0 + self.eta1)
    }

    /// Efficiency seen by outcome `k` of a two-qubit measurement (Bob is the low bit).
    fn eta_for(&self, k: usize) -> f64 {
        if k.is_multiple_of(2) {
            self.eta0
        } else {
            self.eta1
        }
    }
}

/// Detection-conditioned outcome frequencies in one product basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservedDiag {
    pub basis: BasisLabel,
    pub m_hat: [f64; 4],
}

impl ObservedDiag {
    pub fn new(basis: BasisLabel, m_hat: [f64; 4]) -> Result<Self> {
        check_filter_basis(basis)?;
        if let Some(bad) = m_hat.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidDistribution {
                reason: format!("observed frequency {bad} is negative or not finite"),
            });
        }
        let s: f64 = m_hat.iter().sum();
        if (s - 1.0).abs() > DIST_TOL {
            return Err(Error::InvalidDistribution {
                reason: format!("observed frequencies sum to {s}"),
            });
        }
        Ok(Self { basis, m_hat })
    }
}

fn check_filter_basis(basis: BasisLabel) -> Result<()> {
    match basis {
        BasisLabel::Z | BasisLabel::X => Ok(()),
        BasisLabel::Y => Err(Error::UnsupportedBasis {
            basis,
            expected: "Z or X",
        }),
    }
}

/// `sqrt(eta0) |b0><b0| + sqrt(eta1) |b1><b1|` for the basis kets `b0, b1`.
pub fn filter_op(basis: BasisLabel, det: &DetectorModel) -> Result<ComplexMatrix> {
    check_filter_basis(basis)?;
    let k = basis.kets();
    let p0 = ComplexMatrix::outer(&k[0]).scale_real(det.eta0.sqrt());
    let p1 = ComplexMatrix::outer(&k[1]).scale_real(det.eta1.sqrt());
    Ok(&p0 + &p1)
}

/// `(1 ⊗ F) rho (1 ⊗ F) / Tr(...)` together with the trace.
fn filter_with_norm(
    rho: &TwoQubitState,
    basis: BasisLabel,
    det: &DetectorModel,
) -> Result<(TwoQubitState, f64)> {
    let f = filter_op(basis, det)?;
    let m = conjugate_bob(rho, &f);
    let norm = m.trace().re;
    if !(norm > VANISHING_NORM) {
        return Err(Error::VanishingNorm { norm });
    }
    Ok((TwoQubitState::from_trusted(m.scale_real(1.0 / norm)), norm))
}

/// Normalized state after Bob's filter.
pub fn filtered_state(
    rho: &TwoQubitState,
    basis: BasisLabel,
    det: &DetectorModel,
) -> Result<TwoQubitState> {
    filter_with_norm(rho, basis, det).map(|(s, _)| s)
}

/// Trace of the unnormalized filtered state.
pub fn filter_norm(rho: &TwoQubitState, basis: BasisLabel, det: &DetectorModel) -> Result<f64> {
    filter_with_norm(rho, basis, det).map(|(_, n)| n)
}

/// Frequencies an experiment with detectors `det` records when measuring `rho` in `basis`.
pub fn observe(
    rho: &TwoQubitState,
    basis: BasisLabel,
    det: &DetectorModel,
) -> Result<ObservedDiag> {
    let filtered = filtered_state(rho, basis, det)?;
    let mut m = full_dephase(&filtered, basis);
    for v in m.iter_mut() {
        *v = v.max(0.0);
    }
    let s: f64 = m.iter().sum();
    m.iter_mut().for_each(|v| *v /= s);
    ObservedDiag::new(basis, m)
}

/// `1 / sum_k m_hat_k / eta_k` with the pattern `(eta0, eta1, eta0, eta1)`.
pub fn gamma_from_observed(obs: &ObservedDiag, det: &DetectorModel) -> f64 {
    let s: f64 = obs
        .m_hat
        .iter()
        .enumerate()
        .map(|(k, m)| m / det.eta_for(k))
        .sum();
    1.0 / s
}

/// Phase error of the unfiltered state, `Gamma' (m'_01 / eta1 + m'_10 / eta0)`.
pub fn phase_error_double_prime(obs_x: &ObservedDiag, det: &DetectorModel) -> Result<f64> {
    if obs_x.basis != BasisLabel::X {
        return Err(Error::UnsupportedBasis {
            basis: obs_x.basis,
            expected: "X",
        });
    }
    let g = gamma_from_observed(obs_x, det);
    Ok((g * (obs_x.m_hat[1] / det.eta1 + obs_x.m_hat[2] / det.eta0)).clamp(0.0, 1.0))
}

/// Phase error of the Z-filtered state, `1/2 - sqrt(eta0 eta1)/Gamma (1/2 - e_p'')`.
pub fn corrected_phase_error(gamma: f64, e_pp: f64, det: &DetectorModel) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            range: "(0, inf)",
        });
    }
    let r = (det.eta0 * det.eta1).sqrt() / gamma;
    Ok((0.5 - r * (0.5 - e_pp)).clamp(0.0, 1.0))
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            range: "(0, 1)",
        });
    }
    Ok(())
}

/// `f(x, e_p) = 1/2 + sqrt((1/2 - x)^2 + x(1 - x)(1 - 2 e_p)^2)`.
pub fn mismatch_f(x: f64, e_p: f64) -> f64 {
    let t = 1.0 - 2.0 * e_p;
    (0.5 + ((0.5 - x).powi(2) + x * (1.0 - x) * t * t).sqrt()).min(1.0)
}

/// Rate under the symmetric attack, `H(x) - H(f(x, e_p)) - H(e_b)`.
pub fn mismatch_keyrate(x: f64, e_p: f64, e_b: f64) -> Result<KeyRateReport> {
    check_x(x)?;
    check_error_rate("e_p", e_p)?;
    check_error_rate("e_b", e_b)?;
    let coherence = h2(x) - h2(mismatch_f(x, e_p));

    // the Z-filtered symmetric-attack state, reached through the closed form
    let e_p_prime = 0.5 - 2.0 * (x * (1.0 - x)).sqrt() * (0.5 - e_p);
    let m = [
        x * (1.0 - e_b),
        (1.0 - x) * e_b,
        x * e_b,
        (1.0 - x) * (1.0 - e_b),
    ];
    let stats = FineGrainedStats::new(m, e_p_prime.clamp(0.0, 1.0))?;
    let sol = lemma2_closed_form(x, e_b, stats.e_p())?;
    let witness = rho_of_ab(&stats, sol.a_bar, sol.b_bar)?;

    Ok(KeyRateReport::new(
        Protocol::Mismatch,
        coherence,
        h2(e_b),
        Some(witness),
    ))
}

/// Rate after discarding data to equalize detector efficiencies.
pub fn discard_keyrate_k1(x: f64, e_p: f64, e_b: f64) -> Result<f64> {
    check_x(x)?;
    check_error_rate("e_p", e_p)?;
    check_error_rate("e_b", e_b)?;
    Ok(2.0 * x.min(1.0 - x) * (1.0 - h2(e_p) - h2(e_b)))
}

/// Rate of the complementarity-based virtual protocol.
pub fn koashi_keyrate_k2(x: f64, e_p: f64, e_b: f64) -> Result<f64> {
    check_x(x)?;
    check_error_rate("e_p", e_p)?;
    check_error_rate("e_b", e_b)?;
    Ok(2.0 * x.min(1.0 - x) * (1.0 - h2(e_p)) - h2(e_b))
}

/// Every intermediate of the mismatch estimation chain.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchAnalysis {
    pub observed_z: ObservedDiag,
    pub observed_x: ObservedDiag,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub e_p_double_prime: f64,
    pub e_p_prime: f64,
    pub e_b: f64,
    pub stats: FineGrainedStats,
    pub report: KeyRateReport,
}

/// Simulates the observed statistics of `rho` under `det`, runs the estimation
/// chain and applies the fine-grained BB84 rate to the Z-filtered statistics.
pub fn mismatch_pipeline(rho: &TwoQubitState, det: &DetectorModel) -> Result<MismatchAnalysis> {
    let observed_z = observe(rho, BasisLabel::Z, det)?;
    let observed_x = observe(rho, BasisLabel::X, det)?;
    let gamma = gamma_from_observed(&observed_z, det);
    let gamma_prime = gamma_from_observed(&observed_x, det);
    let e_pp = phase_error_double_prime(&observed_x, det)?;
    let e_p_prime = corrected_phase_error(gamma, e_pp, det)?;
    let stats = FineGrainedStats::new(observed_z.m_hat, e_p_prime)?;
    let mut report = bb84_opt_keyrate(&stats)?;
    report.protocol = Protocol::MismatchPipeline;
    Ok(MismatchAnalysis {
        observed_z,
        observed_x,
        gamma,
        gamma_prime,
        e_p_double_prime: e_pp,
        e_p_prime,
        e_b: stats.e_b(),
        stats,
        report,
    })
}
