use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::state::TwoQubitState;
use crate::error::{Error, Result};

const DIST_TOL: f64 = 1e-9;
/// Negative probabilities above this are treated as rounding and clipped.
pub const NEGATIVE_CLIP: f64 = 1e-12;

/// Bell kets in the order `|Phi+>, |Phi->, |Psi+>, |Psi->`.
pub fn bell_ket(k: usize) -> [Complex64; 4] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    match k {
        0 => [h, z, z, h],
        1 => [h, z, z, -h],
        2 => [z, h, h, z],
        3 => [z, h, -h, z],
        _ => panic!("Bell index {k} out of range"),
    }
}

/// Weights of a state on the four Bell states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellProbs {
    p: [f64; 4],
}

impl BellProbs {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidDistribution {
                reason: format!("negative or non-finite Bell weight {bad}"),
            });
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > DIST_TOL {
            return Err(Error::InvalidDistribution {
                reason: format!("Bell weights sum to {s}"),
            });
        }
        Ok(Self { p })
    }

    /// Inverts `e_x = p1 + p3`, `e_y = p1 + p2`, `e_z = p2 + p3` with `sum p = 1`.
    /// Weights in `[-1e-12, 0)` are clipped; anything more negative is rejected.
    pub fn from_error_rates(e_x: f64, e_y: f64, e_z: f64) -> Result<Self> {
        let mut p = [
            (2.0 - e_x - e_y - e_z) / 2.0,
            (e_x + e_y - e_z) / 2.0,
            (e_y + e_z - e_x) / 2.0,
            (e_z + e_x - e_y) / 2.0,
        ];
        for (index, v) in p.iter_mut().enumerate() {
            if *v < -NEGATIVE_CLIP {
                return Err(Error::InconsistentErrorRates { index, value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let s: f64 = p.iter().sum();
        for v in p.iter_mut() {
            *v /= s;
        }
        Self::new(p)
    }

    pub fn probs(&self) -> [f64; 4] {
        self.p
    }

    pub fn e_x(&self) -> f64 {
        self.p[1] + self.p[3]
    }

    pub fn e_y(&self) -> f64 {
        self.p[1] + self.p[2]
    }

    pub fn e_z(&self) -> f64 {
        self.p[2] + self.p[3]
    }
}

/// `sum_k p_k |B_k><B_k|` over the Bell basis.
pub fn bell_diagonal(p: &BellProbs) -> TwoQubitState {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (k, &pk) in p.probs().iter().enumerate() {
        if pk != 0.0 {
            m = &m + &ComplexMatrix::outer(&bell_ket(k)).scale_real(pk);
        }
    }
    TwoQubitState::from_trusted(m)
}

/// Diagonal of a state in the Bell basis.
pub fn bell_weights(rho: &TwoQubitState) -> [f64; 4] {
    let mut w = [0.0; 4];
    for (k, wk) in w.iter_mut().enumerate() {
        let v = bell_ket(k);
        *wk = rho.matrix().sandwich(&v, &v).re;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_simplex, seeded_rng};

    #[test]
    fn pure_phi_plus() {
        let rho = bell_diagonal(&BellProbs::new([1.0, 0.0, 0.0, 0.0]).unwrap());
        assert_eq!(rho, TwoQubitState::phi_plus());
    }

    #[test]
    fn uniform_weights_give_maximally_mixed() {
        let rho = bell_diagonal(&BellProbs::new([0.25; 4]).unwrap());
        assert!((&rho.into_matrix() - TwoQubitState::maximally_mixed().matrix()).max_abs() < 1e-16);
    }

    #[test]
    fn error_rates_from_weights() {
        let p = BellProbs::new([0.955, 0.015, 0.015, 0.015]).unwrap();
        assert!((p.e_x() - 0.03).abs() < 1e-15);
        assert!((p.e_y() - 0.03).abs() < 1e-15);
        assert!((p.e_z() - 0.03).abs() < 1e-15);
        let back = BellProbs::from_error_rates(0.03, 0.03, 0.03).unwrap();
        for (a, b) in back.probs().iter().zip(p.probs()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn inconsistent_rates_name_the_negative_weight() {
        let err = BellProbs::from_error_rates(0.5, 0.0, 0.0).unwrap_err();
        assert_eq!(
            err,
            Error::InconsistentErrorRates {
                index: 2,
                value: -0.25
            }
        );
    }

    #[test]
    fn invalid_distributions_rejected() {
        assert!(BellProbs::new([0.5, 0.6, 0.0, -0.1]).is_err());
        assert!(BellProbs::new([0.5, 0.6, 0.0, 0.0]).is_err());
    }

    #[test]
    fn weights_round_trip() {
        let mut rng = seeded_rng(1);
        for _ in 0..200 {
            let s = random_simplex(&mut rng, 4);
            let p = BellProbs::new([s[0], s[1], s[2], s[3]]).unwrap();
            let w = bell_weights(&bell_diagonal(&p));
            for (a, b) in w.iter().zip(p.probs()) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}
