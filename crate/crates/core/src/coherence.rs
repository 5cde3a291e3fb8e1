//! Entropies and the relative entropy of coherence. All logarithms are base 2.

use crate::error::{Error, Result};
use crate::qstate::{
    density_spectrum, full_dephase, hermitian_eigensystem, BasisLabel, ComplexMatrix, TwoQubitState,
};

/// Arguments below this are treated as exact zeros in `x log x`.
const LOG_FLOOR: f64 = 1e-300;
const DIST_TOL: f64 = 1e-9;

/// Support tolerances for the quantum relative entropy.
pub const SUPPORT_EIGEN_TOL: f64 = 1e-12;
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-10;

/// `-x log2 x` with `0 log 0 = 0`.
#[inline]
pub fn neg_xlog2x(x: f64) -> f64 {
    if x < LOG_FLOOR {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy without range checking; callers guarantee `e` in `[0, 1]`.
#[inline]
pub(crate) fn h2(e: f64) -> f64 {
    neg_xlog2x(e) + neg_xlog2x(1.0 - e)
}

/// `H(e) = -e log2 e - (1-e) log2 (1-e)`.
pub fn binary_entropy(e: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&e) {
        return Err(Error::OutOfRange {
            name: "e",
            value: e,
            range: "[0, 1]",
        });
    }
    Ok(h2(e))
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution {
            reason: "empty distribution".into(),
        });
    }
    if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidDistribution {
            reason: format!("entry {bad} is negative or not finite"),
        });
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > DIST_TOL {
        return Err(Error::InvalidDistribution {
            reason: format!("entries sum to {s}"),
        });
    }
    Ok(p.iter().map(|&x| neg_xlog2x(x)).sum())
}

/// Shannon entropy of entries clipped at zero, no normalization checks.
pub(crate) fn entropy_of(p: &[f64]) -> f64 {
    p.iter().map(|&x| neg_xlog2x(x.max(0.0))).sum()
}

/// `S(rho) = -Tr rho log2 rho` from the clipped spectrum.
pub fn von_neumann_entropy<M: AsRef<ComplexMatrix> + ?Sized>(rho: &M) -> Result<f64> {
    let spec = density_spectrum(rho.as_ref())?;
    Ok(entropy_of(&spec))
}

/// Relative entropy of coherence in the computational basis of any dimension:
/// `S(diag rho) - S(rho)`.
pub fn coherence_computational<M: AsRef<ComplexMatrix> + ?Sized>(rho: &M) -> Result<f64> {
    let m = rho.as_ref();
    let diag = m.real_diagonal();
    Ok((entropy_of(&diag) - von_neumann_entropy(m)?).max(0.0))
}

/// Relative entropy of coherence of a two-qubit state in the product basis `basis ⊗ basis`.
pub fn rel_entropy_coherence(rho: &TwoQubitState, basis: BasisLabel) -> Result<f64> {
    let p = full_dephase(rho, basis);
    Ok((entropy_of(&p) - von_neumann_entropy(rho)?).max(0.0))
}

/// Outcome distribution of a single-qubit measurement in `basis`.
pub fn qubit_dephase(rho: &ComplexMatrix, basis: BasisLabel) -> [f64; 2] {
    let k = basis.kets();
    [rho.sandwich(&k[0], &k[0]).re, rho.sandwich(&k[1], &k[1]).re]
}

/// Relative entropy of coherence of a single qubit in `basis`.
pub fn qubit_coherence(rho: &ComplexMatrix, basis: BasisLabel) -> Result<f64> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2x2".into(),
            rows: rho.rows(),
            cols: rho.cols(),
        });
    }
    let p = qubit_dephase(rho, basis);
    Ok((entropy_of(&p) - von_neumann_entropy(rho)?).max(0.0))
}

/// Diagonal part of `rho` as a matrix (full computational dephasing).
pub fn dephased_matrix(rho: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_diag(&rho.real_diagonal())
}

/// Eigenvalues of the Hermitian block `[[p, c], [c*, q]]` given `|c|`.
pub(crate) fn block_eigenvalues(p: f64, q: f64, c_abs: f64) -> [f64; 2] {
    let mean = 0.5 * (p + q);
    let r = (0.25 * (p - q) * (p - q) + c_abs * c_abs).sqrt();
    [mean + r, mean - r]
}

/// Computational-basis coherence of a state supported on the X pattern:
/// diagonal `d`, `|rho_03| = c03`, `|rho_12| = c12`, all other entries zero.
///
/// Negative block eigenvalues from slightly infeasible inputs are clipped.
pub fn x_state_coherence(d: [f64; 4], c03: f64, c12: f64) -> f64 {
    let even = block_eigenvalues(d[0], d[3], c03);
    let odd = block_eigenvalues(d[1], d[2], c12);
    let s = entropy_of(&[even[0], even[1], odd[0], odd[1]]);
    (entropy_of(&d) - s).max(0.0)
}

/// Value of `D(rho || sigma)`, which is infinite when `rho` leaks outside the support of `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl RelativeEntropy {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(v) => Some(v),
            RelativeEntropy::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RelativeEntropy::Infinite)
    }
}

/// `D(rho || sigma) = Tr rho log2 rho - Tr rho log2 sigma`, evaluated in the two
/// eigenbases through the overlaps `|<v_i|w_j>|^2`.
pub fn quantum_relative_entropy<A, B>(rho: &A, sigma: &B) -> Result<RelativeEntropy>
where
    A: AsRef<ComplexMatrix> + ?Sized,
    B: AsRef<ComplexMatrix> + ?Sized,
{
    let (r, s) = (rho.as_ref(), sigma.as_ref());
    if r.rows() != s.rows() || r.cols() != s.cols() || !r.is_square() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", r.rows(), r.cols()),
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let er = hermitian_eigensystem(r)?;
    let es = hermitian_eigensystem(s)?;
    let lr = crate::qstate::state::clip_spectrum(er.values.clone())?;
    let ls = crate::qstate::state::clip_spectrum(es.values.clone())?;

    let mut tr_rho_log_rho = 0.0;
    for &l in &lr {
        tr_rho_log_rho -= neg_xlog2x(l);
    }

    let mut tr_rho_log_sigma = 0.0;
    for (j, &sj) in ls.iter().enumerate() {
        let w = es.vector(j);
        // <w_j| rho |w_j> = sum_i lambda_i |<v_i|w_j>|^2
        let mut weight = 0.0;
        for (i, &li) in lr.iter().enumerate() {
            if li == 0.0 {
                continue;
            }
            let v = er.vector(i);
            let overlap: num_complex::Complex64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            weight += li * overlap.norm_sqr();
        }
        if sj < SUPPORT_EIGEN_TOL {
            if weight > SUPPORT_WEIGHT_TOL {
                return Ok(RelativeEntropy::Infinite);
            }
            continue;
        }
        tr_rho_log_sigma += weight * sj.log2();
    }
    Ok(RelativeEntropy::Finite(
        (tr_rho_log_rho - tr_rho_log_sigma).max(0.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_diagonal, BellProbs};
    use crate::random::{random_density, random_state, seeded_rng};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // -0.03 log2 0.03 - 0.97 log2 0.97
        assert!(close(binary_entropy(0.03).unwrap(), 0.1943919, 1e-7));
        assert!(binary_entropy(1.2).is_err());
        assert!(binary_entropy(-0.1).is_err());
        for e in [0.01, 0.13, 0.31, 0.49] {
            assert!(close(h2(e), h2(1.0 - e), 1e-15));
        }
    }

    #[test]
    fn shannon_entropy_values() {
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(shannon_entropy(&[0.25; 4]).unwrap(), 2.0);
        assert!(close(
            shannon_entropy(&[0.955, 0.015, 0.015, 0.015]).unwrap(),
            0.3360883,
            1e-7
        ));
        assert!(shannon_entropy(&[0.5, 0.6]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
        assert!(shannon_entropy(&[]).is_err());
    }

    #[test]
    fn von_neumann_examples() {
        assert!(close(
            von_neumann_entropy(&TwoQubitState::phi_plus()).unwrap(),
            0.0,
            1e-12
        ));
        assert!(close(
            von_neumann_entropy(&TwoQubitState::maximally_mixed()).unwrap(),
            2.0,
            1e-12
        ));
        let rho = bell_diagonal(&BellProbs::new([0.955, 0.015, 0.015, 0.015]).unwrap());
        assert!(close(von_neumann_entropy(&rho).unwrap(), 0.3360883, 1e-7));
    }

    #[test]
    fn coherence_examples() {
        let diag =
            crate::qstate::make_state(ComplexMatrix::from_diag(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        assert!(close(
            rel_entropy_coherence(&diag, BasisLabel::Z).unwrap(),
            0.0,
            1e-12
        ));
        assert!(close(
            rel_entropy_coherence(&TwoQubitState::phi_plus(), BasisLabel::Z).unwrap(),
            1.0,
            1e-12
        ));
        for b in BasisLabel::ALL {
            assert!(close(
                rel_entropy_coherence(&TwoQubitState::maximally_mixed(), b).unwrap(),
                0.0,
                1e-12
            ));
        }
    }

    #[test]
    fn relative_entropy_examples() {
        let mut rng = seeded_rng(4);
        let rho = random_state(&mut rng);
        assert!(close(
            quantum_relative_entropy(&rho, &rho)
                .unwrap()
                .finite()
                .unwrap(),
            0.0,
            1e-10
        ));

        let zero = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let one = ComplexMatrix::from_diag(&[0.0, 1.0]);
        let mixed = ComplexMatrix::from_diag(&[0.5, 0.5]);
        assert!(close(
            quantum_relative_entropy(&zero, &mixed)
                .unwrap()
                .finite()
                .unwrap(),
            1.0,
            1e-14
        ));
        assert!(quantum_relative_entropy(&zero, &one).unwrap().is_infinite());
        assert!(matches!(
            quantum_relative_entropy(&zero, TwoQubitState::phi_plus().matrix()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coherence_equals_relative_entropy_to_dephased() {
        let mut rng = seeded_rng(21);
        for _ in 0..300 {
            let rho = random_state(&mut rng);
            let c = rel_entropy_coherence(&rho, BasisLabel::Z).unwrap();
            let d = quantum_relative_entropy(&rho, &dephased_matrix(rho.matrix()))
                .unwrap()
                .finite()
                .unwrap();
            assert!(close(c, d, 1e-9), "{c} vs {d}");
        }
    }

    #[test]
    fn x_state_coherence_matches_generic_path() {
        let mut rng = seeded_rng(33);
        for _ in 0..200 {
            let rho = crate::qstate::partial_dephase(&random_state(&mut rng));
            let fast = x_state_coherence(
                rho.diagonal(),
                rho.element(0, 3).norm(),
                rho.element(1, 2).norm(),
            );
            let slow = rel_entropy_coherence(&rho, BasisLabel::Z).unwrap();
            assert!(close(fast, slow, 1e-10), "{fast} vs {slow}");
        }
    }

    #[test]
    fn qubit_coherence_matches_closed_form() {
        // rho = [[b, c], [c, 1-b]] real: C = H(b) - H(1/2 + sqrt((b-1/2)^2 + c^2))
        let mut rng = seeded_rng(8);
        for _ in 0..100 {
            let rho = random_density(&mut rng, 2).real_part();
            let b = rho[(0, 0)].re;
            let c = rho[(0, 1)].re;
            let lam = 0.5 + ((b - 0.5).powi(2) + c * c).sqrt();
            let expected = h2(b) - h2(lam);
            assert!(close(
                qubit_coherence(&rho, BasisLabel::Z).unwrap(),
                expected,
                1e-12
            ));
        }
    }
}
