//! Entanglement-side bounds: hashing bound, Devetak-Winter privacy term,
//! entanglement of formation and the basis-optimized key rate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::{h2, quantum_relative_entropy, von_neumann_entropy, x_state_coherence};
use crate::error::{Error, Result};
use crate::keyrate::bit_error_rate;
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::qstate::state::local_rotate_unchecked;
use crate::qstate::{
    hermitian_eigensystem, partial_dephase, partial_trace_a, partial_trace_b, ComplexMatrix,
    TwoQubitState,
};

/// `S(Tr_A Phi(rho)) - S(Phi(rho))`.
pub fn hashing_bound(rho: &TwoQubitState) -> Result<f64> {
    let phi = partial_dephase(rho);
    Ok(von_neumann_entropy(&partial_trace_a(&phi))? - von_neumann_entropy(&phi)?)
}

/// Dephases Alice's qubit in Z, leaving Bob untouched.
pub fn a_dephase(rho: &TwoQubitState) -> TwoQubitState {
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            if i >> 1 == j >> 1 {
                out[(i, j)] = m[(i, j)];
            }
        }
    }
    TwoQubitState::from_trusted(out)
}

/// `D(rho || Delta_A(rho))`, the entropy of Alice's Z outcome conditioned on Eve.
pub fn devetak_winter_privacy(rho: &TwoQubitState) -> Result<f64> {
    let d = quantum_relative_entropy(rho, &a_dephase(rho))?;
    Ok(d.finite().unwrap_or(f64::INFINITY))
}

/// Two-qubit entanglement of formation from the concurrence.
pub fn entanglement_of_formation(rho: &TwoQubitState) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// `H(1/2 + sqrt(1 - C^2)/2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    h2(0.5 + 0.5 * (1.0 - c * c).max(0.0).sqrt())
}

/// `max(0, l1 - l2 - l3 - l4)` over the square roots of the spectrum of
/// `sqrt(rho) rho~ sqrt(rho)` with `rho~ = (Y ⊗ Y) rho* (Y ⊗ Y)`.
pub fn concurrence(rho: &TwoQubitState) -> Result<f64> {
    let yy = {
        let mut y = ComplexMatrix::zeros(2, 2);
        y[(0, 1)] = Complex64::new(0.0, -1.0);
        y[(1, 0)] = Complex64::new(0.0, 1.0);
        y.kron(&y)
    };
    let tilde = yy.conjugate(&rho.matrix().conj());
    let sqrt_rho = hermitian_eigensystem(rho.matrix())?.map(|v| v.max(0.0).sqrt());
    let r = sqrt_rho.conjugate(&tilde).hermitian_part();
    let mut l: Vec<f64> = hermitian_eigensystem(&r)?
        .values
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Settings for the local-basis search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSearchConfig {
    /// Random starts in addition to the computational and Schmidt seeds.
    pub restarts: usize,
    pub max_iterations: usize,
    /// Function-value spread at which a simplex run stops.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for BasisSearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            tolerance: 1e-12,
            seed: 0x6b65_7972,
        }
    }
}

impl BasisSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::OutOfRange {
                name: "restarts",
                value: self.restarts as f64,
                range: "[1, inf)",
            });
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::OutOfRange {
                name: "tolerance",
                value: self.tolerance,
                range: "(0, inf)",
            });
        }
        Ok(())
    }
}

/// Best rate found by the local-basis search.
///
/// `u_a` and `u_b` hold the measurement bases as columns; the rate is that of
/// `local_rotate(rho, u_a^dagger, u_b^dagger)` measured in Z.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSearchResult {
    pub rate: f64,
    pub u_a: ComplexMatrix,
    pub u_b: ComplexMatrix,
    pub evaluations: usize,
}

/// `[[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]`.
pub fn euler_unitary(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * theta).sin_cos();
    let mut u = ComplexMatrix::zeros(2, 2);
    u[(0, 0)] = Complex64::new(c, 0.0);
    u[(0, 1)] = -Complex64::from_polar(s, lambda);
    u[(1, 0)] = Complex64::from_polar(s, phi);
    u[(1, 1)] = Complex64::from_polar(c, phi + lambda);
    u
}

/// Z-basis rate `C(Phi(rho)) - H(e_b)` from the X-pattern entries.
fn fast_rate(rho: &TwoQubitState) -> f64 {
    let d = rho.diagonal();
    let c = x_state_coherence(d, rho.element(0, 3).norm(), rho.element(1, 2).norm());
    c - h2(bit_error_rate(rho))
}

struct Seed {
    v_a: ComplexMatrix,
    v_b: ComplexMatrix,
    angles: [f64; 6],
}

fn bases_for(seed: &Seed, x: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let ua = &seed.v_a * &euler_unitary(x[0], x[1], x[2]);
    let ub = &seed.v_b * &euler_unitary(x[3], x[4], x[5]);
    (ua, ub)
}

fn rate_in_bases(rho: &TwoQubitState, ua: &ComplexMatrix, ub: &ComplexMatrix) -> f64 {
    fast_rate(&local_rotate_unchecked(rho, &ua.dagger(), &ub.dagger()))
}

/// Local bases from the Schmidt decomposition of the dominant eigenvector.
fn schmidt_seed(rho: &TwoQubitState) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let es = hermitian_eigensystem(rho.matrix())?;
    let psi = es.vector(0);
    let pure = TwoQubitState::from_trusted(ComplexMatrix::outer(&psi));
    let ra = partial_trace_b(&pure);
    let ea = hermitian_eigensystem(&ra)?;

    let mut va = ComplexMatrix::zeros(2, 2);
    let mut vb = ComplexMatrix::zeros(2, 2);
    let mut w = [[Complex64::new(0.0, 0.0); 2]; 2];
    for k in 0..2 {
        let u = ea.vector(k);
        va[(0, k)] = u[0];
        va[(1, k)] = u[1];
    }
    // the second Bob vector is the orthogonal complement; dividing by a tiny
    // Schmidt coefficient would only amplify rounding noise
    let u = ea.vector(0);
    let sigma = ea.values[0].max(0.0).sqrt();
    for b in 0..2 {
        w[0][b] = (0..2)
            .map(|a| u[a].conj() * psi[2 * a + b])
            .sum::<Complex64>()
            / sigma;
    }
    w[1] = [-w[0][1].conj(), w[0][0].conj()];
    for k in 0..2 {
        let n: f64 = w[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for b in 0..2 {
            vb[(b, k)] = w[k][b] / n;
        }
    }
    Ok((va, vb))
}

/// Searches local measurement bases for the largest Z-basis rate.
///
/// Starts from the computational basis, the Schmidt basis of the dominant
/// eigenvector, and `cfg.restarts` random Euler angles. The result is a lower
/// bound on the true optimum.
pub fn max_keyrate_over_bases(
    rho: &TwoQubitState,
    cfg: &BasisSearchConfig,
) -> Result<BasisSearchResult> {
    cfg.validate()?;
    let id = ComplexMatrix::identity(2);
    let (sa, sb) = schmidt_seed(rho)?;
    let mut seeds = vec![
        Seed {
            v_a: id.clone(),
            v_b: id.clone(),
            angles: [0.0; 6],
        },
        Seed {
            v_a: sa,
            v_b: sb,
            angles: [0.0; 6],
        },
    ];
    for k in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
        let mut angles = [0.0; 6];
        for a in angles.iter_mut() {
            *a = rng.random_range(0.0..std::f64::consts::TAU);
        }
        seeds.push(Seed {
            v_a: id.clone(),
            v_b: id.clone(),
            angles,
        });
    }

    let opts = NelderMeadOptions {
        max_iterations: cfg.max_iterations,
        f_tol: cfg.tolerance,
        initial_step: 0.5,
    };
    let runs: Vec<(f64, Vec<f64>, usize)> = seeds
        .par_iter()
        .map(|seed| {
            let f = |x: &[f64]| {
                let (ua, ub) = bases_for(seed, x);
                -rate_in_bases(rho, &ua, &ub)
            };
            let start = f(&seed.angles);
            let mut best = nelder_mead(&f, &seed.angles, &opts);
            // one restart from the converged point escapes premature collapse
            let again = nelder_mead(&f, &best.x.clone(), &opts);
            best.evaluations += again.evaluations;
            if again.value < best.value {
                best.x = again.x;
                best.value = again.value;
            }
            if start <= best.value {
                (-start, seed.angles.to_vec(), best.evaluations + 1)
            } else {
                (-best.value, best.x, best.evaluations + 1)
            }
        })
        .collect();

    let total: usize = runs.iter().map(|r| r.2).sum();
    let (idx, (rate, x, _)) = runs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(b.0.cmp(&a.0)))
        .expect("at least two seeds");
    let (u_a, u_b) = bases_for(&seeds[idx], x);
    Ok(BasisSearchResult {
        rate: *rate,
        u_a,
        u_b,
        evaluations: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::rel_entropy_coherence;
    use crate::keyrate::keyrate_symmetric;
    use crate::qstate::{local_rotate, BasisLabel};
    use crate::random::{random_ket, random_state, random_unitary, seeded_rng};

    fn quick() -> BasisSearchConfig {
        BasisSearchConfig {
            restarts: 8,
            ..Default::default()
        }
    }

    #[test]
    fn hashing_examples() {
        assert!((hashing_bound(&TwoQubitState::phi_plus()).unwrap() - 1.0).abs() < 1e-12);
        assert!((hashing_bound(&TwoQubitState::maximally_mixed()).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn devetak_winter_examples() {
        let d = TwoQubitState::new(ComplexMatrix::from_diag(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        assert!(devetak_winter_privacy(&d).unwrap().abs() < 1e-12);
        assert!((devetak_winter_privacy(&TwoQubitState::phi_plus()).unwrap() - 1.0).abs() < 1e-10);
        let mut rng = seeded_rng(50);
        for _ in 0..50 {
            let phi = partial_dephase(&random_state(&mut rng));
            let dw = devetak_winter_privacy(&phi).unwrap();
            let c = rel_entropy_coherence(&phi, BasisLabel::Z).unwrap();
            assert!((dw - c).abs() < 1e-9);
        }
    }

    #[test]
    fn eof_examples() {
        assert!(
            (entanglement_of_formation(&TwoQubitState::phi_plus()).unwrap() - 1.0).abs() < 1e-10
        );
        let cc = TwoQubitState::new(ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5])).unwrap();
        assert!(entanglement_of_formation(&cc).unwrap().abs() < 1e-12);
        // Werner state p|Phi+><Phi+| + (1-p) I/4 has concurrence max(0, (3p-1)/2)
        for p in [0.2, 0.4, 0.7, 0.95] {
            let w = TwoQubitState::phi_plus()
                .mix(&TwoQubitState::maximally_mixed(), p)
                .unwrap();
            let c = concurrence(&w).unwrap();
            assert!(
                (c - f64::max(0.0, (3.0 * p - 1.0) / 2.0)).abs() < 1e-9,
                "{p}"
            );
        }
    }

    #[test]
    fn euler_unitary_is_unitary() {
        let u = euler_unitary(0.7, 1.9, -2.3);
        assert!(u.max_unitary_deviation() < 1e-15);
    }

    #[test]
    fn fast_rate_matches_keyrate() {
        let mut rng = seeded_rng(51);
        for _ in 0..100 {
            let rho = random_state(&mut rng);
            let k = keyrate_symmetric(&rho).unwrap().rate;
            assert!((fast_rate(&rho) - k).abs() < 1e-10);
        }
    }

    #[test]
    fn pure_state_reaches_entanglement_entropy() {
        let mut rng = seeded_rng(52);
        for _ in 0..5 {
            let psi = random_ket(&mut rng, 4);
            let rho = TwoQubitState::new(ComplexMatrix::outer(&psi)).unwrap();
            let ent = von_neumann_entropy(&partial_trace_b(&rho)).unwrap();
            let r = max_keyrate_over_bases(&rho, &quick()).unwrap();
            assert!((r.rate - ent).abs() < 1e-6, "{} vs {ent}", r.rate);
            let rotated = local_rotate(&rho, &r.u_a.dagger(), &r.u_b.dagger()).unwrap();
            assert!((keyrate_symmetric(&rotated).unwrap().rate - r.rate).abs() < 1e-9);
        }
    }

    #[test]
    fn product_and_rotated_bell_states() {
        let mut rng = seeded_rng(53);
        let a = random_ket(&mut rng, 2);
        let b = random_ket(&mut rng, 2);
        let prod: Vec<Complex64> = (0..4).map(|k| a[k >> 1] * b[k & 1]).collect();
        let rho = TwoQubitState::new(ComplexMatrix::outer(&prod)).unwrap();
        assert!(max_keyrate_over_bases(&rho, &quick()).unwrap().rate.abs() < 1e-6);

        let ua = random_unitary(&mut rng, 2);
        let ub = random_unitary(&mut rng, 2);
        let rotated = local_rotate(&TwoQubitState::phi_plus(), &ua, &ub).unwrap();
        let r = max_keyrate_over_bases(&rotated, &quick()).unwrap();
        assert!((r.rate - 1.0).abs() < 1e-6);
    }

    #[test]
    fn schmidt_seed_is_unitary_for_product_eigenvectors() {
        let mut rng = seeded_rng(99);
        for _ in 0..200 {
            let rho = crate::random::random_product_state(&mut rng);
            let (a, b) = schmidt_seed(&rho).unwrap();
            assert!(a.max_unitary_deviation() < 1e-9);
            assert!(b.max_unitary_deviation() < 1e-9);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let mut rng = seeded_rng(54);
        let rho = random_state(&mut rng);
        let a = max_keyrate_over_bases(&rho, &quick()).unwrap();
        let b = max_keyrate_over_bases(&rho, &quick()).unwrap();
        assert_eq!(a, b);
        let bad = BasisSearchConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(max_keyrate_over_bases(&rho, &bad).is_err());
    }
}
