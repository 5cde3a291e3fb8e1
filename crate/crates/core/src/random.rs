//! Seeded random matrices and states for property suites and benchmarks.
//!
//! Mixed states follow the Ginibre construction: `G G^dagger / Tr(G G^dagger)`
//! with independent standard-normal real and imaginary parts.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::qstate::{ComplexMatrix, TwoQubitState};

pub type TestRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal_c64<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| normal_c64(rng)).collect();
    ComplexMatrix::from_vec(n, n, data).expect("n*n entries")
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ginibre(rng, n).hermitian_part()
}

/// Random `n x n` density matrix from the Ginibre ensemble.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    let w = &g * &g.dagger();
    let tr = w.trace().re;
    w.scale_real(1.0 / tr).hermitian_part()
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    TwoQubitState::new(random_density(rng, 4)).expect("Ginibre states are valid")
}

/// Random normalized vector of length `n`.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| normal_c64(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    TwoQubitState::new(ComplexMatrix::outer(&random_ket(rng, 4))).expect("pure state")
}

/// `|a><a| ⊗ |b><b|` for random single-qubit kets.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let a = ComplexMatrix::outer(&random_ket(rng, 2));
    let b = ComplexMatrix::outer(&random_ket(rng, 2));
    TwoQubitState::new(a.kron(&b).hermitian_part()).expect("product state")
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            u[(i, j)] = c[i];
        }
    }
    u
}

/// Random probability vector of length `n` (flat Dirichlet).
pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n)
        .map(|_| -rng.random_range(f64::MIN_POSITIVE..1.0).ln())
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}
