//! Small-scale check that hashing-based error correction done coherently on the
//! pairs, then measured, gives the same keys as measuring first and correcting
//! the bit strings.
//!
//! Bit conventions: pair 0 is the most significant bit of every key, pattern and
//! syndrome; qubit 0 is the most significant bit of a register index.

use std::fmt;

use num_complex::Complex64;

use crate::coherence::entropy_of;
use crate::error::{Error, Result};
use crate::qstate::{ComplexMatrix, TwoQubitState};

/// Largest pair count the classical path enumerates.
pub const MAX_CLASSICAL_PAIRS: usize = 4;
/// Largest register (data plus ancilla qubits) the density-matrix path simulates.
pub const MAX_SIMULATED_QUBITS: usize = 12;

/// Binary `r x n` parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashingMatrix {
    rows: Vec<Vec<bool>>,
    cols: usize,
}

impl HashingMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let r = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if r == 0 || n == 0 {
            return Err(Error::DimensionMismatch {
                expected: "non-empty hashing matrix".into(),
                rows: r,
                cols: n,
            });
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: format!("{r}x{n}"),
                rows: r,
                cols: bad.len(),
            });
        }
        if r > n {
            return Err(Error::DimensionMismatch {
                expected: "at most as many rows as columns".into(),
                rows: r,
                cols: n,
            });
        }
        if let Some(k) = rows.iter().position(|row| !row.iter().any(|&b| b)) {
            return Err(Error::Parse {
                line: k + 1,
                message: "hashing matrix row is all zeros".into(),
            });
        }
        Ok(Self { rows, cols: n })
    }

    /// One row per line, characters `0` and `1`; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut width = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse {
                        line: i + 1,
                        message: format!("unexpected character {other:?}; rows use 0 and 1"),
                    }),
                })
                .collect::<Result<Vec<bool>>>()?;
            if *width.get_or_insert(row.len()) != row.len() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("row has {} entries, expected {}", row.len(), width.unwrap()),
                });
            }
            if !row.iter().any(|&b| b) {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "hashing matrix row is all zeros".into(),
                });
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 1,
                message: "no rows".into(),
            });
        }
        Self::new(rows)
    }

    /// The `2 x 3` matrix `[[1,1,0],[0,1,1]]`.
    pub fn default_2x3() -> Self {
        Self::new(vec![vec![true, true, false], vec![false, true, true]]).expect("valid")
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    /// Syndrome `H e` of an `n`-bit pattern.
    pub fn syndrome(&self, e: usize) -> usize {
        let n = self.cols;
        let mut s = 0;
        for row in &self.rows {
            let mut bit = false;
            for (j, &h) in row.iter().enumerate() {
                if h && (e >> (n - 1 - j)) & 1 == 1 {
                    bit = !bit;
                }
            }
            s = (s << 1) | bit as usize;
        }
        s
    }

    /// Minimum-weight pattern for each syndrome, ties broken by the smaller
    /// pattern; `None` for syndromes no pattern produces.
    pub fn coset_leaders(&self) -> Vec<Option<usize>> {
        let mut leaders: Vec<Option<usize>> = vec![None; 1 << self.rows()];
        for e in 0..(1usize << self.cols) {
            let s = self.syndrome(e);
            match leaders[s] {
                Some(l) if l.count_ones() <= e.count_ones() => {}
                _ => leaders[s] = Some(e),
            }
        }
        leaders
    }
}

impl fmt::Display for HashingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            for &b in row {
                f.write_str(if b { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Joint distribution of Alice's and Bob's `n`-bit keys.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl KeyDistribution {
    fn zeros(n: usize) -> Self {
        Self {
            n,
            probs: vec![0.0; 1 << (2 * n)],
        }
    }

    fn add(&mut self, alice: usize, bob: usize, p: f64) {
        self.probs[(alice << self.n) | bob] += p;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prob(&self, alice: usize, bob: usize) -> f64 {
        self.probs[(alice << self.n) | bob]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `(alice, bob, p)` for every pair of keys with nonzero probability.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let mask = (1 << self.n) - 1;
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0.0)
            .map(move |(k, &p)| (k >> self.n, k & mask, p))
    }

    /// Probability that the two keys differ.
    pub fn mismatch_probability(&self) -> f64 {
        self.iter()
            .filter(|(a, b, _)| a != b)
            .map(|(_, _, p)| p)
            .sum()
    }

    /// `1/2 sum |p - q|`; distributions over different key lengths are at distance 1.
    pub fn total_variation(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return 1.0;
        }
        0.5 * self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>()
    }
}

/// Keys plus the syndrome statistics of one error-correction run.
#[derive(Debug, Clone, PartialEq)]
pub struct EcOutcome {
    pub keys: KeyDistribution,
    /// Probability of each syndrome value (row 0 is the high bit).
    pub syndromes: Vec<f64>,
}

fn check_pairs(n: usize, h: &HashingMatrix) -> Result<()> {
    if h.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{n} hashing matrix", h.rows()),
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    Ok(())
}

/// Measure every pair in Z, then correct Bob's string with the coset leader of
/// the syndrome `H (z_A xor z_B)`.
pub fn classical_ec_outcome(rho: &TwoQubitState, n: usize, h: &HashingMatrix) -> Result<EcOutcome> {
    if n > MAX_CLASSICAL_PAIRS {
        return Err(Error::TooLarge {
            what: "pair count",
            value: n,
            cap: MAX_CLASSICAL_PAIRS,
        });
    }
    check_pairs(n, h)?;
    let single = rho.diagonal().map(|p| p.max(0.0));
    let leaders = h.coset_leaders();
    let mut keys = KeyDistribution::zeros(n);
    let mut syndromes = vec![0.0; 1 << h.rows()];
    for za in 0..(1usize << n) {
        for zb in 0..(1usize << n) {
            let mut p = 1.0;
            for i in 0..n {
                let shift = n - 1 - i;
                let a = (za >> shift) & 1;
                let b = (zb >> shift) & 1;
                p *= single[2 * a + b];
            }
            if p == 0.0 {
                continue;
            }
            let s = h.syndrome(za ^ zb);
            syndromes[s] += p;
            let corrected = zb ^ leaders[s].unwrap_or(0);
            keys.add(za, corrected, p);
        }
    }
    Ok(EcOutcome { keys, syndromes })
}

pub fn classical_ec_run(
    rho: &TwoQubitState,
    n: usize,
    h: &HashingMatrix,
) -> Result<KeyDistribution> {
    classical_ec_outcome(rho, n, h).map(|o| o.keys)
}

/// Dense density matrix over `q` qubits, qubit 0 most significant.
struct Register {
    q: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl Register {
    fn from_matrix(m: ComplexMatrix, q: usize) -> Self {
        Self {
            q,
            dim: 1 << q,
            data: m.as_slice().to_vec(),
        }
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.q - 1 - qubit)
    }

    /// `rho -> P rho P^T` for an involutive basis permutation `perm`.
    fn permute_involution(&mut self, perm: impl Fn(usize) -> usize) {
        let dim = self.dim;
        let p: Vec<usize> = (0..dim).map(perm).collect();
        for i in 0..dim {
            for j in 0..dim {
                let (pi, pj) = (p[i], p[j]);
                if (pi, pj) > (i, j) {
                    self.data.swap(i * dim + j, pi * dim + pj);
                }
            }
        }
    }

    fn cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (self.bit(control), self.bit(target));
        self.permute_involution(|k| if k & c != 0 { k ^ t } else { k });
    }

    fn x(&mut self, qubit: usize) {
        let b = self.bit(qubit);
        self.permute_involution(|k| k ^ b);
    }

    /// Unnormalized block on the data qubits for fixed values of the trailing
    /// `q - data_qubits` qubits.
    fn project_tail(&self, data_qubits: usize, tail: usize) -> Register {
        let tail_bits = self.q - data_qubits;
        let d = 1 << data_qubits;
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            let row = (i << tail_bits) | tail;
            for j in 0..d {
                let col = (j << tail_bits) | tail;
                data.push(self.data[row * self.dim + col]);
            }
        }
        Register {
            q: data_qubits,
            dim: d,
            data,
        }
    }

    fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim).map(move |k| self.data[k * self.dim + k].re)
    }
}

/// Coherent version: append `r` ancilla `|Phi+>` pairs, hash the data into them
/// with CNOTs on both sides, measure the ancillas, flip Bob's data qubits by the
/// coset leader of `z_A^a xor z_B^a`, then measure the data in Z.
pub fn virtual_qec_outcome(rho: &TwoQubitState, n: usize, h: &HashingMatrix) -> Result<EcOutcome> {
    let r = h.rows();
    let total = 2 * n + 2 * r;
    if total > MAX_SIMULATED_QUBITS {
        return Err(Error::TooLarge {
            what: "simulated qubits",
            value: total,
            cap: MAX_SIMULATED_QUBITS,
        });
    }
    check_pairs(n, h)?;

    let mut state = ComplexMatrix::identity(1);
    for _ in 0..n {
        state = state.kron(rho.matrix());
    }
    let phi = TwoQubitState::phi_plus();
    for _ in 0..r {
        state = state.kron(phi.matrix());
    }
    let mut reg = Register::from_matrix(state, total);

    for k in 0..r {
        for i in 0..n {
            if h.get(k, i) {
                reg.cnot(2 * i, 2 * n + 2 * k);
                reg.cnot(2 * i + 1, 2 * n + 2 * k + 1);
            }
        }
    }

    let leaders = h.coset_leaders();
    let mut keys = KeyDistribution::zeros(n);
    let mut syndromes = vec![0.0; 1 << r];
    for outcome in 0..(1usize << (2 * r)) {
        let mut block = reg.project_tail(2 * n, outcome);
        let weight: f64 = block.diagonal().sum();
        if weight <= 0.0 {
            continue;
        }
        let mut s = 0;
        for k in 0..r {
            let shift = 2 * (r - 1 - k);
            let a = (outcome >> (shift + 1)) & 1;
            let b = (outcome >> shift) & 1;
            s = (s << 1) | (a ^ b);
        }
        syndromes[s] += weight;
        if let Some(e) = leaders[s] {
            for i in 0..n {
                if (e >> (n - 1 - i)) & 1 == 1 {
                    block.x(2 * i + 1);
                }
            }
        }
        for (idx, p) in block.diagonal().enumerate() {
            if p <= 0.0 {
                continue;
            }
            let (mut za, mut zb) = (0, 0);
            for i in 0..n {
                let shift = 2 * (n - 1 - i);
                za = (za << 1) | ((idx >> (shift + 1)) & 1);
                zb = (zb << 1) | ((idx >> shift) & 1);
            }
            keys.add(za, zb, p);
        }
    }
    Ok(EcOutcome { keys, syndromes })
}

pub fn virtual_qec_run(
    rho: &TwoQubitState,
    n: usize,
    h: &HashingMatrix,
) -> Result<KeyDistribution> {
    virtual_qec_outcome(rho, n, h).map(|o| o.keys)
}

/// `H(Z_A | Z_B)` of the Z⊗Z outcome distribution.
pub fn ec_cost(rho: &TwoQubitState) -> f64 {
    let d = rho.diagonal();
    let bob = [d[0] + d[2], d[1] + d[3]];
    (entropy_of(&d) - entropy_of(&bob)).max(0.0)
}
