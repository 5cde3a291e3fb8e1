use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::eigen::hermitian_eigensystem;
use super::matrix::{ComplexMatrix, I, ONE, ZERO};
use crate::error::{Error, Result};

pub const TRACE_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOL, 0)` are rounding noise and get clipped to zero.
pub const PSD_TOL: f64 = 1e-9;
pub const UNITARY_TOL: f64 = 1e-10;

/// Measurement basis of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum BasisLabel {
    Z,
    X,
    Y,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 3] = [BasisLabel::Z, BasisLabel::X, BasisLabel::Y];

    /// The two basis kets in the computational representation:
    /// Z: |0>, |1>; X: |+>, |->; Y: |+i>, |-i>.
    pub fn kets(self) -> [[Complex64; 2]; 2] {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            BasisLabel::Z => [[ONE, ZERO], [ZERO, ONE]],
            BasisLabel::X => [[h, h], [h, -h]],
            BasisLabel::Y => [[h, I * h], [h, -I * h]],
        }
    }

    /// Unitary whose columns are the basis kets.
    pub fn unitary(self) -> ComplexMatrix {
        let k = self.kets();
        let mut u = ComplexMatrix::zeros(2, 2);
        for (j, ket) in k.iter().enumerate() {
            u[(0, j)] = ket[0];
            u[(1, j)] = ket[1];
        }
        u
    }

    /// Two-qubit product ket `|k_a k_b>` with `index = 2 a + b`.
    pub fn product_ket(self, index: usize) -> [Complex64; 4] {
        let k = self.kets();
        let a = k[index >> 1];
        let b = k[index & 1];
        [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    }
}

impl std::fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BasisLabel::Z => "Z",
            BasisLabel::X => "X",
            BasisLabel::Y => "Y",
        };
        f.write_str(s)
    }
}

/// Even/odd parity projectors of a two-qubit measurement in one basis.
///
/// For Z and X the even projector pairs aligned outcomes (`|00>,|11>` and
/// `|++>,|-->`). For Y the even projector pairs *anti-aligned* outcomes,
/// `|+i,-i>` and `|-i,+i>`, so that `|Phi+>` has zero error in every basis.
#[derive(Debug, Clone)]
pub struct ParityProjectors {
    pub plus: ComplexMatrix,
    pub minus: ComplexMatrix,
    pub basis: BasisLabel,
}

pub fn parity_projectors(basis: BasisLabel) -> ParityProjectors {
    let (even, odd) = match basis {
        BasisLabel::Z | BasisLabel::X => ([0usize, 3], [1usize, 2]),
        BasisLabel::Y => ([1, 2], [0, 3]),
    };
    let proj = |idx: [usize; 2]| {
        let a = ComplexMatrix::outer(&basis.product_ket(idx[0]));
        let b = ComplexMatrix::outer(&basis.product_ket(idx[1]));
        &a + &b
    };
    ParityProjectors {
        plus: proj(even),
        minus: proj(odd),
        basis,
    }
}

/// Validated two-qubit density matrix in the ordered basis `|00>,|01>,|10>,|11>`
/// (Alice is the first, most significant, qubit).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    matrix: ComplexMatrix,
}

impl TwoQubitState {
    /// Validates a 4x4 matrix as a density operator.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: "4x4".into(),
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        validate_density(&matrix)?;
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Wraps a matrix produced by a validity-preserving map; only re-Hermitizes.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.rows() == 4 && matrix.cols() == 4);
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Z⊗Z outcome probabilities `m00, m11, m22, m33`.
    pub fn diagonal(&self) -> [f64; 4] {
        let d = self.matrix.real_diagonal();
        [d[0], d[1], d[2], d[3]]
    }

    /// Clipped, renormalized eigenvalues in descending order.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        density_spectrum(&self.matrix)
    }

    pub fn maximally_mixed() -> Self {
        Self::from_trusted(ComplexMatrix::identity(4).scale_real(0.25))
    }

    /// `|Phi+><Phi+|`.
    pub fn phi_plus() -> Self {
        Self::from_trusted(ComplexMatrix::outer(&super::bell::bell_ket(0)))
    }

    /// Convex combination `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                range: "[0, 1]",
            });
        }
        let m = &self.matrix.scale_real(lambda) + &other.matrix.scale_real(1.0 - lambda);
        Ok(Self::from_trusted(m))
    }
}

impl AsRef<ComplexMatrix> for TwoQubitState {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl AsRef<ComplexMatrix> for ComplexMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        self
    }
}

/// Checks Hermiticity, unit trace and positivity of a square matrix of any size.
pub fn validate_density(m: &ComplexMatrix) -> Result<()> {
    let dev = m.max_hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { max_deviation: dev });
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::TraceNotOne { trace: tr.re });
    }
    density_spectrum(m).map(|_| ())
}

/// Eigenvalues of a density matrix with `[-1e-9, 0)` clipped to zero and the
/// trace renormalized. Anything below `-1e-9` is rejected.
pub fn density_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let es = hermitian_eigensystem(m)?;
    clip_spectrum(es.values)
}

pub fn clip_spectrum(mut values: Vec<f64>) -> Result<Vec<f64>> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    for v in values.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let total: f64 = values.iter().sum();
    if total > 0.0 {
        for v in values.iter_mut() {
            *v /= total;
        }
    }
    Ok(values)
}

/// Validating constructor; same as [`TwoQubitState::new`].
pub fn make_state(matrix: ComplexMatrix) -> Result<TwoQubitState> {
    TwoQubitState::new(matrix)
}

/// Z-parity partial dephasing: `Pi+ rho Pi+ + Pi- rho Pi-`.
///
/// Keeps the diagonal and the `|00><11|`, `|01><10|` coherences.
pub fn partial_dephase(rho: &TwoQubitState) -> TwoQubitState {
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(4, 4);
    for i in 0..4 {
        out[(i, i)] = m[(i, i)];
    }
    for (i, j) in [(0, 3), (3, 0), (1, 2), (2, 1)] {
        out[(i, j)] = m[(i, j)];
    }
    TwoQubitState::from_trusted(out)
}

/// Outcome distribution of a product measurement in `basis` on both qubits,
/// ordered `00, 01, 10, 11` in that basis's labels.
pub fn full_dephase(rho: &TwoQubitState, basis: BasisLabel) -> [f64; 4] {
    let mut p = [0.0; 4];
    for (k, pk) in p.iter_mut().enumerate() {
        let v = basis.product_ket(k);
        *pk = rho.matrix().sandwich(&v, &v).re;
    }
    p
}

/// Bob's reduced state `Tr_A rho`.
pub fn partial_trace_a(rho: &TwoQubitState) -> ComplexMatrix {
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(2, 2);
    for b in 0..2 {
        for bp in 0..2 {
            out[(b, bp)] = m[(b, bp)] + m[(2 + b, 2 + bp)];
        }
    }
    out
}

/// Alice's reduced state `Tr_B rho`.
pub fn partial_trace_b(rho: &TwoQubitState) -> ComplexMatrix {
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(2, 2);
    for a in 0..2 {
        for ap in 0..2 {
            out[(a, ap)] = m[(2 * a, 2 * ap)] + m[(2 * a + 1, 2 * ap + 1)];
        }
    }
    out
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2x2".into(),
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let dev = u.max_unitary_deviation();
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary { max_deviation: dev });
    }
    Ok(())
}

/// `(uA ⊗ uB) rho (uA ⊗ uB)^dagger`.
pub fn local_rotate(
    rho: &TwoQubitState,
    u_a: &ComplexMatrix,
    u_b: &ComplexMatrix,
) -> Result<TwoQubitState> {
    check_unitary(u_a)?;
    check_unitary(u_b)?;
    Ok(local_rotate_unchecked(rho, u_a, u_b))
}

pub(crate) fn local_rotate_unchecked(
    rho: &TwoQubitState,
    u_a: &ComplexMatrix,
    u_b: &ComplexMatrix,
) -> TwoQubitState {
    let u = u_a.kron(u_b);
    TwoQubitState::from_trusted(u.conjugate(rho.matrix()))
}

/// Applies `1 ⊗ op` on Bob's side: `(1 ⊗ op) rho (1 ⊗ op)^dagger`, unnormalized.
pub fn conjugate_bob(rho: &TwoQubitState, op: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(2).kron(op).conjugate(rho.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::bell::bell_ket;
    use crate::random::{random_state, random_unitary, seeded_rng};

    #[test]
    fn maximally_mixed_and_bell_states_validate() {
        assert!(make_state(ComplexMatrix::identity(4).scale_real(0.25)).is_ok());
        assert!(make_state(ComplexMatrix::outer(&bell_ket(0))).is_ok());
    }

    #[test]
    fn negative_eigenvalue_is_rejected() {
        let m = ComplexMatrix::from_diag(&[0.6, 0.6, -0.1, -0.1]);
        assert!(matches!(make_state(m), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn trace_and_hermiticity_are_checked() {
        let m = ComplexMatrix::from_diag(&[0.5, 0.5, 0.5, 0.5]);
        assert!(matches!(make_state(m), Err(Error::TraceNotOne { .. })));
        let mut m = ComplexMatrix::identity(4).scale_real(0.25);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(make_state(m), Err(Error::NotHermitian { .. })));
        let m = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(
            make_state(m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clipped() {
        let m = ComplexMatrix::from_diag(&[0.5 + 5e-10, 0.5, -5e-10, 0.0]);
        let s = make_state(m).unwrap().spectrum().unwrap();
        assert!(s.iter().all(|&x| x >= 0.0));
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn z_projector_is_diag_1001() {
        let p = parity_projectors(BasisLabel::Z);
        assert_eq!(p.plus.real_diagonal(), vec![1.0, 0.0, 0.0, 1.0]);
        assert!((&p.plus - &ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 1.0])).max_abs() == 0.0);
    }

    #[test]
    fn projectors_are_complete_idempotent_hermitian() {
        for basis in BasisLabel::ALL {
            let p = parity_projectors(basis);
            let sum = &p.plus + &p.minus;
            assert!((&sum - &ComplexMatrix::identity(4)).max_abs() < 1e-15);
            for proj in [&p.plus, &p.minus] {
                assert!((&(proj * proj) - proj).max_abs() < 1e-15);
                assert!(proj.max_hermitian_deviation() < 1e-16);
            }
        }
    }

    #[test]
    fn phi_plus_has_even_parity_in_every_basis() {
        let phi = TwoQubitState::phi_plus();
        for basis in BasisLabel::ALL {
            let p = parity_projectors(basis);
            let tr = (&p.plus * phi.matrix()).trace().re;
            assert!((tr - 1.0).abs() < 1e-15, "{basis}");
        }
    }

    #[test]
    fn parity_probabilities_sum_to_one() {
        let mut rng = seeded_rng(11);
        for _ in 0..200 {
            let rho = random_state(&mut rng);
            for basis in BasisLabel::ALL {
                let p = parity_projectors(basis);
                let s = (&p.plus * rho.matrix()).trace().re + (&p.minus * rho.matrix()).trace().re;
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dephasing_keeps_bell_diagonal_states() {
        let rho = TwoQubitState::phi_plus()
            .mix(
                &TwoQubitState::from_trusted(ComplexMatrix::outer(&bell_ket(3))),
                0.7,
            )
            .unwrap();
        assert!((&partial_dephase(&rho).into_matrix() - rho.matrix()).max_abs() < 1e-16);
    }

    #[test]
    fn dephasing_plus_plus_product() {
        let h = FRAC_1_SQRT_2;
        let plus = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
        let ket: Vec<Complex64> = vec![
            plus[0] * plus[0],
            plus[0] * plus[1],
            plus[1] * plus[0],
            plus[1] * plus[1],
        ];
        let rho = make_state(ComplexMatrix::outer(&ket)).unwrap();
        let d = partial_dephase(&rho);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j || i + j == 3 { 0.25 } else { 0.0 };
                assert!((d.element(i, j).re - expected).abs() < 1e-15, "({i},{j})");
                assert!(d.element(i, j).im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dephasing_is_idempotent_and_valid() {
        let mut rng = seeded_rng(3);
        for _ in 0..200 {
            let rho = random_state(&mut rng);
            let once = partial_dephase(&rho);
            let twice = partial_dephase(&once);
            assert!((&once.clone().into_matrix() - twice.matrix()).max_abs() < 1e-16);
            assert!(make_state(once.into_matrix()).is_ok());
        }
    }

    #[test]
    fn full_dephase_examples() {
        let mixed = TwoQubitState::maximally_mixed();
        assert_eq!(full_dephase(&mixed, BasisLabel::Z), [0.25; 4]);
        let phi = TwoQubitState::phi_plus();
        for basis in [BasisLabel::Z, BasisLabel::X] {
            let p = full_dephase(&phi, basis);
            let expected = [0.5, 0.0, 0.0, 0.5];
            for k in 0..4 {
                assert!((p[k] - expected[k]).abs() < 1e-15, "{basis}: {p:?}");
            }
        }
        // Y outcomes of |Phi+> are anti-aligned
        let p = full_dephase(&phi, BasisLabel::Y);
        assert!((p[1] - 0.5).abs() < 1e-15 && (p[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn full_dephase_sums_to_one() {
        let mut rng = seeded_rng(5);
        for _ in 0..100 {
            let rho = random_state(&mut rng);
            for basis in BasisLabel::ALL {
                let s: f64 = full_dephase(&rho, basis).iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_examples() {
        let m = partial_trace_a(&TwoQubitState::phi_plus());
        assert!((&m - &ComplexMatrix::identity(2).scale_real(0.5)).max_abs() < 1e-15);

        let mut rng = seeded_rng(9);
        let ra = crate::random::random_density(&mut rng, 2);
        let rb = crate::random::random_density(&mut rng, 2);
        let prod = make_state(ra.kron(&rb).hermitian_part()).unwrap();
        assert!((&partial_trace_a(&prod) - &rb).max_abs() < 1e-14);
        assert!((&partial_trace_b(&prod) - &ra).max_abs() < 1e-14);

        for _ in 0..100 {
            let rho = random_state(&mut rng);
            assert!((partial_trace_a(&rho).trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hadamards_map_z_diagonal_to_x_diagonal() {
        let rho = make_state(ComplexMatrix::from_diag(&[0.4, 0.3, 0.2, 0.1])).unwrap();
        let h = BasisLabel::X.unitary();
        let rotated = local_rotate(&rho, &h, &h).unwrap();
        let px = full_dephase(&rotated, BasisLabel::X);
        for (a, b) in px.iter().zip([0.4, 0.3, 0.2, 0.1]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn local_rotation_preserves_spectrum() {
        let mut rng = seeded_rng(13);
        let id = ComplexMatrix::identity(2);
        for _ in 0..200 {
            let rho = random_state(&mut rng);
            assert_eq!(local_rotate(&rho, &id, &id).unwrap(), rho);
            let ua = random_unitary(&mut rng, 2);
            let ub = random_unitary(&mut rng, 2);
            let rotated = local_rotate(&rho, &ua, &ub).unwrap();
            let before = rho.spectrum().unwrap();
            let after = rotated.spectrum().unwrap();
            for (x, y) in before.iter().zip(&after) {
                assert!((x - y).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn local_rotation_rejects_non_unitary() {
        let bad = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(matches!(
            local_rotate(&TwoQubitState::phi_plus(), &bad, &id),
            Err(Error::NotUnitary { .. })
        ));
    }
}
