use num_complex::Complex64;
use proptest::prelude::*;

use coherent_keyrate::coherence::{binary_entropy, qubit_coherence, rel_entropy_coherence};
use coherent_keyrate::finegrained::{
    bb84_opt_keyrate, sixstate_opt_keyrate, solve_problem1, symmetrize, FineGrainedStats,
};
use coherent_keyrate::keyrate::{
    bb84_keyrate, bit_error_rate, error_rates, keyrate_symmetric, sixstate_keyrate,
};
use coherent_keyrate::mismatch::{discard_keyrate_k1, koashi_keyrate_k2, mismatch_keyrate};
use coherent_keyrate::qecsim::{classical_ec_run, ec_cost, virtual_qec_run, HashingMatrix};
use coherent_keyrate::qstate::{partial_dephase, BasisLabel, ComplexMatrix, TwoQubitState};
use coherent_keyrate::random::{random_density, random_simplex, random_state, seeded_rng};

fn state(seed: u64) -> TwoQubitState {
    random_state(&mut seeded_rng(seed))
}

fn h(p: f64) -> f64 {
    binary_entropy(p).unwrap()
}

/// Diagonal entries and phase-error rate with a non-empty feasible interval.
fn feasible_stats() -> impl Strategy<Value = FineGrainedStats> {
    (any::<u64>(), 0.0..1.0f64).prop_map(|(seed, t)| {
        let s = random_simplex(&mut seeded_rng(seed), 4);
        let m = [s[0], s[1], s[2], s[3]];
        let reach = (m[0] * m[3]).sqrt() + (m[1] * m[2]).sqrt();
        let budget = reach * (2.0 * t - 1.0);
        FineGrainedStats::new(m, 0.5 - budget).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dephasing_yields_a_valid_state(seed in any::<u64>()) {
        let phi = partial_dephase(&state(seed));
        prop_assert!(TwoQubitState::new(phi.matrix().clone()).is_ok());
        let d = phi.matrix();
        for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            prop_assert_eq!(d[(i, j)], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn removing_the_imaginary_part_never_adds_coherence(seed in any::<u64>()) {
        let rho = random_density(&mut seeded_rng(seed), 2);
        let phase = rho[(0, 1)].arg();
        let mut u = ComplexMatrix::identity(2);
        u[(1, 1)] = Complex64::from_polar(1.0, 2.0 * phase);
        let rotated = &(&u * &rho) * &u.dagger();
        let o = (&rotated + &rho).scale_real(0.5);
        prop_assert!(o[(0, 1)].im.abs() < 1e-12);
        prop_assert!((o[(0, 1)].re - rho[(0, 1)].norm() * phase.cos()).abs() < 1e-12);
        let before = qubit_coherence(&rho, BasisLabel::Z).unwrap();
        let after = qubit_coherence(&o, BasisLabel::Z).unwrap();
        prop_assert!(before >= after - 1e-12);
    }

    #[test]
    fn symmetrizing_both_blocks_never_adds_coherence(seed in any::<u64>()) {
        let phi = partial_dephase(&state(seed));
        let sym = symmetrize(&symmetrize(&phi, 0, 3).unwrap(), 1, 2).unwrap();
        let before = rel_entropy_coherence(&phi, BasisLabel::Z).unwrap();
        let after = rel_entropy_coherence(&sym, BasisLabel::Z).unwrap();
        prop_assert!(before >= after - 1e-9);
    }

    #[test]
    fn fine_grained_bb84_never_loses(stats in feasible_stats()) {
        let opt = bb84_opt_keyrate(&stats).unwrap().rate;
        let std = bb84_keyrate(stats.e_b(), stats.e_p().min(0.5)).map(|r| r.rate);
        if let Ok(std) = std {
            prop_assert!(opt >= std - 1e-9, "opt {} < standard {}", opt, std);
        }
    }

    #[test]
    fn fine_grained_bb84_is_tight_on_balanced_stats(eb in 0.0..0.5f64, ep in 0.0..0.5f64) {
        let stats = FineGrainedStats::balanced(eb, ep).unwrap();
        let opt = bb84_opt_keyrate(&stats).unwrap().rate;
        let std = bb84_keyrate(eb, ep).unwrap().rate;
        prop_assert!((opt - std).abs() <= 1e-9);
    }

    #[test]
    fn fine_grained_six_state_never_loses(seed in any::<u64>(), t in 0.0..0.6f64) {
        let rho = TwoQubitState::phi_plus().mix(&state(seed), 1.0 - t).unwrap();
        let (ex, ey, ez) = error_rates(&rho);
        prop_assume!(ex <= 0.5 && ey <= 0.5 && ez <= 0.5);
        let std = sixstate_keyrate(ex, ey, ez).unwrap().rate;
        let stats = FineGrainedStats::with_six_state(rho.diagonal(), ex, ey).unwrap();
        match sixstate_opt_keyrate(&stats) {
            Ok(opt) => prop_assert!(opt.rate >= std - 1e-9, "opt {} < standard {}", opt.rate, std),
            Err(e) => prop_assert!(e.is_infeasible()),
        }
    }

    #[test]
    fn fine_grained_six_state_is_tight_on_balanced_stats(
        ex in 0.0..0.3f64, ey in 0.0..0.3f64, ez in 0.0..0.3f64,
    ) {
        prop_assume!(sixstate_keyrate(ex, ey, ez).is_ok());
        let m = [(1.0 - ez) / 2.0, ez / 2.0, ez / 2.0, (1.0 - ez) / 2.0];
        let stats = FineGrainedStats::with_six_state(m, ex, ey).unwrap();
        let opt = sixstate_opt_keyrate(&stats).unwrap().rate;
        let std = sixstate_keyrate(ex, ey, ez).unwrap().rate;
        prop_assert!((opt - std).abs() <= 1e-9);
    }

    #[test]
    fn optimal_off_diagonals_split_by_error_weight(
        alpha in 0.05..0.95f64, eb in 0.01..0.49f64, t in -1.0..1.0f64, mirrored in any::<bool>(),
    ) {
        let m = if mirrored {
            [alpha * (1.0 - eb), (1.0 - alpha) * eb, alpha * eb, (1.0 - alpha) * (1.0 - eb)]
        } else {
            [alpha * (1.0 - eb), alpha * eb, (1.0 - alpha) * eb, (1.0 - alpha) * (1.0 - eb)]
        };
        let reach = (m[0] * m[3]).sqrt() + (m[1] * m[2]).sqrt();
        let s = 0.999 * reach * t;
        let stats = FineGrainedStats::new(m, 0.5 - s).unwrap();
        let sol = solve_problem1(&stats).unwrap();
        prop_assert!((sol.a_bar.abs() / (1.0 - eb) - sol.b_bar.abs() / eb).abs() <= 1e-8);
        if s.abs() > 1e-9 {
            prop_assert!(sol.a_bar * s >= 0.0 && sol.b_bar * s >= 0.0);
        }
    }

    #[test]
    fn key_rate_is_convex_in_the_state(a in any::<u64>(), b in any::<u64>(), lambda in 0.0..=1.0f64) {
        let (r1, r2) = (state(a), state(b));
        let mixed = r1.mix(&r2, lambda).unwrap();
        let k = |r: &TwoQubitState| keyrate_symmetric(r).unwrap().rate;
        prop_assert!(k(&mixed) <= lambda * k(&r1) + (1.0 - lambda) * k(&r2) + 1e-9);
    }

    #[test]
    fn reconciliation_cost_is_below_shannon_limit(seed in any::<u64>()) {
        let rho = state(seed);
        prop_assert!(ec_cost(&rho) <= h(bit_error_rate(&rho)) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residual_mismatch_is_the_uncorrectable_weight(seed in any::<u64>()) {
        let rho = state(seed);
        let hm = HashingMatrix::default_2x3();
        let e = bit_error_rate(&rho);
        let leaders = hm.coset_leaders();
        let uncorrectable: f64 = (0..8usize)
            .filter(|&pattern| leaders[hm.syndrome(pattern)] != Some(pattern))
            .map(|pattern| {
                let w = pattern.count_ones() as i32;
                e.powi(w) * (1.0 - e).powi(3 - w)
            })
            .sum();
        let classical = classical_ec_run(&rho, 3, &hm).unwrap();
        let virtual_ = virtual_qec_run(&rho, 3, &hm).unwrap();
        prop_assert!((classical.mismatch_probability() - uncorrectable).abs() <= 1e-12);
        prop_assert!((virtual_.mismatch_probability() - uncorrectable).abs() <= 1e-10);
    }
}

#[test]
fn noiseless_mismatch_rate_dominates_both_alternatives() {
    for k in 1..100 {
        let x = k as f64 / 100.0;
        assert!(h(x) >= 2.0 * x.min(1.0 - x) - 1e-15, "x = {x}");
        if x <= 0.5 {
            let kk = mismatch_keyrate(x, 0.0, 0.0).unwrap().rate;
            let k1 = discard_keyrate_k1(x, 0.0, 0.0).unwrap();
            let k2 = koashi_keyrate_k2(x, 0.0, 0.0).unwrap();
            assert!((k1 - k2).abs() < 1e-12);
            assert!(kk >= k1 - 1e-12, "x = {x}: K = {kk}, K1 = {k1}");
        }
    }
}

#[test]
fn strong_mismatch_rate_tends_to_minus_bit_entropy() {
    let mut prev = f64::INFINITY;
    for x in [1e-2, 1e-3, 1e-4, 1e-6, 1e-9] {
        let k = mismatch_keyrate(x, 0.05, 0.05).unwrap().rate;
        assert!(k < prev);
        prev = k;
    }
    assert!((prev + h(0.05)).abs() < 1e-3, "K(1e-9) = {prev}");
}
