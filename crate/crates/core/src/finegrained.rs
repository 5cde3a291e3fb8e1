//! Improved rates from the four Z⊗Z outcome frequencies.
//!
//! The minimization runs over real X-pattern states `rho(a, b)` whose diagonal is
//! the measured `m`, with anti-diagonal `a`, inner coherence `b` and
//! `a + b = 1/2 - e_p`.

use serde::{Deserialize, Serialize};

use crate::coherence::{h2, x_state_coherence};
use crate::error::{Error, Result};
use crate::keyrate::{KeyRateReport, Protocol};
use crate::optimize::golden_section_min;
use crate::qstate::{ComplexMatrix, TwoQubitState};

const DIST_TOL: f64 = 1e-9;
/// Slack on the box constraints `|a| <= sqrt(m00 m33)`, `|b| <= sqrt(m11 m22)`.
pub const FEASIBILITY_SLACK: f64 = 1e-12;
/// Relative tolerance for the block-ratio test that enables the closed form.
pub const RATIO_TOL: f64 = 1e-9;
pub const GRID_POINTS: usize = 1001;
pub const GOLDEN_TOL: f64 = 1e-12;

/// Measured `Z⊗Z` frequencies plus phase error rate, and optionally the X and Y
/// error rates used by the six-state variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FineGrainedStats {
    m: [f64; 4],
    e_p: f64,
    e_x: Option<f64>,
    e_y: Option<f64>,
}

impl FineGrainedStats {
    pub fn new(m: [f64; 4], e_p: f64) -> Result<Self> {
        let mut m = m;
        for v in m.iter_mut() {
            if !v.is_finite() || *v < -FEASIBILITY_SLACK {
                return Err(Error::InvalidDistribution {
                    reason: format!("diagonal entry {v} is negative or not finite"),
                });
            }
            *v = v.max(0.0);
        }
        let s: f64 = m.iter().sum();
        if (s - 1.0).abs() > DIST_TOL {
            return Err(Error::InvalidDistribution {
                reason: format!("diagonal sums to {s}"),
            });
        }
        if !(0.0..=1.0).contains(&e_p) {
            return Err(Error::OutOfRange {
                name: "e_p",
                value: e_p,
                range: "[0, 1]",
            });
        }
        Ok(Self {
            m,
            e_p,
            e_x: None,
            e_y: None,
        })
    }

    /// Six-state statistics; the phase error used by the coherence minimization is `e_x`.
    pub fn with_six_state(m: [f64; 4], e_x: f64, e_y: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&e_y) {
            return Err(Error::OutOfRange {
                name: "e_y",
                value: e_y,
                range: "[0, 1]",
            });
        }
        let mut s = Self::new(m, e_x)?;
        s.e_x = Some(e_x);
        s.e_y = Some(e_y);
        Ok(s)
    }

    /// Balanced diagonal `((1-e_b)/2, e_b/2, e_b/2, (1-e_b)/2)`.
    pub fn balanced(e_b: f64, e_p: f64) -> Result<Self> {
        Self::new(
            [(1.0 - e_b) / 2.0, e_b / 2.0, e_b / 2.0, (1.0 - e_b) / 2.0],
            e_p,
        )
    }

    /// Unbalanced diagonal with `m00/m33 = m22/m11 = alpha/(1-alpha)` and
    /// `e_x = e_y = e_z = e`.
    pub fn unbalanced(alpha: f64, e: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                range: "[0, 1]",
            });
        }
        let m = [
            alpha * (1.0 - e),
            (1.0 - alpha) * e,
            alpha * e,
            (1.0 - alpha) * (1.0 - e),
        ];
        Self::with_six_state(m, e, e)
    }

    pub fn m(&self) -> [f64; 4] {
        self.m
    }

    pub fn e_p(&self) -> f64 {
        self.e_p
    }

    pub fn e_b(&self) -> f64 {
        (self.m[1] + self.m[2]).clamp(0.0, 1.0)
    }

    pub fn e_x(&self) -> Option<f64> {
        self.e_x
    }

    pub fn e_y(&self) -> Option<f64> {
        self.e_y
    }

    /// Off-diagonal budget `1/2 - e_p`.
    pub fn budget(&self) -> f64 {
        0.5 - self.e_p
    }

    /// Box half-widths `(sqrt(m00 m33), sqrt(m11 m22))`.
    pub fn box_bounds(&self) -> (f64, f64) {
        (
            (self.m[0] * self.m[3]).sqrt(),
            (self.m[1] * self.m[2]).sqrt(),
        )
    }

    /// Ratio of the even block's first entry to the block weight when the
    /// two blocks have proportional (or mirrored) diagonals.
    pub fn lemma2_alpha(&self) -> Option<f64> {
        let [m0, m1, m2, m3] = self.m;
        let scale = [m0 * m2, m3 * m1, m0 * m1, m3 * m2]
            .into_iter()
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let mirrored = (m0 * m2 - m3 * m1).abs() <= RATIO_TOL * scale;
        let parallel = (m0 * m1 - m3 * m2).abs() <= RATIO_TOL * scale;
        if !(mirrored || parallel) {
            return None;
        }
        if m0 + m3 > 0.0 {
            Some(m0 / (m0 + m3))
        } else if m1 + m2 > 0.0 {
            Some(if mirrored {
                m2 / (m1 + m2)
            } else {
                m1 / (m1 + m2)
            })
        } else {
            None
        }
    }

    /// Coherence of `rho(a, b)` from its block eigenvalues.
    pub fn objective(&self, a: f64, b: f64) -> f64 {
        x_state_coherence(self.m, a.abs(), b.abs())
    }

    /// Feasible interval of `a` after substituting `b = budget - a`.
    pub fn feasible_interval(&self) -> Result<(f64, f64)> {
        let (ba, bb) = self.box_bounds();
        let s = self.budget();
        let lo = (-ba).max(s - bb);
        let hi = ba.min(s + bb);
        if lo > hi + FEASIBILITY_SLACK {
            return Err(Error::Infeasible {
                reason: format!(
                    "|1/2 - e_p| = {:e} exceeds sqrt(m00 m33) + sqrt(m11 m22) = {:e}",
                    s.abs(),
                    ba + bb
                ),
            });
        }
        if lo > hi {
            let mid = 0.5 * (lo + hi);
            return Ok((mid, mid));
        }
        Ok((lo, hi))
    }
}

/// How a [`Problem1Solution`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    ClosedForm,
    Numeric,
}

/// Minimizer of the coherence over the feasible `(a, b)` segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Problem1Solution {
    pub a_bar: f64,
    pub b_bar: f64,
    pub c_min: f64,
    pub method: SolveMethod,
}

/// The X-pattern state with diagonal `m`, anti-diagonal `a` and inner coherence `b`.
pub fn rho_of_ab(stats: &FineGrainedStats, a: f64, b: f64) -> Result<TwoQubitState> {
    let m = stats.m();
    let (ba, bb) = stats.box_bounds();
    if a.abs() > ba + FEASIBILITY_SLACK || b.abs() > bb + FEASIBILITY_SLACK {
        let even = crate::coherence::block_eigenvalues(m[0], m[3], a.abs())[1];
        let odd = crate::coherence::block_eigenvalues(m[1], m[2], b.abs())[1];
        return Err(Error::NotPositive {
            min_eigenvalue: even.min(odd),
        });
    }
    Ok(TwoQubitState::from_trusted(x_matrix(m, a, b)))
}

pub(crate) fn x_matrix(m: [f64; 4], a: f64, b: f64) -> ComplexMatrix {
    let mut out = ComplexMatrix::from_diag(&m);
    out[(0, 3)] = a.into();
    out[(3, 0)] = a.into();
    out[(1, 2)] = b.into();
    out[(2, 1)] = b.into();
    out
}

/// `c_min = H(alpha) - H(1/2 + sqrt((alpha - 1/2)^2 + (1/2 - e_p)^2))`,
/// attained at `a = (1 - e_b)(1/2 - e_p)`, `b = e_b (1/2 - e_p)`.
pub fn lemma2_closed_form(alpha: f64, e_b: f64, e_p: f64) -> Result<Problem1Solution> {
    for (name, v) in [("alpha", alpha), ("e_b", e_b), ("e_p", e_p)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                name,
                value: v,
                range: "[0, 1]",
            });
        }
    }
    let s = 0.5 - e_p;
    let lam = 0.5 + ((alpha - 0.5).powi(2) + s * s).sqrt();
    if lam > 1.0 + FEASIBILITY_SLACK {
        return Err(Error::Infeasible {
            reason: format!(
                "(1/2 - e_p)^2 = {:e} exceeds alpha (1 - alpha) = {:e}",
                s * s,
                alpha * (1.0 - alpha)
            ),
        });
    }
    Ok(Problem1Solution {
        a_bar: (1.0 - e_b) * s,
        b_bar: e_b * s,
        c_min: (h2(alpha) - h2(lam.min(1.0))).max(0.0),
        method: SolveMethod::ClosedForm,
    })
}

/// Minimizes the coherence over the one-dimensional feasible segment.
///
/// Uses the closed form when the block ratio condition holds and its optimum lies
/// inside the box; otherwise grid search followed by golden-section refinement.
pub fn solve_problem1(stats: &FineGrainedStats) -> Result<Problem1Solution> {
    let (lo, hi) = stats.feasible_interval()?;
    if let Some(alpha) = stats.lemma2_alpha() {
        let sol = lemma2_closed_form(alpha, stats.e_b(), stats.e_p());
        let (ba, bb) = stats.box_bounds();
        if let Ok(sol) = sol {
            if sol.a_bar.abs() <= ba + FEASIBILITY_SLACK
                && sol.b_bar.abs() <= bb + FEASIBILITY_SLACK
            {
                return Ok(sol);
            }
        }
    }
    Ok(solve_problem1_numeric(stats, lo, hi))
}

/// Grid plus golden-section minimization on `[lo, hi]`.
pub fn solve_problem1_numeric(stats: &FineGrainedStats, lo: f64, hi: f64) -> Problem1Solution {
    let s = stats.budget();
    if s.abs() <= FEASIBILITY_SLACK {
        // no off-diagonal budget: the diagonal state is the global minimum
        return Problem1Solution {
            a_bar: 0.0,
            b_bar: s,
            c_min: stats.objective(0.0, s),
            method: SolveMethod::Numeric,
        };
    }
    let f = |a: f64| stats.objective(a, s - a);
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let (mut best_k, mut best_v) = (0, f64::INFINITY);
    for k in 0..GRID_POINTS {
        let v = f(lo + step * k as f64);
        if v < best_v {
            best_k = k;
            best_v = v;
        }
    }
    let left = lo + step * best_k.saturating_sub(1) as f64;
    let right = (lo + step * (best_k + 1) as f64).min(hi);
    let (mut a, mut v) = golden_section_min(f, left, right, GOLDEN_TOL);
    if best_v < v {
        a = lo + step * best_k as f64;
        v = best_v;
    }
    Problem1Solution {
        a_bar: a,
        b_bar: s - a,
        c_min: v,
        method: SolveMethod::Numeric,
    }
}

/// `K = c_min - H(e_b)` with the coherence minimizer as witness.
pub fn bb84_opt_keyrate(stats: &FineGrainedStats) -> Result<KeyRateReport> {
    let sol = solve_problem1(stats)?;
    let witness = rho_of_ab(stats, sol.a_bar, sol.b_bar)?;
    Ok(KeyRateReport::new(
        Protocol::Bb84Opt,
        sol.c_min,
        h2(stats.e_b()),
        Some(witness),
    ))
}

/// The state `tau` fixed by the diagonal and the X/Y error rates.
pub fn six_state_tau(stats: &FineGrainedStats) -> Result<TwoQubitState> {
    let (e_x, e_y) = match (stats.e_x(), stats.e_y()) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(Error::Infeasible {
                reason: "six-state rate needs both e_x and e_y".into(),
            })
        }
    };
    let a = (1.0 - e_x - e_y) / 2.0;
    let b = (e_y - e_x) / 2.0;
    rho_of_ab(stats, a, b)
}

/// `K = C(tau) - H(e_z)`.
pub fn sixstate_opt_keyrate(stats: &FineGrainedStats) -> Result<KeyRateReport> {
    let tau = six_state_tau(stats)?;
    let c = x_state_coherence(
        stats.m(),
        tau.element(0, 3).re.abs(),
        tau.element(1, 2).re.abs(),
    );
    Ok(KeyRateReport::new(
        Protocol::SixStateOpt,
        c,
        h2(stats.e_b()),
        Some(tau),
    ))
}

/// `1/2 S rho S + 1/2 rho` with `S` the permutation swapping basis states `i` and `j`.
pub fn symmetrize(rho: &TwoQubitState, i: usize, j: usize) -> Result<TwoQubitState> {
    if i == j || i > 3 || j > 3 {
        return Err(Error::BadIndex { i, j });
    }
    let mut perm = [0, 1, 2, 3];
    perm.swap(i, j);
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(4, 4);
    for r in 0..4 {
        for c in 0..4 {
            out[(r, c)] = (m[(r, c)] + m[(perm[r], perm[c])]) * 0.5;
        }
    }
    Ok(TwoQubitState::from_trusted(out))
}
