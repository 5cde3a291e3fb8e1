//! Parameter sweeps behind the two figure reproductions.
//!
//! Rows are computed independently and returned in grid order regardless of
//! how many worker threads run them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finegrained::{bb84_opt_keyrate, sixstate_opt_keyrate, FineGrainedStats};
use crate::keyrate::{bb84_keyrate, sixstate_keyrate};
use crate::mismatch::{discard_keyrate_k1, koashi_keyrate_k2, mismatch_keyrate};

/// Inclusive uniform grid `start, ..., stop` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::OutOfRange {
                name: "steps",
                value: steps as f64,
                range: "[2, inf)",
            });
        }
        if !(start < stop) {
            return Err(Error::OutOfRange {
                name: "start",
                value: start,
                range: "below stop",
            });
        }
        Ok(Self { start, stop, steps })
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.steps {
            return self.stop;
        }
        self.start + (self.stop - self.start) * k as f64 / (self.steps - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.point(k)).collect()
    }
}

/// Evaluates `f` on every grid point with `jobs` threads, preserving order.
pub fn run_indexed<T, F>(points: &[f64], jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync + Send,
{
    if jobs <= 1 {
        return points.iter().map(|&x| f(x)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Infeasible {
            reason: format!("could not start {jobs} worker threads: {e}"),
        })?;
    pool.install(|| points.par_iter().map(|&x| f(x)).collect())
}

/// Unbalance range where the six-state `tau` stays positive semidefinite.
pub fn alpha_psd_region(e: f64) -> (f64, f64) {
    let t = ((1.0 - 2.0 * e) / (2.0 * (1.0 - e))).powi(2);
    let r = (0.25 - t).max(0.0).sqrt();
    (0.5 - r, 0.5 + r)
}

/// One row of the unbalanced-statistics sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaRow {
    pub alpha: f64,
    pub k_bb84: f64,
    pub k_bb84_opt: f64,
    pub k_six: f64,
    pub k_six_opt: f64,
}

pub fn alpha_row(alpha: f64, e: f64) -> Result<AlphaRow> {
    let (lo, hi) = alpha_psd_region(e);
    if !(alpha >= lo && alpha <= hi) {
        return Err(Error::InfeasibleAlpha { alpha, e, lo, hi });
    }
    let stats = FineGrainedStats::unbalanced(alpha, e)?;
    Ok(AlphaRow {
        alpha,
        k_bb84: bb84_keyrate(e, e)?.rate,
        k_bb84_opt: bb84_opt_keyrate(&stats)?.rate,
        k_six: sixstate_keyrate(e, e, e)?.rate,
        k_six_opt: sixstate_opt_keyrate(&stats)?.rate,
    })
}

/// Rates versus `alpha` with `e_x = e_y = e_z = e` and `m00/m33 = m22/m11 = alpha/(1-alpha)`.
pub fn sweep_alpha(e: f64, range: &SweepRange, jobs: usize) -> Result<Vec<AlphaRow>> {
    run_indexed(&range.points(), jobs, |a| alpha_row(a, e))
}

/// One row of the detector-mismatch sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MismatchRow {
    pub x: f64,
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
}

pub fn mismatch_row(x: f64, e_p: f64, e_b: f64) -> Result<MismatchRow> {
    if !(x > 0.0 && x <= 0.5) {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            range: "(0, 0.5]",
        });
    }
    Ok(MismatchRow {
        x,
        k: mismatch_keyrate(x, e_p, e_b)?.rate,
        k1: discard_keyrate_k1(x, e_p, e_b)?,
        k2: koashi_keyrate_k2(x, e_p, e_b)?,
    })
}

/// Symmetric-attack, discard and complementarity rates versus mismatch ratio `x`.
pub fn sweep_mismatch(
    e_p: f64,
    e_b: f64,
    range: &SweepRange,
    jobs: usize,
) -> Result<Vec<MismatchRow>> {
    run_indexed(&range.points(), jobs, |x| mismatch_row(x, e_p, e_b))
}
