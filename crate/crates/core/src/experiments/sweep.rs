//! Seeded threshold sweeps.
//!
//! Trial `t` at palette size `r` draws coloring `k` from the seed
//! `derive_seed([trial_seed(master, r, t), k])`, so every record is a pure
//! function of the configuration and the table does not depend on how many
//! workers ran the trials.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::moments::{threshold_formulas, Thresholds};
use crate::rng::{derive_seed, trial_seed};
use crate::stacking::{find_rainbow_stacking, SearchBudget, SearchStatus, StackingInstance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m: usize,
    pub r_values: Vec<u32>,
    pub trials_per_r: u64,
    pub master_seed: u64,
    pub budget: SearchBudget,
    pub omega: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::input("sweeps need n >= 2"));
        }
        if self.m < 1 {
            return Err(Error::input("sweeps need m >= 1"));
        }
        if self.trials_per_r == 0 {
            return Err(Error::input("trials per r must be at least 1"));
        }
        if self.r_values.is_empty() {
            return Err(Error::input("no palette sizes to sweep"));
        }
        if self.r_values[0] == 0 {
            return Err(Error::input("palette sizes must be positive"));
        }
        if self.r_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input("palette sizes must be strictly increasing"));
        }
        if !self.omega.is_finite() {
            return Err(Error::input("omega must be finite"));
        }
        self.budget.validate()
    }

    /// Colorings of trial `trial` at palette size `r`.
    pub fn trial_instance(&self, r: u32, trial: u64) -> Result<(u64, StackingInstance)> {
        let seed = trial_seed(self.master_seed, r, trial);
        let colorings = (0..self.m as u64)
            .map(|k| EdgeColoring::random(self.n, r, derive_seed(&[seed, k])))
            .collect::<Result<Vec<_>>>()?;
        Ok((seed, StackingInstance::new(colorings)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub r: u32,
    pub trial_index: u64,
    pub seed: u64,
    pub status: SearchStatus,
    pub nodes_expanded: u64,
    pub elapsed_millis: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: u32,
    pub found: u64,
    pub exhausted: u64,
    pub timeout: u64,
    /// `found / (found + exhausted)`; undefined when every trial timed out.
    pub p_hat: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub r_star: f64,
    pub r_lower: f64,
    pub r_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn row(&self, r: u32) -> Option<&SweepRow> {
        self.rows.iter().find(|row| row.r == r)
    }

    /// Largest swept `r` with `p̂ < 0.5` and smallest with `p̂ > 0.5`.
    pub fn transition_region(&self) -> (Option<u32>, Option<u32>) {
        let below = self
            .rows
            .iter()
            .filter(|row| row.p_hat.is_some_and(|p| p < 0.5))
            .map(|row| row.r)
            .max();
        let above = self
            .rows
            .iter()
            .filter(|row| row.p_hat.is_some_and(|p| p > 0.5))
            .map(|row| row.r)
            .min();
        (below, above)
    }

    /// Pairs of consecutive rows where `p̂` drops and the intervals do not
    /// overlap.
    pub fn monotonicity_flags(&self) -> Vec<(u32, u32)> {
        self.rows
            .windows(2)
            .filter_map(|w| match (w[0].p_hat, w[1].p_hat, w[0].ci_lo, w[1].ci_hi) {
                (Some(a), Some(b), Some(lo), Some(hi)) if b < a && hi < lo => Some((w[0].r, w[1].r)),
                _ => None,
            })
            .collect()
    }
}

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `total`.
pub fn wilson_interval(successes: u64, total: u64, z: f64) -> Option<(f64, f64)> {
    if total == 0 {
        return None;
    }
    let nt = total as f64;
    let p = successes as f64 / nt;
    let z2 = z * z;
    let denom = 1.0 + z2 / nt;
    let center = (p + z2 / (2.0 * nt)) / denom;
    let half = z / denom * (p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == total { 1.0 } else { (center + half).min(1.0) };
    Some((lo, hi))
}

fn run_trial(config: &ExperimentConfig, r: u32, trial: u64) -> Result<TrialRecord> {
    let (seed, inst) = config.trial_instance(r, trial)?;
    let start = Instant::now();
    let out = find_rainbow_stacking(&inst, config.budget);
    Ok(TrialRecord {
        r,
        trial_index: trial,
        seed,
        status: out.status,
        nodes_expanded: out.nodes_expanded,
        elapsed_millis: start.elapsed().as_millis() as u64,
    })
}

fn aggregate(config: &ExperimentConfig, thresholds: Thresholds, records: &[TrialRecord]) -> SweepTable {
    let rows = config
        .r_values
        .iter()
        .map(|&r| {
            let count = |s: SearchStatus| {
                records
                    .iter()
                    .filter(|rec| rec.r == r && rec.status == s)
                    .count() as u64
            };
            let found = count(SearchStatus::Found);
            let exhausted = count(SearchStatus::ExhaustedNoSolution);
            let timeout = count(SearchStatus::BudgetExceeded);
            let decided = found + exhausted;
            let p_hat = (decided > 0).then(|| found as f64 / decided as f64);
            let ci = wilson_interval(found, decided, WILSON_Z);
            SweepRow {
                r,
                found,
                exhausted,
                timeout,
                p_hat,
                ci_lo: ci.map(|c| c.0),
                ci_hi: ci.map(|c| c.1),
                r_star: thresholds.r_star,
                r_lower: thresholds.r_lower,
                r_upper: thresholds.r_upper,
            }
        })
        .collect();
    SweepTable { rows }
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepTable> {
    run_sweep_detailed(config, 1).map(|(table, _)| table)
}

/// The table plus every trial record, sorted by `(r, trial_index)`, using
/// `threads` workers (0 means the rayon default).
pub fn run_sweep_detailed(config: &ExperimentConfig, threads: usize) -> Result<(SweepTable, Vec<TrialRecord>)> {
    config.validate()?;
    let thresholds = threshold_formulas(config.n, config.m, config.omega)?;
    let jobs: Vec<(u32, u64)> = config
        .r_values
        .iter()
        .flat_map(|&r| (0..config.trials_per_r).map(move |t| (r, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::input(format!("cannot start worker pool: {e}")))?;
    let mut records = pool.install(|| {
        jobs.par_iter()
            .map(|&(r, t)| run_trial(config, r, t))
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by_key(|rec| (rec.r, rec.trial_index));
    Ok((aggregate(config, thresholds, &records), records))
}
