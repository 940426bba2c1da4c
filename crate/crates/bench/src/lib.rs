//! Seeded fixtures shared by the benchmarks.

use rainbow_core::experiments::ExperimentConfig;
use rainbow_core::{EdgeColoring, PermTuple, Result, SearchBudget, StackingInstance};
use rainbow_core::rng::{derive_seed, seeded_rng};

/// `m` uniform colorings of `K_n` drawn from `seed`.
pub fn random_instance(n: usize, m: usize, r: u32, seed: u64) -> Result<StackingInstance> {
    let colorings = (0..m as u64)
        .map(|k| EdgeColoring::random(n, r, derive_seed(&[seed, k])))
        .collect::<Result<Vec<_>>>()?;
    StackingInstance::new(colorings)
}

pub fn random_tuple(n: usize, m: usize, seed: u64) -> PermTuple {
    PermTuple::random(n, m, &mut seeded_rng(seed))
}

/// A small threshold sweep around the transition at `n = 10`.
pub fn small_sweep(trials: u64) -> ExperimentConfig {
    ExperimentConfig {
        n: 10,
        m: 2,
        r_values: vec![2, 3, 4, 5],
        trials_per_r: trials,
        master_seed: 1,
        budget: SearchBudget::unlimited(),
        omega: 0.0,
    }
}
