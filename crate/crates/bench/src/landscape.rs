//! Fitness landscape samples: where local optima sit relative to a
//! best-known solution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use nrp_core::search::LocalSearch;
use nrp_core::seed::derive_seed;
use nrp_core::{Instance, NrpError, Solution};

use crate::error::{BenchError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandscapePoint {
    /// Normalised Hamming distance `(n - agreement) / n`.
    pub n_dist: f64,
    /// Normalised profit gap `(ω* - ω) / ω*`. Negative when the run beats
    /// the reference.
    pub n_diff: f64,
    /// Number of customers assigned the same way as in the reference.
    pub agreement: usize,
    pub profit: u64,
    pub seed: u64,
    pub solution: Solution,
}

/// Position of `x` relative to `best_known` on `inst`.
pub fn landscape_point(inst: &Instance, x: &Solution, best_known: &Solution, seed: u64) -> Result<LandscapePoint> {
    let reference = inst.solution_profit(best_known)?;
    if reference == 0 {
        return Err(BenchError::Undefined("best-known profit is zero, so n_diff is undefined".into()));
    }
    let n = inst.num_customers();
    let agreement = x.agreement(best_known);
    let profit = inst.solution_profit(x)?;
    Ok(LandscapePoint {
        n_dist: if n == 0 { 0.0 } else { (n - agreement) as f64 / n as f64 },
        n_diff: (reference as f64 - profit as f64) / reference as f64,
        agreement,
        profit,
        seed,
        solution: x.clone(),
    })
}

/// Runs `operator` `runs` times with seeds derived from `base_seed` and
/// places every resulting local optimum.
pub fn landscape_scan(
    inst: &Instance,
    operator: &dyn LocalSearch,
    runs: usize,
    best_known: &Solution,
    base_seed: u64,
) -> Result<Vec<LandscapePoint>> {
    if runs < 1 {
        return Err(BenchError::Config("landscape needs at least one run".into()));
    }
    if !inst.is_feasible(best_known)? {
        return Err(NrpError::InvalidArgument("best-known solution breaks the budget".into()).into());
    }
    (0..runs)
        .into_par_iter()
        .map(|k| {
            let seed = derive_seed(base_seed, &[k as u64]);
            let run = operator.search(inst, seed);
            landscape_point(inst, &run.solution, best_known, seed)
        })
        .collect()
}
