//! Best solution found over many repeated runs, used as the reference for
//! landscapes and backbone quality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use nrp_core::bma::{bma_solve, BmaParams};
use nrp_core::search::random_search;
use nrp_core::seed::derive_seed;
use nrp_core::{Instance, Solution};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BestKnownBudget {
    pub rs_runs: usize,
    pub bma_runs: usize,
    pub bma: BmaParams,
}

impl Default for BestKnownBudget {
    fn default() -> Self {
        BestKnownBudget { rs_runs: 1000, bma_runs: 20, bma: BmaParams::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestKnown {
    pub solution: Solution,
    pub profit: u64,
    /// `"rs"` or `"bma"` followed by the run index.
    pub found_by: String,
}

/// Runs random search `rs_runs` times and the multilevel solver `bma_runs`
/// times. Among equal profits the earliest run wins, random search first.
pub fn best_known(inst: &Instance, budget: &BestKnownBudget, seed: u64) -> Result<BestKnown> {
    let rs = (0..budget.rs_runs).into_par_iter().map(|k| {
        let run = random_search(inst, derive_seed(seed, &[0, k as u64]));
        Ok((run.profit, run.solution, format!("rs{k}")))
    });
    let bma = (0..budget.bma_runs).into_par_iter().map(|k| {
        let params = BmaParams { rng_seed: derive_seed(seed, &[1, k as u64]), ..budget.bma };
        let result = bma_solve(inst, &params)?;
        Ok((result.profit, result.solution, format!("bma{k}")))
    });
    let runs: Vec<(u64, Solution, String)> = rs.chain(bma).collect::<Result<_>>()?;

    let mut best = BestKnown {
        solution: Solution::all_unselected(inst),
        profit: 0,
        found_by: "empty".into(),
    };
    for (profit, solution, found_by) in runs {
        if profit > best.profit {
            best = BestKnown { solution, profit, found_by };
        }
    }
    Ok(best)
}
