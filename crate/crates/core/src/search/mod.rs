//! Local searches and direct solvers.
//!
//! All operators work on the single customer flip neighbourhood. A flip that
//! would break the budget is never taken; random starting points are
//! repaired by deselecting random customers. Every operator returns a
//! feasible solution, including on instances with a zero budget or with
//! customers that request nothing.

mod anneal;
mod climb;
mod genetic;
pub(crate) mod state;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{NrpError, Result};
use crate::model::{Instance, Solution};
use crate::seed::rng_from_seed;

pub use anneal::{multi_start_sa, simulated_annealing, LundyMees, SaParams};
pub use climb::{
    hill_climb_first_found, hill_climb_sampled, hill_climb_sampled_from, random_search,
    ClimbParams, SampledParams,
};
pub use genetic::{genetic_algorithm, GaParams};

use state::SelectionState;

/// Outcome of one solver run. `profit` and `cost` are cached evaluations of
/// `solution` on the instance the run was given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub solution: Solution,
    pub profit: u64,
    pub cost: u64,
    /// Seconds spent inside the solver.
    pub wall_time: f64,
    pub evaluations: u64,
    /// Temperature reached when the run ended (annealing only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_temperature: Option<f64>,
}

impl RunResult {
    pub(crate) fn from_bits(
        inst: &Instance,
        bits: &[bool],
        evaluations: u64,
        started: Instant,
    ) -> Self {
        RunResult {
            solution: inst.solution_from_bits(bits),
            profit: inst.profit_of_bits(bits),
            cost: inst.cost_of_bits(bits),
            wall_time: started.elapsed().as_secs_f64(),
            evaluations,
            final_temperature: None,
        }
    }

    pub(crate) fn from_state(state: &SelectionState<'_>, evaluations: u64, started: Instant) -> Self {
        Self::from_bits(state.instance(), state.bits(), evaluations, started)
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_secs_f64(self.wall_time)
    }
}

/// Anything that turns an instance and a seed into a (locally optimal)
/// feasible solution. The multilevel driver is generic over this.
pub trait LocalSearch: Sync {
    fn search(&self, inst: &Instance, seed: u64) -> RunResult;

    fn name(&self) -> String;
}

/// The four interchangeable local search operators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchOperator {
    Random,
    FirstFound(ClimbParams),
    Sampled(SampledParams),
    Annealing(SaParams),
}

impl Default for SearchOperator {
    fn default() -> Self {
        SearchOperator::Annealing(SaParams::default())
    }
}

impl SearchOperator {
    pub fn validate(&self) -> Result<()> {
        match self {
            SearchOperator::Random => Ok(()),
            SearchOperator::FirstFound(p) => p.validate(),
            SearchOperator::Sampled(p) => p.validate(),
            SearchOperator::Annealing(p) => p.validate(),
        }
    }
}

impl LocalSearch for SearchOperator {
    fn search(&self, inst: &Instance, seed: u64) -> RunResult {
        match self {
            SearchOperator::Random => random_search(inst, seed),
            SearchOperator::FirstFound(p) => hill_climb_first_found(inst, seed, p),
            SearchOperator::Sampled(p) => hill_climb_sampled(inst, seed, p),
            SearchOperator::Annealing(p) => simulated_annealing(inst, seed, p),
        }
    }

    fn name(&self) -> String {
        match self {
            SearchOperator::Random => "rs",
            SearchOperator::FirstFound(_) => "ffhc",
            SearchOperator::Sampled(_) => "shc",
            SearchOperator::Annealing(_) => "sa",
        }
        .to_string()
    }
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(NrpError::InvalidArgument(what.to_string()))
    }
}

/// Random repaired start shared by every operator.
pub(crate) fn start_state(inst: &Instance, seed: u64) -> (SelectionState<'_>, crate::seed::SolverRng) {
    let mut rng = rng_from_seed(seed);
    let state = SelectionState::random_start(inst, &mut rng);
    (state, rng)
}

#[cfg(test)]
pub(crate) mod testing {
    use rand::Rng;

    use crate::model::{CustomerId, Instance, Solution};
    use crate::seed::rng_from_seed;

    /// Random simplified instance: `n` customers, `m` requirements, costs
    /// and profits in `[1, 10]`, each customer requesting 1..=3
    /// requirements, budget `⌊ratio · Σ costs⌋`.
    pub fn random_instance(seed: u64, n: usize, m: usize, ratio: f64) -> Instance {
        let mut rng = rng_from_seed(seed);
        let costs: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=10)).collect();
        let rows: Vec<(u64, Vec<u32>)> = (0..n)
            .map(|_| {
                let k = rng.gen_range(1..=3.min(m));
                (rng.gen_range(1..=10), (0..k).map(|_| rng.gen_range(1..=m as u32)).collect())
            })
            .collect();
        let rows: Vec<(u64, &[u32])> = rows.iter().map(|(p, r)| (*p, r.as_slice())).collect();
        let total: u64 = costs.iter().sum();
        Instance::from_rows(&costs, &rows, (ratio * total as f64).floor() as u64).unwrap()
    }

    /// Exhaustive optimum profit, independent of the oracle module.
    pub fn optimum(inst: &Instance) -> u64 {
        let n = inst.num_customers();
        (0u32..1 << n)
            .map(|mask| (0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|bits| inst.cost_of_bits(bits) <= inst.budget())
            .map(|bits| inst.profit_of_bits(&bits))
            .max()
            .unwrap()
    }

    pub fn selected(ids: &[u32], inst: &Instance) -> Solution {
        Solution::from_selected(inst, &ids.iter().map(|&i| CustomerId(i)).collect::<Vec<_>>())
    }
}
