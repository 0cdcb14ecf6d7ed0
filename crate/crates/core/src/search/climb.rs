use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::state::SelectionState;
use super::{check, start_state, RunResult};
use crate::error::Result;
use crate::model::Instance;
use crate::seed::{rng_from_seed, SolverRng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClimbParams {
    /// Maximum number of neighbour evaluations.
    pub iteration_budget: u64,
}

impl Default for ClimbParams {
    fn default() -> Self {
        ClimbParams { iteration_budget: 1_000_000 }
    }
}

impl ClimbParams {
    pub fn validate(&self) -> Result<()> {
        check(self.iteration_budget >= 1, "iteration budget must be at least 1")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SampledParams {
    /// Feasible neighbours sampled per step.
    pub sample_count: usize,
    /// Maximum number of neighbour evaluations.
    pub iteration_budget: u64,
}

impl Default for SampledParams {
    fn default() -> Self {
        SampledParams { sample_count: 10, iteration_budget: 1_000_000 }
    }
}

impl SampledParams {
    pub fn validate(&self) -> Result<()> {
        check(self.sample_count >= 1, "sample count must be at least 1")?;
        check(self.iteration_budget >= 1, "iteration budget must be at least 1")
    }
}

/// A uniformly random assignment repaired into feasibility.
pub fn random_search(inst: &Instance, seed: u64) -> RunResult {
    let started = Instant::now();
    let (state, _) = start_state(inst, seed);
    RunResult::from_state(&state, 1, started)
}

/// First found hill climbing: scan the flips in a fresh random order and
/// take the first feasible one that strictly increases profit.
pub fn hill_climb_first_found(inst: &Instance, seed: u64, params: &ClimbParams) -> RunResult {
    let started = Instant::now();
    let (mut state, mut rng) = start_state(inst, seed);
    let mut order: Vec<usize> = (0..inst.num_customers()).collect();
    let mut evaluations = 0u64;

    'climb: loop {
        order.shuffle(&mut rng);
        for &i in &order {
            if evaluations >= params.iteration_budget {
                break 'climb;
            }
            evaluations += 1;
            // Deselecting never increases profit.
            if !state.is_selected(i) && inst.profit(i) > 0 && state.can_add(i) {
                state.select(i);
                continue 'climb;
            }
        }
        break;
    }
    RunResult::from_state(&state, evaluations, started)
}

/// Sampled hill climbing from a random repaired start.
pub fn hill_climb_sampled(inst: &Instance, seed: u64, params: &SampledParams) -> RunResult {
    let mut rng = rng_from_seed(seed);
    let start = SelectionState::random_start(inst, &mut rng);
    let bits = start.bits().to_vec();
    hill_climb_sampled_from(inst, &bits, &mut rng, params)
}

/// Sampled hill climbing from a given start. Each step samples
/// `sample_count` distinct feasible flips and takes the best one if it
/// strictly improves profit; ties go to the lowest customer index, so with a
/// sample covering the whole neighbourhood this is steepest ascent.
///
/// `start` must be feasible.
pub fn hill_climb_sampled_from(
    inst: &Instance,
    start: &[bool],
    rng: &mut SolverRng,
    params: &SampledParams,
) -> RunResult {
    let started = Instant::now();
    let mut state = SelectionState::from_bits(inst, start);
    debug_assert!(state.is_feasible());
    let mut evaluations = 0u64;
    let mut feasible = Vec::with_capacity(inst.num_customers());

    while evaluations < params.iteration_budget {
        feasible.clear();
        feasible.extend((0..inst.num_customers()).filter(|&i| state.is_selected(i) || state.can_add(i)));
        if feasible.is_empty() {
            break;
        }
        let take = params.sample_count.min(feasible.len());
        let (sample, _) = feasible.partial_shuffle(rng, take);
        evaluations += take as u64;

        let gain = |i: usize| {
            let w = inst.profit(i) as i64;
            if state.is_selected(i) {
                -w
            } else {
                w
            }
        };
        let best = sample
            .iter()
            .copied()
            .max_by(|&a, &b| gain(a).cmp(&gain(b)).then(b.cmp(&a)))
            .expect("non-empty sample");
        if gain(best) <= 0 {
            break;
        }
        state.flip(best);
    }
    RunResult::from_state(&state, evaluations, started)
}
