//! Simulated annealing with the Lundy–Mees cooling law and its multi-start
//! wrapper.

use std::time::Instant;

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::state::SelectionState;
use super::{check, start_state, RunResult};
use crate::error::Result;
use crate::model::Instance;
use crate::seed::{derive_seed, SolverRng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SaParams {
    pub start_temperature: f64,
    /// β in `T ← T / (1 + βT)`.
    pub cooling_ratio: f64,
    pub iteration_budget: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams { start_temperature: 100.0, cooling_ratio: 1e-7, iteration_budget: 1_000_000 }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        check(
            self.start_temperature > 0.0 && self.start_temperature.is_finite(),
            "start temperature must be positive",
        )?;
        check(
            self.cooling_ratio > 0.0 && self.cooling_ratio.is_finite(),
            "cooling ratio must be positive",
        )?;
        check(self.iteration_budget >= 1, "iteration budget must be at least 1")
    }

    /// `1 / T_k`. The law is linear in the inverse, `1/T_k = 1/T_0 + kβ`,
    /// so the walk needs no division per iteration.
    #[inline]
    pub fn inverse_temperature(&self, k: u64) -> f64 {
        1.0 / self.start_temperature + k as f64 * self.cooling_ratio
    }

    /// Temperature at iteration `k` as the walk uses it.
    pub fn temperature_at(&self, k: u64) -> f64 {
        1.0 / self.inverse_temperature(k)
    }
}

/// The Lundy–Mees schedule `T ← T / (1 + βT)`.
///
/// Its closed form is `T_k = T_0 / (1 + k β T_0)`: strictly decreasing and
/// positive for every finite `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LundyMees {
    temperature: f64,
    ratio: f64,
}

impl LundyMees {
    pub fn new(start: f64, ratio: f64) -> Self {
        LundyMees { temperature: start, ratio }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    #[inline]
    pub fn cool(&mut self) {
        self.temperature /= 1.0 + self.ratio * self.temperature;
    }

    /// Temperature after `k` updates from `start`, in closed form.
    pub fn closed_form(start: f64, ratio: f64, k: u64) -> f64 {
        start / (1.0 + k as f64 * ratio * start)
    }
}

/// One annealing run. Moves are single customer flips chosen uniformly;
/// infeasible flips are rejected, non-worsening ones always accepted and a
/// profit loss `Δ` is accepted with probability `exp(-Δ / T)`, where `T`
/// follows the Lundy–Mees law and cools once per iteration. Returns the
/// best feasible selection seen.
pub fn simulated_annealing(inst: &Instance, seed: u64, params: &SaParams) -> RunResult {
    let started = Instant::now();
    let (state, mut rng) = start_state(inst, seed);
    let n = inst.num_customers();
    if n == 0 {
        return RunResult::from_state(&state, 0, started);
    }

    let best = if n <= SMALL_CUSTOMERS && 1u64 << n <= params.iteration_budget {
        anneal_masks(inst, state.bits(), &mut rng, params)
    } else {
        anneal_state(state, &mut rng, params)
    };

    let mut result = RunResult::from_bits(inst, &best, params.iteration_budget, started);
    result.final_temperature = Some(params.temperature_at(params.iteration_budget));
    result
}

/// Instances up to this many customers anneal over a precomputed table of
/// feasible assignments.
const SMALL_CUSTOMERS: usize = 16;

fn anneal_state(mut state: SelectionState<'_>, rng: &mut SolverRng, params: &SaParams) -> Vec<bool> {
    let inst = state.instance();
    let n = inst.num_customers();
    let mut best = state.bits().to_vec();
    let mut best_profit = state.profit();
    let budget = inst.budget();
    let pick = Uniform::new(0, n);

    for k in 0..params.iteration_budget {
        let i = pick.sample(rng);
        if state.is_selected(i) {
            let loss = inst.profit(i);
            let inverse = params.inverse_temperature(k);
            if loss == 0 || accepts(rng.gen::<f64>(), loss as f64 * inverse) {
                state.deselect(i);
            }
        } else if state.cost() + state.added_cost(i) <= budget {
            state.select(i);
            if state.profit() > best_profit {
                best_profit = state.profit();
                best.copy_from_slice(state.bits());
            }
        }
    }
    best
}

/// Same walk as [`anneal_state`], drawing the same random numbers, with the
/// selection held as a bit mask and feasibility looked up in a table.
fn anneal_masks(inst: &Instance, start: &[bool], rng: &mut SolverRng, params: &SaParams) -> Vec<bool> {
    let n = inst.num_customers();
    let feasible = feasible_masks(inst);
    let profits: Vec<u64> = (0..n).map(|i| inst.profit(i)).collect();
    let mut mask = start.iter().enumerate().fold(0usize, |m, (i, &b)| m | (b as usize) << i);
    let mut profit = inst.profit_of_bits(start);
    let mut best = mask;
    let mut best_profit = profit;
    let pick = Uniform::new(0, n);

    for k in 0..params.iteration_budget {
        let i = pick.sample(rng);
        let bit = 1usize << i;
        if mask & bit != 0 {
            let loss = profits[i];
            let inverse = params.inverse_temperature(k);
            if loss == 0 || accepts(rng.gen::<f64>(), loss as f64 * inverse) {
                mask ^= bit;
                profit -= loss;
            }
        } else if feasible[mask | bit] {
            mask |= bit;
            profit += profits[i];
            if profit > best_profit {
                best_profit = profit;
                best = mask;
            }
        }
    }
    (0..n).map(|i| best >> i & 1 == 1).collect()
}

/// `u < e^-x`. The bounds `1 - x ≤ e^-x ≤ 1 / (1 + x)` settle most draws
/// without evaluating the exponential.
#[inline]
fn accepts(u: f64, x: f64) -> bool {
    if u < 1.0 - x {
        true
    } else if u * (1.0 + x) >= 1.0 {
        false
    } else {
        u < (-x).exp()
    }
}

/// Feasibility of every assignment, indexed by bit mask, filled in Gray
/// code order.
fn feasible_masks(inst: &Instance) -> Vec<bool> {
    let n = inst.num_customers();
    let mut table = vec![false; 1 << n];
    let mut state = SelectionState::empty(inst);
    let mut mask = 0usize;
    table[0] = true;
    for k in 1usize..1 << n {
        let bit = k.trailing_zeros() as usize;
        state.flip(bit);
        mask ^= 1 << bit;
        table[mask] = state.is_feasible();
    }
    table
}

/// Best of `restarts` independent annealing runs. Run `k` uses the seed
/// `derive_seed(seed, [k])`; ties keep the earliest run.
pub fn multi_start_sa(inst: &Instance, restarts: usize, seed: u64, params: &SaParams) -> RunResult {
    assert!(restarts >= 1, "at least one restart");
    let started = Instant::now();
    let runs: Vec<RunResult> = (0..restarts as u64)
        .into_par_iter()
        .map(|k| simulated_annealing(inst, derive_seed(seed, &[k]), params))
        .collect();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let mut best = runs
        .into_iter()
        .reduce(|a, b| if b.profit > a.profit { b } else { a })
        .expect("at least one run");
    best.evaluations = evaluations;
    best.wall_time = started.elapsed().as_secs_f64();
    best
}
