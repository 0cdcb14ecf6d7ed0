//! Elitist genetic algorithm over binary customer chromosomes.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::state::SelectionState;
use super::{check, RunResult};
use crate::error::Result;
use crate::model::Instance;
use crate::seed::{rng_from_seed, SolverRng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub population_size: usize,
    /// Fraction of the population (rounded up) surviving each generation.
    pub elitism_ratio: f64,
    /// Probability that an offspring is produced by crossover rather than
    /// copied from its first parent.
    pub crossover_ratio: f64,
    /// Per gene mutation probability.
    pub mutation_ratio: f64,
    /// Number of generations.
    pub max_iterations: u64,
    pub rng_seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 100,
            elitism_ratio: 0.3,
            crossover_ratio: 0.3,
            mutation_ratio: 0.1,
            max_iterations: 100_000,
            rng_seed: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        check(self.population_size >= 2, "population size must be at least 2")?;
        check(
            self.elitism_ratio > 0.0 && self.elitism_ratio <= 1.0,
            "elitism ratio must lie in (0, 1]",
        )?;
        check((0.0..=1.0).contains(&self.crossover_ratio), "crossover ratio must lie in [0, 1]")?;
        check((0.0..=1.0).contains(&self.mutation_ratio), "mutation ratio must lie in [0, 1]")
    }

    fn elite_count(&self) -> usize {
        ((self.elitism_ratio * self.population_size as f64).ceil() as usize)
            .clamp(1, self.population_size)
    }
}

struct Individual {
    genes: Vec<bool>,
    profit: u64,
}

pub fn genetic_algorithm(inst: &Instance, params: &GaParams) -> RunResult {
    evolve(inst, params, |_, _| {})
}

/// Runs the algorithm, handing every generation's population to `observe`.
fn evolve(
    inst: &Instance,
    params: &GaParams,
    mut observe: impl FnMut(u64, &[Individual]),
) -> RunResult {
    let started = Instant::now();
    let mut rng = rng_from_seed(params.rng_seed);
    let mut population: Vec<Individual> = (0..params.population_size)
        .map(|_| {
            let state = SelectionState::random_start(inst, &mut rng);
            Individual { genes: state.bits().to_vec(), profit: state.profit() }
        })
        .collect();
    let mut evaluations = population.len() as u64;
    let mut best = best_of(&population).genes.clone();
    let mut best_profit = best_of(&population).profit;
    let elite = params.elite_count();
    let mut cumulative = Vec::with_capacity(params.population_size);

    for generation in 0..params.max_iterations {
        // Stable, so equal-profit individuals keep their order.
        population.sort_by_key(|ind| std::cmp::Reverse(ind.profit));

        cumulative.clear();
        let mut acc = 0u64;
        for ind in &population {
            acc += ind.profit;
            cumulative.push(acc);
        }

        let mut next: Vec<Individual> = Vec::with_capacity(params.population_size);
        while next.len() + elite < params.population_size {
            let a = &population[roulette(&cumulative, &mut rng)].genes;
            let b = &population[roulette(&cumulative, &mut rng)].genes;
            let mut child = if rng.gen::<f64>() < params.crossover_ratio {
                a.iter().zip(b).map(|(&x, &y)| if rng.gen::<bool>() { x } else { y }).collect()
            } else {
                a.clone()
            };
            mutate(&mut child, params.mutation_ratio, &mut rng);
            let mut state = SelectionState::from_bits(inst, &child);
            state.repair(&mut rng);
            evaluations += 1;
            next.push(Individual { genes: state.bits().to_vec(), profit: state.profit() });
        }
        population.truncate(elite);
        population.append(&mut next);

        let top = best_of(&population);
        if top.profit > best_profit {
            best_profit = top.profit;
            best.clone_from(&top.genes);
        }
        observe(generation, &population);
    }

    RunResult::from_bits(inst, &best, evaluations, started)
}

fn best_of(population: &[Individual]) -> &Individual {
    population
        .iter()
        .reduce(|a, b| if b.profit > a.profit { b } else { a })
        .expect("non-empty population")
}

/// Fitness proportionate selection; uniform when every profit is zero.
fn roulette(cumulative: &[u64], rng: &mut SolverRng) -> usize {
    let total = *cumulative.last().expect("non-empty population");
    if total == 0 {
        return rng.gen_range(0..cumulative.len());
    }
    let ticket = rng.gen_range(0..total);
    cumulative.partition_point(|&c| c <= ticket)
}

/// Flips each gene independently with probability `p`, skipping ahead by
/// geometric gaps instead of drawing once per gene.
fn mutate(genes: &mut [bool], p: f64, rng: &mut SolverRng) {
    if p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        genes.iter_mut().for_each(|g| *g = !*g);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut at = 0usize;
    loop {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let gap = (u.ln() / log_q).floor();
        if gap >= (genes.len() - at) as f64 {
            break;
        }
        at += gap as usize;
        genes[at] = !genes[at];
        at += 1;
    }
}
