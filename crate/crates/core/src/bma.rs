//! The backbone based multilevel algorithm.
//!
//! Reduction: while the instance has more than `beta` customers (and at most
//! `alpha` times), collect `gamma` local optima, fix their common pairs
//! (approximate backbone), then fix the customers left with an empty request
//! row (soft backbone). Solving: one operator run on the smallest instance.
//! Refinement: union the solution with every level's backbones, innermost
//! level first.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backbone::{
    approximate_backbone, combine, extend_solution, instance_reduction, soft_backbone, Backbone,
    BackboneKind,
};
use crate::error::{NrpError, Result};
use crate::model::{Instance, Solution};
use crate::search::{LocalSearch, RunResult, SearchOperator};
use crate::seed::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BmaParams {
    /// Maximum number of reduction levels.
    pub alpha: usize,
    /// Instances with at most this many customers are not reduced further.
    pub beta: usize,
    /// Local optima per approximate backbone.
    pub gamma: usize,
    pub operator: SearchOperator,
    pub rng_seed: u64,
}

impl Default for BmaParams {
    fn default() -> Self {
        BmaParams {
            alpha: 10,
            beta: 20,
            gamma: 5,
            operator: SearchOperator::default(),
            rng_seed: 0,
        }
    }
}

impl BmaParams {
    pub fn validate(&self) -> Result<()> {
        if self.alpha < 1 || self.beta < 1 || self.gamma < 1 {
            return Err(NrpError::InvalidArgument("alpha, beta and gamma must be at least 1".into()));
        }
        self.operator.validate()
    }
}

/// Seed of the `run`-th local search of reduction level `level` (1-based).
pub fn level_run_seed(base: u64, level: usize, run: usize) -> u64 {
    derive_seed(base, &[level as u64, run as u64])
}

/// Seed of the solving phase.
pub fn solve_seed(base: u64) -> u64 {
    derive_seed(base, &[0, u64::MAX])
}

/// One reduction level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelTrace {
    /// 1-based level index.
    pub level: usize,
    pub instance_before: Instance,
    pub gamma_solutions: Vec<Solution>,
    pub approx_backbone: Backbone,
    /// After fixing the approximate backbone.
    pub instance_mid: Instance,
    pub soft_backbone: Backbone,
    /// After also fixing the soft backbone.
    pub instance_after: Instance,
    /// `false` when the local optima shared no pair; such a level ends the
    /// reduction phase and does not count towards `delta`.
    pub productive: bool,
}

impl LevelTrace {
    pub fn summary(&self) -> LevelSummary {
        LevelSummary {
            level: self.level,
            customers_before: self.instance_before.num_customers(),
            customers_mid: self.instance_mid.num_customers(),
            customers_after: self.instance_after.num_customers(),
            requirements_before: self.instance_before.num_requirements(),
            requirements_after: self.instance_after.num_requirements(),
            budget_before: self.instance_before.budget(),
            budget_after: self.instance_after.budget(),
            approx_backbone: self.approx_backbone.clone(),
            soft_backbone: self.soft_backbone.clone(),
            productive: self.productive,
        }
    }
}

/// Scale-only view of a [`LevelTrace`], small enough for batch logs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub level: usize,
    pub customers_before: usize,
    pub customers_mid: usize,
    pub customers_after: usize,
    pub requirements_before: usize,
    pub requirements_after: usize,
    pub budget_before: u64,
    pub budget_after: u64,
    pub approx_backbone: Backbone,
    pub soft_backbone: Backbone,
    pub productive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmaResult {
    /// Total over the original instance.
    pub solution: Solution,
    pub profit: u64,
    pub cost: u64,
    pub levels: Vec<LevelTrace>,
    /// Number of productive reduction levels.
    pub delta: usize,
    pub combined_backbone: Backbone,
    /// The operator run on the smallest instance.
    pub final_solve: RunResult,
    pub wall_time: f64,
    pub evaluations: u64,
}

impl BmaResult {
    pub fn productive_levels(&self) -> impl DoubleEndedIterator<Item = &LevelTrace> {
        self.levels.iter().filter(|l| l.productive)
    }

    /// The instance handed to the solving phase.
    pub fn smallest_instance<'a>(&'a self, original: &'a Instance) -> &'a Instance {
        self.productive_levels().last().map_or(original, |l| &l.instance_after)
    }

    /// Flattens the run into a [`RunResult`] against the original instance.
    pub fn run_result(&self) -> RunResult {
        RunResult {
            solution: self.solution.clone(),
            profit: self.profit,
            cost: self.cost,
            wall_time: self.wall_time,
            evaluations: self.evaluations,
            final_temperature: None,
        }
    }
}

/// Collects `gamma` local optima of `inst` and applies one reduction pair:
/// approximate backbone, then soft backbone.
pub fn reduce_level(
    inst: &Instance,
    operator: &dyn LocalSearch,
    gamma: usize,
    rng_seed: u64,
    level: usize,
) -> Result<(LevelTrace, u64)> {
    let runs: Vec<RunResult> = (0..gamma)
        .into_par_iter()
        .map(|run| operator.search(inst, level_run_seed(rng_seed, level, run)))
        .collect();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let gamma_solutions: Vec<Solution> = runs.into_iter().map(|r| r.solution).collect();
    Ok((reduce_with_solutions(inst, gamma_solutions, level)?, evaluations))
}

/// The reduction pair of a level given its local optima. Deterministic, so
/// a recorded trace can be replayed from its `gamma_solutions`.
pub fn reduce_with_solutions(
    inst: &Instance,
    gamma_solutions: Vec<Solution>,
    level: usize,
) -> Result<LevelTrace> {
    let approx = approximate_backbone(&gamma_solutions)?;
    if approx.is_empty() {
        return Ok(LevelTrace {
            level,
            instance_before: inst.clone(),
            gamma_solutions,
            approx_backbone: approx,
            instance_mid: inst.clone(),
            soft_backbone: Backbone::empty(BackboneKind::Soft),
            instance_after: inst.clone(),
            productive: false,
        });
    }
    let mid = instance_reduction(inst, &approx)?.reduced;
    let soft = soft_backbone(&mid);
    let after = instance_reduction(&mid, &soft)?.reduced;
    Ok(LevelTrace {
        level,
        instance_before: inst.clone(),
        gamma_solutions,
        approx_backbone: approx,
        instance_mid: mid,
        soft_backbone: soft,
        instance_after: after,
        productive: true,
    })
}

pub fn bma_solve(inst: &Instance, params: &BmaParams) -> Result<BmaResult> {
    bma_solve_with(inst, params, &params.operator)
}

/// Runs the algorithm with an arbitrary operator; `params.operator` is
/// ignored.
pub fn bma_solve_with(
    inst: &Instance,
    params: &BmaParams,
    operator: &dyn LocalSearch,
) -> Result<BmaResult> {
    if params.alpha < 1 || params.beta < 1 || params.gamma < 1 {
        return Err(NrpError::InvalidArgument("alpha, beta and gamma must be at least 1".into()));
    }
    let started = Instant::now();
    let mut evaluations = 0;
    let mut levels = Vec::new();
    let mut current = inst.clone();

    for level in 1..=params.alpha {
        if current.num_customers() <= params.beta {
            break;
        }
        let (trace, evals) = reduce_level(&current, operator, params.gamma, params.rng_seed, level)?;
        evaluations += evals;
        let productive = trace.productive;
        if productive {
            current = trace.instance_after.clone();
        }
        levels.push(trace);
        if !productive {
            break;
        }
    }

    let final_solve = operator.search(&current, solve_seed(params.rng_seed));
    evaluations += final_solve.evaluations;

    let mut solution = final_solve.solution.clone();
    for trace in levels.iter().rev().filter(|l| l.productive) {
        solution = extend_solution(&solution, &trace.approx_backbone)?;
        solution = extend_solution(&solution, &trace.soft_backbone)?;
    }
    if solution.len() != inst.num_customers() {
        return Err(NrpError::Integrity(format!(
            "refined solution assigns {} of {} customers",
            solution.len(),
            inst.num_customers()
        )));
    }
    let cost = inst.solution_cost(&solution)?;
    let profit = inst.solution_profit(&solution)?;
    if cost > inst.budget() {
        return Err(NrpError::Integrity(format!(
            "refined solution costs {cost}, over the bound {}",
            inst.budget()
        )));
    }

    let combined_backbone = combine(
        levels
            .iter()
            .filter(|l| l.productive)
            .flat_map(|l| [&l.approx_backbone, &l.soft_backbone]),
    )?;
    let delta = levels.iter().filter(|l| l.productive).count();

    Ok(BmaResult {
        solution,
        profit,
        cost,
        levels,
        delta,
        combined_backbone,
        final_solve,
        wall_time: started.elapsed().as_secs_f64(),
        evaluations,
    })
}

/// `|ξ^c| / n`: share of the original customers fixed by backbones.
pub fn backbone_scale_ratio(result: &BmaResult, inst: &Instance) -> f64 {
    if inst.num_customers() == 0 {
        return 0.0;
    }
    result.combined_backbone.len() as f64 / inst.num_customers() as f64
}

/// `|ξ^c ∩ X*| / |ξ^c|`: share of backbone pairs agreeing with `best_known`.
pub fn backbone_optimal_ratio(result: &BmaResult, best_known: &Solution) -> Result<f64> {
    let bb = &result.combined_backbone;
    if bb.is_empty() {
        return Err(NrpError::UndefinedRatio("the combined backbone is empty".into()));
    }
    Ok(bb.agreement(best_known) as f64 / bb.len() as f64)
}
