//! How fast repeated reduction pairs shrink an instance.

use serde::{Deserialize, Serialize};

use nrp_core::bma::reduce_level;
use nrp_core::search::LocalSearch;
use nrp_core::Instance;

use crate::error::Result;

/// Customer counts around one reduction pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    /// 1-based pair index.
    pub pair: usize,
    pub customers_before: usize,
    /// After the approximate backbone.
    pub customers_mid: usize,
    /// After the soft backbone.
    pub customers_after: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub original_customers: usize,
    pub steps: Vec<TrajectoryStep>,
    /// Customers fixed by approximate backbones, summed over pairs.
    pub by_approximate: usize,
    /// Customers fixed by soft backbones, summed over pairs.
    pub by_soft: usize,
    /// Customers left at the end.
    pub remainder: usize,
}

impl Trajectory {
    /// Share of the original customers still present at the end.
    pub fn remainder_fraction(&self) -> f64 {
        if self.original_customers == 0 {
            0.0
        } else {
            self.remainder as f64 / self.original_customers as f64
        }
    }

    /// Every half-step count in order, starting with the original size.
    pub fn half_steps(&self) -> Vec<usize> {
        std::iter::once(self.original_customers)
            .chain(self.steps.iter().flat_map(|s| [s.customers_mid, s.customers_after]))
            .collect()
    }
}

/// Applies up to `pairs` reduction pairs, each from `gamma` runs of
/// `operator`. Stops once the instance is empty or the local optima share
/// no pair; such a last pair is not recorded.
pub fn reduction_trajectory(
    inst: &Instance,
    pairs: usize,
    gamma: usize,
    operator: &dyn LocalSearch,
    seed: u64,
) -> Result<Trajectory> {
    let mut current = inst.clone();
    let mut steps = Vec::new();
    let (mut by_approximate, mut by_soft) = (0, 0);
    for pair in 1..=pairs {
        if current.num_customers() == 0 {
            break;
        }
        let (trace, _) = reduce_level(&current, operator, gamma, seed, pair)?;
        if !trace.productive {
            break;
        }
        let step = TrajectoryStep {
            pair,
            customers_before: trace.instance_before.num_customers(),
            customers_mid: trace.instance_mid.num_customers(),
            customers_after: trace.instance_after.num_customers(),
        };
        by_approximate += step.customers_before - step.customers_mid;
        by_soft += step.customers_mid - step.customers_after;
        steps.push(step);
        current = trace.instance_after;
    }
    Ok(Trajectory {
        original_customers: inst.num_customers(),
        steps,
        by_approximate,
        by_soft,
        remainder: current.num_customers(),
    })
}
