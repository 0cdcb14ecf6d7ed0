//! Classic style random instances: a layered dependency graph with costs
//! drawn per level and customers requesting uniformly chosen requirements.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bound_for_ratio;
use crate::dependency::DependentInstance;
use crate::error::{NrpError, Result};
use crate::model::{Customer, CustomerId, Instance, Requirement, RequirementId};
use crate::seed::rng_from_seed;

pub const PRESET_NAMES: [&str; 5] = ["nrp-1", "nrp-2", "nrp-3", "nrp-4", "nrp-5"];

const PRESETS: [&str; 5] = [
    include_str!("../../data/presets/nrp-1.toml"),
    include_str!("../../data/presets/nrp-2.toml"),
    include_str!("../../data/presets/nrp-3.toml"),
    include_str!("../../data/presets/nrp-4.toml"),
    include_str!("../../data/presets/nrp-5.toml"),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelSpec {
    /// Number of requirements on the level.
    pub count: usize,
    /// Inclusive cost range.
    pub cost: [u64; 2],
    /// Each requirement of the level gets up to this many dependants,
    /// drawn from strictly later levels.
    pub max_children: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicGenSpec {
    pub name: String,
    pub levels: Vec<LevelSpec>,
    pub customers: usize,
    /// Inclusive profit range.
    pub profit: [u64; 2],
    /// Inclusive range of direct requests per customer.
    pub requests: [usize; 2],
    #[serde(default = "default_ratio")]
    pub cost_ratio: f64,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_ratio() -> f64 {
    0.5
}

impl ClassicGenSpec {
    /// One of the shipped presets, `nrp-1` to `nrp-5`.
    pub fn preset(name: &str, cost_ratio: f64, rng_seed: u64) -> Result<Self> {
        let k = PRESET_NAMES
            .iter()
            .position(|&p| p == name)
            .ok_or_else(|| NrpError::InvalidSpec(format!("unknown preset `{name}`")))?;
        let spec = ClassicGenSpec { cost_ratio, rng_seed, ..Self::from_toml(PRESETS[k])? };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| NrpError::InvalidSpec(e.to_string()))
    }

    /// `<name>-<cost ratio>`, e.g. `nrp-1-0.3`.
    pub fn instance_name(&self) -> String {
        format!("{}-{}", self.name, self.cost_ratio)
    }

    pub fn num_requirements(&self) -> usize {
        self.levels.iter().map(|l| l.count).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(NrpError::InvalidSpec(msg));
        if self.levels.is_empty() {
            return bad("at least one level is required".into());
        }
        for (k, level) in self.levels.iter().enumerate() {
            let [lo, hi] = level.cost;
            if level.count == 0 || lo < 1 || lo > hi {
                return bad(format!("level {} needs requirements and a cost range within [1, max]", k + 1));
            }
        }
        let [lo, hi] = self.profit;
        if lo < 1 || lo > hi {
            return bad(format!("profit range [{lo}, {hi}] is empty or starts below 1"));
        }
        let [lo, hi] = self.requests;
        if lo < 1 || lo > hi || hi > self.num_requirements() {
            return bad(format!(
                "request range [{lo}, {hi}] does not fit {} requirements",
                self.num_requirements()
            ));
        }
        if self.customers == 0 {
            return bad("at least one customer is required".into());
        }
        if !(self.cost_ratio > 0.0 && self.cost_ratio <= 1.0) {
            return bad(format!("cost ratio {} outside (0, 1]", self.cost_ratio));
        }
        Ok(())
    }
}

/// Generates the dependent form. Requirement ids run `1..=m` level by level.
pub fn generate_classic_dependent(spec: &ClassicGenSpec) -> Result<DependentInstance> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.rng_seed);
    let m = spec.num_requirements();

    let mut requirements = Vec::with_capacity(m);
    let mut level_end = Vec::with_capacity(spec.levels.len());
    for level in &spec.levels {
        for _ in 0..level.count {
            let id = RequirementId(requirements.len() as u32 + 1);
            requirements.push(Requirement { id, cost: rng.gen_range(level.cost[0]..=level.cost[1]) });
        }
        level_end.push(requirements.len());
    }

    let mut arcs = Vec::new();
    let mut start = 0;
    for (level, &end) in spec.levels.iter().zip(&level_end) {
        let later = m - end;
        for j in start..end {
            let k = rng.gen_range(0..=level.max_children.min(later));
            for child in sample(&mut rng, later, k).into_iter() {
                arcs.push((requirements[j].id, requirements[end + child].id));
            }
        }
        start = end;
    }

    let customers = (0..spec.customers)
        .map(|i| {
            let profit = rng.gen_range(spec.profit[0]..=spec.profit[1]);
            let k = rng.gen_range(spec.requests[0]..=spec.requests[1]);
            let wanted = sample(&mut rng, m, k).into_iter().map(|j| requirements[j].id).collect();
            (Customer { id: CustomerId(i as u32 + 1), profit }, wanted)
        })
        .collect();

    let total: u64 = requirements.iter().map(|r| r.cost).sum();
    DependentInstance::new(requirements, arcs, customers, bound_for_ratio(spec.cost_ratio, total))
}

/// Generates an instance and folds it into simplified form. The note holds
/// the instance name.
pub fn generate_classic(spec: &ClassicGenSpec) -> Result<Instance> {
    Ok(generate_classic_dependent(spec)?.to_simplified().with_note(spec.instance_name()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::format_instance;

    #[test]
    fn presets_load() {
        for name in PRESET_NAMES {
            let spec = ClassicGenSpec::preset(name, 0.3, 1).unwrap();
            assert_eq!(spec.name, name);
            assert_eq!(spec.levels.last().unwrap().max_children, 0);
        }
        assert!(ClassicGenSpec::preset("nrp-9", 0.3, 1).is_err());
    }

    #[test]
    fn nrp1_at_ratio_03() {
        let spec = ClassicGenSpec::preset("nrp-1", 0.3, 7).unwrap();
        let inst = generate_classic(&spec).unwrap();
        assert_eq!(inst.note(), "nrp-1-0.3");
        assert_eq!(inst.num_customers(), 100);
        assert_eq!(inst.num_requirements(), 140);
        assert_eq!(inst.budget(), bound_for_ratio(0.3, inst.total_cost()));
        assert!(inst.budget() < inst.total_cost());
        assert!(inst.is_original_form());
    }

    #[test]
    fn full_ratio_allows_everything() {
        let spec = ClassicGenSpec::preset("nrp-1", 1.0, 3).unwrap();
        let inst = generate_classic(&spec).unwrap();
        assert_eq!(inst.budget(), inst.total_cost());
        let all: Vec<bool> = vec![true; inst.num_customers()];
        assert!(inst.cost_of_bits(&all) <= inst.budget());
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = ClassicGenSpec::preset("nrp-2", 0.5, 11).unwrap();
        let a = format_instance(&generate_classic(&spec).unwrap());
        let b = format_instance(&generate_classic(&spec).unwrap());
        assert_eq!(a, b);
        let other = ClassicGenSpec { rng_seed: 12, ..spec };
        assert_ne!(a, format_instance(&generate_classic(&other).unwrap()));
    }

    #[test]
    fn arcs_point_to_later_levels() {
        let spec = ClassicGenSpec::preset("nrp-1", 0.5, 5).unwrap();
        let dep = generate_classic_dependent(&spec).unwrap();
        let level = |id: RequirementId| match id.0 {
            1..=20 => 0,
            21..=60 => 1,
            _ => 2,
        };
        assert!(dep.graph().num_arcs() > 0);
        for (parent, child) in dep.graph().arcs() {
            assert!(level(parent) < level(child));
        }
    }

    #[test]
    fn inconsistent_specs_are_rejected() {
        let spec = ClassicGenSpec::preset("nrp-1", 0.5, 0).unwrap();
        let too_many = ClassicGenSpec { requests: [1, 141], ..spec.clone() };
        assert!(matches!(generate_classic(&too_many), Err(NrpError::InvalidSpec(_))));
        let free = ClassicGenSpec { profit: [0, 5], ..spec.clone() };
        assert!(free.validate().is_err());
        let ratio = ClassicGenSpec { cost_ratio: 1.5, ..spec };
        assert!(ratio.validate().is_err());
    }
}
