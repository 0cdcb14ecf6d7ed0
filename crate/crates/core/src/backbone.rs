//! Backbones and backbone based instance reduction.
//!
//! A backbone is a partial assignment: a set of `(customer, polarity)` pairs
//! with at most one pair per customer. Fixing a backbone removes its
//! customers from the instance, removes the requirements of its selected
//! customers, and charges their cost to the budget. A solution of the
//! reduced instance then refines back to the original by plain union,
//! because ids are never renumbered.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{NrpError, Result};
use crate::model::{Customer, CustomerId, Instance, RequirementId, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackboneKind {
    /// Common part of every optimal solution.
    Exact,
    /// Common part of a set of local optima.
    Approximate,
    /// Customers of a reduced instance that request nothing.
    Soft,
    /// Union of the approximate and soft backbones of all levels.
    Combined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Backbone {
    pub kind: BackboneKind,
    #[serde(with = "pair_list")]
    pairs: BTreeMap<CustomerId, bool>,
}

impl Backbone {
    pub fn empty(kind: BackboneKind) -> Self {
        Backbone { kind, pairs: BTreeMap::new() }
    }

    /// Builds a backbone, rejecting a customer fixed to both polarities.
    pub fn from_pairs(
        kind: BackboneKind,
        pairs: impl IntoIterator<Item = (CustomerId, bool)>,
    ) -> Result<Self> {
        let mut bb = Backbone::empty(kind);
        for (id, p) in pairs {
            bb.insert(id, p)?;
        }
        Ok(bb)
    }

    fn insert(&mut self, id: CustomerId, p: bool) -> Result<()> {
        match self.pairs.insert(id, p) {
            Some(old) if old != p => Err(NrpError::Integrity(format!(
                "customer {id} fixed to both polarities"
            ))),
            _ => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, id: CustomerId) -> Option<bool> {
        self.pairs.get(&id).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (CustomerId, bool)> + '_ {
        self.pairs.iter().map(|(&id, &p)| (id, p))
    }

    pub fn customers(&self) -> impl Iterator<Item = CustomerId> + '_ {
        self.pairs.keys().copied()
    }

    pub fn selected(&self) -> impl Iterator<Item = CustomerId> + '_ {
        self.pairs.iter().filter(|(_, &p)| p).map(|(&id, _)| id)
    }

    /// Number of pairs that also appear in `x`.
    pub fn agreement(&self, x: &Solution) -> usize {
        self.pairs.iter().filter(|(&id, &p)| x.get(id) == Some(p)).count()
    }

    /// Profit of the selected customers, looked up in `inst`.
    pub fn selected_profit(&self, inst: &Instance) -> u64 {
        self.selected()
            .filter_map(|id| inst.customer_index(id))
            .map(|i| inst.profit(i))
            .sum()
    }
}

/// The pairs shared by every solution in `solutions`.
pub fn approximate_backbone(solutions: &[Solution]) -> Result<Backbone> {
    let (first, rest) = solutions.split_first().ok_or_else(|| {
        NrpError::InvalidArgument("approximate backbone of an empty solution set".into())
    })?;
    for x in rest {
        if x.len() != first.len() || x.pairs().any(|(id, _)| first.get(id).is_none()) {
            return Err(NrpError::InvalidArgument(
                "solutions do not assign the same customers".into(),
            ));
        }
    }
    Ok(Backbone {
        kind: BackboneKind::Approximate,
        pairs: first.pairs().filter(|&(id, p)| rest.iter().all(|x| x.get(id) == Some(p))).collect(),
    })
}

/// Result of fixing a backbone in an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedInstance {
    pub reduced: Instance,
    /// Customers fixed by the backbone, either polarity.
    pub removed_customers: BTreeSet<CustomerId>,
    /// Requirements requested by the selected backbone customers.
    pub removed_requirements: BTreeSet<RequirementId>,
    /// Total cost of `removed_requirements`.
    pub backbone_cost: u64,
}

/// Fixes `bb` in `inst`:
///
/// * customers of the backbone leave the instance,
/// * requirements requested by its selected customers leave the instance
///   and disappear from the rows of every surviving customer,
/// * the budget drops by their cost.
pub fn instance_reduction(inst: &Instance, bb: &Backbone) -> Result<ReducedInstance> {
    let mut fixed = vec![false; inst.num_customers()];
    let mut paid = vec![false; inst.num_requirements()];
    for (id, p) in bb.pairs() {
        let i = inst.customer_index(id).ok_or_else(|| {
            NrpError::InvalidArgument(format!("backbone fixes customer {id} absent from the instance"))
        })?;
        fixed[i] = true;
        if p {
            for &j in inst.requests(i) {
                paid[j as usize] = true;
            }
        }
    }

    let backbone_cost: u64 = (0..inst.num_requirements()).filter(|&j| paid[j]).map(|j| inst.cost(j)).sum();
    if backbone_cost > inst.budget() {
        return Err(NrpError::InfeasibleBackbone { cost: backbone_cost, bound: inst.budget() });
    }

    let requirements = inst
        .requirements()
        .iter()
        .zip(&paid)
        .filter(|(_, &gone)| !gone)
        .map(|(r, _)| *r)
        .collect();
    let customers: Vec<(Customer, Vec<RequirementId>)> = (0..inst.num_customers())
        .filter(|&i| !fixed[i])
        .map(|i| {
            let row = inst
                .requests(i)
                .iter()
                .filter(|&&j| !paid[j as usize])
                .map(|&j| inst.requirements()[j as usize].id)
                .collect();
            (inst.customers()[i], row)
        })
        .collect();
    let reduced = Instance::new(requirements, customers, inst.budget() - backbone_cost, inst.note())?;

    Ok(ReducedInstance {
        reduced,
        removed_customers: bb.customers().collect(),
        removed_requirements: (0..inst.num_requirements())
            .filter(|&j| paid[j])
            .map(|j| inst.requirements()[j].id)
            .collect(),
        backbone_cost,
    })
}

/// Customers whose request row is empty, fixed to selected. Always empty on
/// an instance that did not come out of a reduction.
pub fn soft_backbone(inst: &Instance) -> Backbone {
    Backbone {
        kind: BackboneKind::Soft,
        pairs: (0..inst.num_customers())
            .filter(|&i| inst.requests(i).is_empty())
            .map(|i| (inst.customers()[i].id, true))
            .collect(),
    }
}

/// Union of backbones. A customer fixed to both polarities is an integrity
/// error.
pub fn combine<'a>(backbones: impl IntoIterator<Item = &'a Backbone>) -> Result<Backbone> {
    let mut out = Backbone::empty(BackboneKind::Combined);
    for bb in backbones {
        for (id, p) in bb.pairs() {
            out.insert(id, p)?;
        }
    }
    Ok(out)
}

/// `x ∪ bb`. The backbone's customers must not already be assigned in `x`.
pub fn extend_solution(x: &Solution, bb: &Backbone) -> Result<Solution> {
    let mut out = x.clone();
    for (id, p) in bb.pairs() {
        if out.insert(id, p).is_some() {
            return Err(NrpError::Integrity(format!(
                "customer {id} assigned twice during refinement"
            )));
        }
    }
    Ok(out)
}

mod pair_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::model::CustomerId;

    pub fn serialize<S: Serializer>(
        pairs: &BTreeMap<CustomerId, bool>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let v: Vec<(CustomerId, u8)> = pairs.iter().map(|(&id, &p)| (id, p as u8)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<CustomerId, bool>, D::Error> {
        let v = Vec::<(CustomerId, u8)>::deserialize(d)?;
        Ok(v.into_iter().map(|(id, p)| (id, p != 0)).collect())
    }
}
