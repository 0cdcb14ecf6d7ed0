//! The simplified (request incidence) form of the Next Release Problem and
//! the solution representation shared by every solver.
//!
//! Customer and requirement identifiers are global: an instance produced by
//! a reduction references a subset of the ids of its parent, never a
//! renumbering. Internally both lists are kept sorted by id and the request
//! incidence is stored in both directions over local indices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NrpError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CustomerId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RequirementId(pub u32);

impl fmt::Display for CustomerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Display for RequirementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirement {
    pub id: RequirementId,
    pub cost: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Customer {
    pub id: CustomerId,
    pub profit: u64,
}

/// A Next Release Problem instance in request-incidence form.
///
/// Instances are immutable once built and can be shared freely between
/// concurrent solver runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceData", into = "InstanceData")]
pub struct Instance {
    customers: Vec<Customer>,
    requirements: Vec<Requirement>,
    /// Per customer, sorted local indices into `requirements`.
    requests: Rows,
    /// Per requirement, sorted local indices into `customers`.
    requesters: Rows,
    budget: u64,
    note: String,
}

impl Instance {
    /// Builds an instance from customers with their requested requirement
    /// ids. Duplicate requests are merged; unknown or duplicated ids are
    /// model errors.
    pub fn new(
        requirements: Vec<Requirement>,
        customers: Vec<(Customer, Vec<RequirementId>)>,
        budget: u64,
        note: impl Into<String>,
    ) -> Result<Self> {
        let mut requirements = requirements;
        requirements.sort_by_key(|r| r.id);
        if let Some(w) = requirements.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(NrpError::Model(format!("duplicate requirement id {}", w[0].id)));
        }
        let mut customers = customers;
        customers.sort_by_key(|(c, _)| c.id);
        if let Some(w) = customers.windows(2).find(|w| w[0].0.id == w[1].0.id) {
            return Err(NrpError::Model(format!("duplicate customer id {}", w[0].0.id)));
        }

        let mut requests = Rows::default();
        let mut requesters = vec![Vec::new(); requirements.len()];
        let mut plain = Vec::with_capacity(customers.len());
        for (local, (customer, wanted)) in customers.into_iter().enumerate() {
            let mut row = Vec::with_capacity(wanted.len());
            for rid in wanted {
                let j = requirements
                    .binary_search_by_key(&rid, |r| r.id)
                    .map_err(|_| {
                        NrpError::Model(format!(
                            "customer {} requests undeclared requirement {}",
                            customer.id, rid
                        ))
                    })?;
                row.push(j as u32);
            }
            row.sort_unstable();
            row.dedup();
            for &j in &row {
                requesters[j as usize].push(local as u32);
            }
            requests.push(&row);
            plain.push(customer);
        }

        Ok(Instance {
            customers: plain,
            requirements,
            requests,
            requesters: requesters.iter().fold(Rows::default(), |mut rows, r| {
                rows.push(r);
                rows
            }),
            budget,
            note: note.into(),
        })
    }

    /// Convenience constructor with ids `1..=m` for requirements and
    /// `1..=n` for customers. Each row is `(profit, requested ids)`.
    pub fn from_rows(costs: &[u64], rows: &[(u64, &[u32])], budget: u64) -> Result<Self> {
        let requirements = costs
            .iter()
            .enumerate()
            .map(|(j, &cost)| Requirement { id: RequirementId(j as u32 + 1), cost })
            .collect();
        let customers = rows
            .iter()
            .enumerate()
            .map(|(i, (profit, wanted))| {
                (
                    Customer { id: CustomerId(i as u32 + 1), profit: *profit },
                    wanted.iter().map(|&r| RequirementId(r)).collect(),
                )
            })
            .collect();
        Instance::new(requirements, customers, budget, "")
    }

    pub fn customers(&self) -> &[Customer] {
        &self.customers
    }

    pub fn requirements(&self) -> &[Requirement] {
        &self.requirements
    }

    /// Number of customers, the scale of the instance.
    pub fn num_customers(&self) -> usize {
        self.customers.len()
    }

    pub fn num_requirements(&self) -> usize {
        self.requirements.len()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    /// Local requirement indices requested by the customer at local index `i`.
    #[inline]
    pub fn requests(&self, i: usize) -> &[u32] {
        self.requests.row(i)
    }

    /// Local customer indices requesting the requirement at local index `j`.
    pub fn requesters(&self, j: usize) -> &[u32] {
        self.requesters.row(j)
    }

    pub fn profit(&self, i: usize) -> u64 {
        self.customers[i].profit
    }

    pub fn cost(&self, j: usize) -> u64 {
        self.requirements[j].cost
    }

    pub fn customer_index(&self, id: CustomerId) -> Option<usize> {
        self.customers.binary_search_by_key(&id, |c| c.id).ok()
    }

    pub fn requirement_index(&self, id: RequirementId) -> Option<usize> {
        self.requirements.binary_search_by_key(&id, |r| r.id).ok()
    }

    /// Requested requirement ids of a customer.
    pub fn request_ids(&self, id: CustomerId) -> Option<Vec<RequirementId>> {
        let i = self.customer_index(id)?;
        Some(self.requests(i).iter().map(|&j| self.requirements[j as usize].id).collect())
    }

    pub fn total_cost(&self) -> u64 {
        self.requirements.iter().map(|r| r.cost).sum()
    }

    pub fn total_profit(&self) -> u64 {
        self.customers.iter().map(|c| c.profit).sum()
    }

    /// Cost of satisfying a single customer on its own.
    pub fn customer_cost(&self, i: usize) -> u64 {
        self.requests(i).iter().map(|&j| self.requirements[j as usize].cost).sum()
    }

    /// Every customer requests at least one requirement, which holds for
    /// any instance that did not come out of a reduction.
    pub fn is_original_form(&self) -> bool {
        (0..self.customers.len()).all(|i| !self.requests(i).is_empty())
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Cost of the union of the requirements requested by the selected
    /// customers (local index bitmap).
    pub fn cost_of_bits(&self, selected: &[bool]) -> u64 {
        let mut covered = vec![false; self.requirements.len()];
        let mut cost = 0;
        for (i, _) in selected.iter().enumerate().filter(|(_, &s)| s) {
            for &j in self.requests(i) {
                let j = j as usize;
                if !covered[j] {
                    covered[j] = true;
                    cost += self.requirements[j].cost;
                }
            }
        }
        cost
    }

    pub fn profit_of_bits(&self, selected: &[bool]) -> u64 {
        selected
            .iter()
            .zip(&self.customers)
            .filter(|(&s, _)| s)
            .map(|(_, c)| c.profit)
            .sum()
    }

    /// Converts a total solution to a local index bitmap.
    pub fn bits_of(&self, x: &Solution) -> Result<Vec<bool>> {
        if x.len() != self.customers.len() {
            return Err(NrpError::InvalidArgument(format!(
                "solution assigns {} customers, instance has {}",
                x.len(),
                self.customers.len()
            )));
        }
        self.customers
            .iter()
            .map(|c| {
                x.get(c.id).ok_or_else(|| {
                    NrpError::InvalidArgument(format!("solution does not assign customer {}", c.id))
                })
            })
            .collect()
    }

    pub fn solution_from_bits(&self, selected: &[bool]) -> Solution {
        debug_assert_eq!(selected.len(), self.customers.len());
        Solution::from_pairs(self.customers.iter().zip(selected).map(|(c, &s)| (c.id, s)))
    }

    /// Cost of the union of requirements requested by the selected customers.
    pub fn solution_cost(&self, x: &Solution) -> Result<u64> {
        Ok(self.cost_of_bits(&self.bits_of(x)?))
    }

    pub fn solution_profit(&self, x: &Solution) -> Result<u64> {
        Ok(self.profit_of_bits(&self.bits_of(x)?))
    }

    pub fn is_feasible(&self, x: &Solution) -> Result<bool> {
        Ok(self.solution_cost(x)? <= self.budget)
    }
}

/// Variable length rows stored back to back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Rows {
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl Rows {
    fn push(&mut self, row: &[u32]) {
        if self.starts.is_empty() {
            self.starts.push(0);
        }
        self.items.extend_from_slice(row);
        self.starts.push(self.items.len() as u32);
    }

    #[inline]
    fn row(&self, i: usize) -> &[u32] {
        &self.items[self.starts[i] as usize..self.starts[i + 1] as usize]
    }
}

/// Plain serialized form of [`Instance`]: requests as requirement ids.
#[derive(Serialize, Deserialize)]
struct InstanceData {
    budget: u64,
    #[serde(default)]
    note: String,
    requirements: Vec<(RequirementId, u64)>,
    customers: Vec<(CustomerId, u64, Vec<RequirementId>)>,
}

impl From<Instance> for InstanceData {
    fn from(inst: Instance) -> Self {
        let customers = inst
            .customers
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let row = inst.requests(i);
                (c.id, c.profit, row.iter().map(|&j| inst.requirements[j as usize].id).collect())
            })
            .collect();
        InstanceData {
            budget: inst.budget,
            note: inst.note,
            requirements: inst.requirements.iter().map(|r| (r.id, r.cost)).collect(),
            customers,
        }
    }
}

impl TryFrom<InstanceData> for Instance {
    type Error = NrpError;

    fn try_from(data: InstanceData) -> Result<Self> {
        Instance::new(
            data.requirements.into_iter().map(|(id, cost)| Requirement { id, cost }).collect(),
            data.customers
                .into_iter()
                .map(|(id, profit, row)| (Customer { id, profit }, row))
                .collect(),
            data.budget,
            data.note,
        )
    }
}

/// A total assignment of customers to selected (`true`) or unselected.
///
/// Equivalent to the set of ordered pairs `(i, p)`; serialized that way.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<(CustomerId, u8)>", into = "Vec<(CustomerId, u8)>")]
pub struct Solution {
    pairs: BTreeMap<CustomerId, bool>,
}

impl Solution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (CustomerId, bool)>) -> Self {
        Solution { pairs: pairs.into_iter().collect() }
    }

    /// Selects exactly `selected` among the customers of `inst`.
    pub fn from_selected(inst: &Instance, selected: &[CustomerId]) -> Self {
        let chosen: BTreeSet<_> = selected.iter().copied().collect();
        Solution::from_pairs(inst.customers().iter().map(|c| (c.id, chosen.contains(&c.id))))
    }

    pub fn all_unselected(inst: &Instance) -> Self {
        Solution::from_pairs(inst.customers().iter().map(|c| (c.id, false)))
    }

    pub fn get(&self, id: CustomerId) -> Option<bool> {
        self.pairs.get(&id).copied()
    }

    pub fn is_selected(&self, id: CustomerId) -> bool {
        self.get(id).unwrap_or(false)
    }

    /// Sets a pair, returning the previous polarity if the customer was
    /// already assigned.
    pub fn insert(&mut self, id: CustomerId, selected: bool) -> Option<bool> {
        self.pairs.insert(id, selected)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (CustomerId, bool)> + '_ {
        self.pairs.iter().map(|(&id, &p)| (id, p))
    }

    pub fn selected(&self) -> impl Iterator<Item = CustomerId> + '_ {
        self.pairs.iter().filter(|(_, &p)| p).map(|(&id, _)| id)
    }

    /// `|X ∩ Y|` over ordered pairs.
    pub fn agreement(&self, other: &Solution) -> usize {
        self.pairs.iter().filter(|(id, p)| other.pairs.get(id) == Some(p)).count()
    }
}

impl From<Vec<(CustomerId, u8)>> for Solution {
    fn from(pairs: Vec<(CustomerId, u8)>) -> Self {
        Solution::from_pairs(pairs.into_iter().map(|(id, p)| (id, p != 0)))
    }
}

impl From<Solution> for Vec<(CustomerId, u8)> {
    fn from(x: Solution) -> Self {
        x.pairs.into_iter().map(|(id, p)| (id, p as u8)).collect()
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (id, p)) in self.pairs().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{})", id.0, p as u8)?;
        }
        f.write_str("}")
    }
}
