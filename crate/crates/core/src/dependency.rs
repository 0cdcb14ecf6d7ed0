//! The dependency form of the problem: a requirement DAG plus direct
//! customer requests, and its conversion to request-incidence form.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{NrpError, Result};
use crate::model::{Customer, CustomerId, Instance, Requirement, RequirementId};

/// Requirement dependencies. An arc `(parent, child)` means `child` cannot
/// ship without `parent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    vertices: Vec<RequirementId>,
    /// Direct parents per vertex, as indices into `vertices`.
    parents: Vec<Vec<usize>>,
}

impl DependencyGraph {
    /// Duplicate arcs are merged. Arcs touching undeclared vertices are model
    /// errors and a cycle is rejected.
    pub fn new(
        vertices: impl IntoIterator<Item = RequirementId>,
        arcs: impl IntoIterator<Item = (RequirementId, RequirementId)>,
    ) -> Result<Self> {
        let vertices: Vec<RequirementId> =
            vertices.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let index = |id: RequirementId| {
            vertices.binary_search(&id).map_err(|_| {
                NrpError::Model(format!("dependency arc references undeclared requirement {id}"))
            })
        };
        let mut parents = vec![BTreeSet::new(); vertices.len()];
        for (parent, child) in arcs {
            let (p, c) = (index(parent)?, index(child)?);
            if p == c {
                return Err(NrpError::Cycle(parent.0));
            }
            parents[c].insert(p);
        }
        let graph = DependencyGraph {
            vertices,
            parents: parents.into_iter().map(|s| s.into_iter().collect()).collect(),
        };
        graph.check_acyclic()?;
        Ok(graph)
    }

    /// Kahn's algorithm over the reversed arcs; any vertex left over lies on
    /// or behind a cycle.
    fn check_acyclic(&self) -> Result<()> {
        let n = self.vertices.len();
        let mut children = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for (c, ps) in self.parents.iter().enumerate() {
            indegree[c] = ps.len();
            for &p in ps {
                children[p].push(c);
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &c in &children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    queue.push(c);
                }
            }
        }
        if seen == n {
            Ok(())
        } else {
            let stuck = (0..n).find(|&v| indegree[v] > 0).expect("a vertex on a cycle");
            Err(NrpError::Cycle(self.vertices[stuck].0))
        }
    }

    pub fn vertices(&self) -> &[RequirementId] {
        &self.vertices
    }

    /// Arcs as `(parent, child)`, sorted by child then parent.
    pub fn arcs(&self) -> impl Iterator<Item = (RequirementId, RequirementId)> + '_ {
        self.parents.iter().enumerate().flat_map(move |(c, ps)| {
            ps.iter().map(move |&p| (self.vertices[p], self.vertices[c]))
        })
    }

    pub fn num_arcs(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    fn index(&self, id: RequirementId) -> Result<usize> {
        self.vertices
            .binary_search(&id)
            .map_err(|_| NrpError::InvalidArgument(format!("unknown requirement {id}")))
    }

    /// Marks every ancestor of the `start` vertices in `mark`.
    fn mark_ancestors(&self, start: impl IntoIterator<Item = usize>, mark: &mut [bool]) {
        let mut stack: Vec<usize> = start.into_iter().collect();
        while let Some(v) = stack.pop() {
            for &p in &self.parents[v] {
                if !mark[p] {
                    mark[p] = true;
                    stack.push(p);
                }
            }
        }
    }

    /// All requirements that reach `r` through one or more arcs. `r` itself
    /// is not included.
    pub fn parents_closure(&self, r: RequirementId) -> Result<BTreeSet<RequirementId>> {
        let v = self.index(r)?;
        let mut mark = vec![false; self.vertices.len()];
        self.mark_ancestors([v], &mut mark);
        Ok(self.collect(&mark))
    }

    /// `set ∪ parents(set)`.
    pub fn closure_of(
        &self,
        set: impl IntoIterator<Item = RequirementId>,
    ) -> Result<BTreeSet<RequirementId>> {
        let mut mark = vec![false; self.vertices.len()];
        let mut start = Vec::new();
        for r in set {
            let v = self.index(r)?;
            mark[v] = true;
            start.push(v);
        }
        self.mark_ancestors(start, &mut mark);
        Ok(self.collect(&mark))
    }

    fn collect(&self, mark: &[bool]) -> BTreeSet<RequirementId> {
        mark.iter().zip(&self.vertices).filter(|(&m, _)| m).map(|(_, &id)| id).collect()
    }
}

/// An instance with explicit requirement dependencies and direct requests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependentInstance {
    requirements: Vec<Requirement>,
    customers: Vec<Customer>,
    graph: DependencyGraph,
    requests: BTreeMap<CustomerId, BTreeSet<RequirementId>>,
    budget: u64,
}

impl DependentInstance {
    pub fn new(
        requirements: Vec<Requirement>,
        arcs: Vec<(RequirementId, RequirementId)>,
        customers: Vec<(Customer, Vec<RequirementId>)>,
        budget: u64,
    ) -> Result<Self> {
        let mut requirements = requirements;
        requirements.sort_by_key(|r| r.id);
        if let Some(w) = requirements.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(NrpError::Model(format!("duplicate requirement id {}", w[0].id)));
        }
        let graph = DependencyGraph::new(requirements.iter().map(|r| r.id), arcs)?;

        let mut plain = Vec::with_capacity(customers.len());
        let mut requests = BTreeMap::new();
        for (customer, wanted) in customers {
            let wanted: BTreeSet<_> = wanted.into_iter().collect();
            if wanted.is_empty() {
                return Err(NrpError::Model(format!(
                    "customer {} has no direct request",
                    customer.id
                )));
            }
            if let Some(r) = wanted.iter().find(|r| graph.vertices.binary_search(r).is_err()) {
                return Err(NrpError::Model(format!(
                    "customer {} requests undeclared requirement {r}",
                    customer.id
                )));
            }
            if requests.insert(customer.id, wanted).is_some() {
                return Err(NrpError::Model(format!("duplicate customer id {}", customer.id)));
            }
            plain.push(customer);
        }
        plain.sort_by_key(|c| c.id);

        Ok(DependentInstance { requirements, customers: plain, graph, requests, budget })
    }

    pub fn requirements(&self) -> &[Requirement] {
        &self.requirements
    }

    pub fn customers(&self) -> &[Customer] {
        &self.customers
    }

    pub fn graph(&self) -> &DependencyGraph {
        &self.graph
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn direct_requests(&self, id: CustomerId) -> Option<&BTreeSet<RequirementId>> {
        self.requests.get(&id)
    }

    /// Direct requests together with all of their ancestors.
    pub fn total_request_set(&self, id: CustomerId) -> Result<BTreeSet<RequirementId>> {
        let direct = self
            .requests
            .get(&id)
            .ok_or_else(|| NrpError::InvalidArgument(format!("unknown customer {id}")))?;
        self.graph.closure_of(direct.iter().copied())
    }

    pub fn total_cost(&self) -> u64 {
        self.requirements.iter().map(|r| r.cost).sum()
    }

    /// Folds the dependencies into the request rows: each customer requests
    /// exactly its total request set.
    pub fn to_simplified(&self) -> Instance {
        let customers = self
            .customers
            .iter()
            .map(|c| {
                let row = self.total_request_set(c.id).expect("customer ids are consistent");
                (*c, row.into_iter().collect())
            })
            .collect();
        Instance::new(self.requirements.clone(), customers, self.budget, "")
            .expect("a validated dependent instance converts cleanly")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(i: u32) -> RequirementId {
        RequirementId(i)
    }

    fn ids(v: &[u32]) -> BTreeSet<RequirementId> {
        v.iter().map(|&i| r(i)).collect()
    }

    /// The arcs of the eight-requirement telecom example.
    fn example_graph() -> DependencyGraph {
        DependencyGraph::new(
            (1..=8).map(r),
            [(r(3), r(4)), (r(4), r(5)), (r(2), r(6)), (r(2), r(7))],
        )
        .unwrap()
    }

    #[test]
    fn closure_of_root_is_empty() {
        assert_eq!(example_graph().parents_closure(r(1)).unwrap(), ids(&[]));
    }

    #[test]
    fn closure_of_direct_child() {
        assert_eq!(example_graph().parents_closure(r(6)).unwrap(), ids(&[2]));
    }

    #[test]
    fn closure_follows_chains() {
        assert_eq!(example_graph().parents_closure(r(5)).unwrap(), ids(&[3, 4]));
    }

    #[test]
    fn closure_of_unknown_requirement() {
        assert!(matches!(
            example_graph().parents_closure(r(9)),
            Err(NrpError::InvalidArgument(_))
        ));
    }

    #[test]
    fn cycle_is_rejected() {
        let err = DependencyGraph::new((1..=3).map(r), [(r(1), r(2)), (r(2), r(3)), (r(3), r(1))])
            .unwrap_err();
        assert!(matches!(err, NrpError::Cycle(_)));
        assert!(matches!(DependencyGraph::new([r(1)], [(r(1), r(1))]), Err(NrpError::Cycle(1))));
    }

    #[test]
    fn dangling_arc_is_rejected() {
        assert!(matches!(DependencyGraph::new([r(1)], [(r(1), r(2))]), Err(NrpError::Model(_))));
    }

    #[test]
    fn duplicate_arcs_merge() {
        let g = DependencyGraph::new((1..=2).map(r), [(r(1), r(2)), (r(1), r(2))]).unwrap();
        assert_eq!(g.num_arcs(), 1);
    }

    fn chain(request: u32) -> DependentInstance {
        DependentInstance::new(
            (1..=3).map(|i| Requirement { id: r(i), cost: i as u64 }).collect(),
            vec![(r(1), r(2)), (r(2), r(3))],
            vec![(Customer { id: CustomerId(1), profit: 5 }, vec![r(request)])],
            10,
        )
        .unwrap()
    }

    #[test]
    fn chain_closure_in_simplified_row() {
        let inst = chain(3).to_simplified();
        assert_eq!(inst.request_ids(CustomerId(1)).unwrap(), vec![r(1), r(2), r(3)]);
        assert_eq!(inst.budget(), 10);
    }

    #[test]
    fn root_request_stays_alone() {
        assert_eq!(chain(1).total_request_set(CustomerId(1)).unwrap(), ids(&[1]));
    }

    #[test]
    fn customer_without_requests_is_rejected() {
        let err = DependentInstance::new(
            vec![Requirement { id: r(1), cost: 1 }],
            vec![],
            vec![(Customer { id: CustomerId(1), profit: 1 }, vec![])],
            1,
        )
        .unwrap_err();
        assert!(matches!(err, NrpError::Model(_)));
    }

    #[test]
    fn unknown_customer() {
        assert!(matches!(
            chain(1).total_request_set(CustomerId(9)),
            Err(NrpError::InvalidArgument(_))
        ));
    }
}
