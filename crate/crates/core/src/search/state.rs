use rand::Rng;

use crate::model::Instance;
use crate::seed::SolverRng;

/// A selection of customers with incrementally maintained cost.
///
/// `cover[j]` counts the selected customers requesting requirement `j`, so a
/// flip of customer `i` only touches the requirements of `i`.
#[derive(Clone, Debug)]
pub(crate) struct SelectionState<'a> {
    inst: &'a Instance,
    selected: Vec<bool>,
    cover: Vec<u32>,
    cost: u64,
    profit: u64,
}

impl<'a> SelectionState<'a> {
    pub fn empty(inst: &'a Instance) -> Self {
        SelectionState {
            inst,
            selected: vec![false; inst.num_customers()],
            cover: vec![0; inst.num_requirements()],
            cost: 0,
            profit: 0,
        }
    }

    pub fn from_bits(inst: &'a Instance, bits: &[bool]) -> Self {
        let mut state = Self::empty(inst);
        for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
            state.select(i);
        }
        state
    }

    /// Uniformly random assignment, repaired by dropping random selected
    /// customers until the budget holds.
    pub fn random_start(inst: &'a Instance, rng: &mut SolverRng) -> Self {
        let bits: Vec<bool> = (0..inst.num_customers()).map(|_| rng.gen::<bool>()).collect();
        let mut state = Self::from_bits(inst, &bits);
        state.repair(rng);
        state
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn bits(&self) -> &[bool] {
        &self.selected
    }

    pub fn is_selected(&self, i: usize) -> bool {
        self.selected[i]
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn profit(&self) -> u64 {
        self.profit
    }

    pub fn is_feasible(&self) -> bool {
        self.cost <= self.inst.budget()
    }

    /// Extra cost of selecting the (unselected) customer `i`.
    #[inline]
    pub fn added_cost(&self, i: usize) -> u64 {
        self.inst
            .requests(i)
            .iter()
            .filter(|&&j| self.cover[j as usize] == 0)
            .map(|&j| self.inst.cost(j as usize))
            .sum()
    }

    #[inline]
    pub fn can_add(&self, i: usize) -> bool {
        self.cost + self.added_cost(i) <= self.inst.budget()
    }

    #[inline]
    pub fn select(&mut self, i: usize) {
        debug_assert!(!self.selected[i]);
        self.selected[i] = true;
        for &j in self.inst.requests(i) {
            let j = j as usize;
            if self.cover[j] == 0 {
                self.cost += self.inst.cost(j);
            }
            self.cover[j] += 1;
        }
        self.profit += self.inst.profit(i);
    }

    #[inline]
    pub fn deselect(&mut self, i: usize) {
        debug_assert!(self.selected[i]);
        self.selected[i] = false;
        for &j in self.inst.requests(i) {
            let j = j as usize;
            self.cover[j] -= 1;
            if self.cover[j] == 0 {
                self.cost -= self.inst.cost(j);
            }
        }
        self.profit -= self.inst.profit(i);
    }

    pub fn flip(&mut self, i: usize) {
        if self.selected[i] {
            self.deselect(i)
        } else {
            self.select(i)
        }
    }

    /// Drops uniformly chosen selected customers until feasible.
    pub fn repair(&mut self, rng: &mut SolverRng) {
        if self.is_feasible() {
            return;
        }
        let mut members: Vec<usize> = (0..self.selected.len()).filter(|&i| self.selected[i]).collect();
        while self.cost > self.inst.budget() {
            let i = members.swap_remove(rng.gen_range(0..members.len()));
            self.deselect(i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn incremental_cost_matches_recomputation() {
        let inst = Instance::from_rows(
            &[3, 4, 5, 1],
            &[(10, &[1, 2]), (6, &[2]), (7, &[3, 4]), (2, &[1, 4])],
            9,
        )
        .unwrap();
        let mut rng = rng_from_seed(3);
        let mut state = SelectionState::empty(&inst);
        for step in 0..500 {
            let i = rng.gen_range(0..4);
            state.flip(i);
            assert_eq!(state.cost(), inst.cost_of_bits(state.bits()), "step {step}");
            assert_eq!(state.profit(), inst.profit_of_bits(state.bits()));
        }
        state.repair(&mut rng);
        assert!(state.is_feasible());
    }
}
