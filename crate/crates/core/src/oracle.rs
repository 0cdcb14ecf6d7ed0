//! Exhaustive enumeration for small instances: the optimum, every optimal
//! solution and the exact backbone.

use crate::backbone::{Backbone, BackboneKind};
use crate::error::{NrpError, Result};
use crate::model::{CustomerId, Instance, Solution};
use crate::search::state::SelectionState;

pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub optimum_profit: u64,
    pub exact_backbone: Backbone,
    customers: Vec<CustomerId>,
    /// Optimal assignments as bit masks over local customer indices.
    optimal: Vec<u32>,
}

impl OracleReport {
    pub fn num_optimal(&self) -> usize {
        self.optimal.len()
    }

    pub fn optimal_solutions(&self) -> impl Iterator<Item = Solution> + '_ {
        self.optimal.iter().map(move |&mask| {
            Solution::from_pairs(
                self.customers.iter().enumerate().map(|(i, &id)| (id, mask >> i & 1 == 1)),
            )
        })
    }

    /// Whether every optimal solution selects `id`.
    pub fn always_selects(&self, id: CustomerId) -> bool {
        self.exact_backbone.get(id) == Some(true)
    }
}

pub fn brute_force_oracle(inst: &Instance) -> Result<OracleReport> {
    brute_force_oracle_capped(inst, DEFAULT_ORACLE_CAP)
}

/// Visits all `2^n` assignments in Gray code order, so consecutive
/// assignments differ by one flip and cost is maintained incrementally.
pub fn brute_force_oracle_capped(inst: &Instance, cap: usize) -> Result<OracleReport> {
    let n = inst.num_customers();
    if n > cap || n > 31 {
        return Err(NrpError::Scale { customers: n, cap: cap.min(31) });
    }

    let mut state = SelectionState::empty(inst);
    let mut best = 0u64;
    let mut optimal = vec![0u32];
    let mut mask = 0u32;
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        state.flip(bit);
        mask ^= 1 << bit;
        if state.is_feasible() {
            let p = state.profit();
            if p > best {
                best = p;
                optimal.clear();
                optimal.push(mask);
            } else if p == best {
                optimal.push(mask);
            }
        }
    }

    let all_ones = optimal.iter().fold(u32::MAX, |acc, &m| acc & m);
    let any_ones = optimal.iter().fold(0u32, |acc, &m| acc | m);
    let customers: Vec<CustomerId> = inst.customers().iter().map(|c| c.id).collect();
    let pairs = customers.iter().enumerate().filter_map(|(i, &id)| {
        if all_ones >> i & 1 == 1 {
            Some((id, true))
        } else if any_ones >> i & 1 == 0 {
            Some((id, false))
        } else {
            None
        }
    });
    let exact_backbone = Backbone::from_pairs(BackboneKind::Exact, pairs)?;

    Ok(OracleReport { optimum_profit: best, exact_backbone, customers, optimal })
}
