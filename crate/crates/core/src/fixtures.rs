//! The seven customer example used throughout the tests and the guide.
//!
//! Requirement costs are `2 5 4 3 8 1 5 2` for `r1..r8`; `r3` precedes `r4`,
//! `r4` precedes `r5` and `r2` precedes both `r6` and `r7`. Profits are
//! `7 2 6 5 4 3 1` for `s1..s7` and the bound is 26.

use crate::dependency::DependentInstance;
use crate::instances::{parse_dependent, parse_instance};
use crate::model::Instance;

pub const WORKED_EXAMPLE: &str = include_str!("../data/worked_example.nrp");

/// The example in simplified form.
pub fn worked_example() -> Instance {
    parse_instance(WORKED_EXAMPLE).expect("bundled example parses")
}

/// The example with its dependency graph.
pub fn worked_example_dependent() -> DependentInstance {
    parse_dependent(WORKED_EXAMPLE).expect("bundled example parses")
}
