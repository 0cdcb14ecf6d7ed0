//! The Next Release Problem: choose the customers whose requests fit a
//! development budget so that their total profit is maximal.
//!
//! The crate provides the instance model with requirement dependencies,
//! four local search operators plus multi-start annealing and a genetic
//! algorithm, backbone based instance reduction, the multilevel solver
//! built on it, an exhaustive oracle for small instances, and instance
//! generation, mining and file handling.
//!
//! ```
//! use nrp_core::bma::{bma_solve, BmaParams};
//! use nrp_core::fixtures::worked_example;
//!
//! let inst = worked_example();
//! let result = bma_solve(&inst, &BmaParams { beta: 3, ..BmaParams::default() }).unwrap();
//! assert!(result.cost <= inst.budget());
//! assert_eq!(result.solution.len(), inst.num_customers());
//! ```

pub mod backbone;
pub mod bma;
pub mod dependency;
mod error;
pub mod fixtures;
pub mod instances;
pub mod model;
pub mod oracle;
pub mod search;
pub mod seed;

pub use error::{NrpError, Result};
pub use model::{Customer, CustomerId, Instance, Requirement, RequirementId, Solution};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    pub mod model {}
    #[doc = include_str!("../../../book/src/local-search.md")]
    pub mod local_search {}
    #[doc = include_str!("../../../book/src/backbones.md")]
    pub mod backbones {}
    #[doc = include_str!("../../../book/src/multilevel.md")]
    pub mod multilevel {}
    #[doc = include_str!("../../../book/src/instances.md")]
    pub mod instances {}
}
