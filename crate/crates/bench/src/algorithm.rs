//! Every solver behind one configurable value.

use serde::{Deserialize, Serialize};

use nrp_core::bma::{bma_solve, BmaParams, BmaResult};
use nrp_core::search::{
    genetic_algorithm, multi_start_sa, ClimbParams, GaParams, LocalSearch, RunResult, SaParams,
    SampledParams, SearchOperator,
};
use nrp_core::{Instance, NrpError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Algorithm {
    Rs,
    Ffhc(ClimbParams),
    Shc(SampledParams),
    Sa(SaParams),
    Mssa {
        #[serde(default = "default_restarts")]
        restarts: usize,
        #[serde(default)]
        sa: SaParams,
    },
    Ga(GaParams),
    Bma(BmaParams),
}

fn default_restarts() -> usize {
    30
}

/// A run plus, for the multilevel solver, its full trace.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub run: RunResult,
    pub bma: Option<BmaResult>,
}

impl Algorithm {
    pub fn mssa() -> Self {
        Algorithm::Mssa { restarts: default_restarts(), sa: SaParams::default() }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Rs => "rs",
            Algorithm::Ffhc(_) => "ffhc",
            Algorithm::Shc(_) => "shc",
            Algorithm::Sa(_) => "sa",
            Algorithm::Mssa { .. } => "mssa",
            Algorithm::Ga(_) => "ga",
            Algorithm::Bma(_) => "bma",
        }
    }

    pub fn validate(&self) -> Result<(), NrpError> {
        match self {
            Algorithm::Rs => Ok(()),
            Algorithm::Ffhc(p) => p.validate(),
            Algorithm::Shc(p) => p.validate(),
            Algorithm::Sa(p) => p.validate(),
            Algorithm::Mssa { restarts, sa } => {
                if *restarts < 1 {
                    return Err(NrpError::InvalidArgument("MSSA needs at least one restart".into()));
                }
                sa.validate()
            }
            Algorithm::Ga(p) => p.validate(),
            Algorithm::Bma(p) => p.validate(),
        }
    }

    /// The single operator this algorithm runs, if it is one.
    pub fn operator(&self) -> Option<SearchOperator> {
        match self {
            Algorithm::Rs => Some(SearchOperator::Random),
            Algorithm::Ffhc(p) => Some(SearchOperator::FirstFound(*p)),
            Algorithm::Shc(p) => Some(SearchOperator::Sampled(*p)),
            Algorithm::Sa(p) => Some(SearchOperator::Annealing(*p)),
            _ => None,
        }
    }

    pub fn run(&self, inst: &Instance, seed: u64) -> Result<Outcome, NrpError> {
        self.validate()?;
        if let Some(op) = self.operator() {
            return Ok(Outcome { run: op.search(inst, seed), bma: None });
        }
        Ok(match self {
            Algorithm::Mssa { restarts, sa } => {
                Outcome { run: multi_start_sa(inst, *restarts, seed, sa), bma: None }
            }
            Algorithm::Ga(p) => {
                Outcome { run: genetic_algorithm(inst, &GaParams { rng_seed: seed, ..*p }), bma: None }
            }
            Algorithm::Bma(p) => {
                let result = bma_solve(inst, &BmaParams { rng_seed: seed, ..*p })?;
                Outcome { run: result.run_result(), bma: Some(result) }
            }
            _ => unreachable!("single operators handled above"),
        })
    }
}
