//! Instance generators: tight families, co-located lifts, random metrics and
//! the two SAT reductions.

mod cnf;
mod matching;
mod mst;
mod random;
mod tight;

pub use cnf::{CnfError, CnfFormula, Flavor};
pub use matching::{
    isolated_clause_gadget, isolated_connection_gadget, isolated_variable_gadget, reduce_1in3_to_2matching,
    symbolic_cost, verify_forward_2matching, ClauseGadget, ConnectionGadget, GadgetCounts, MatchingReduction, Owner,
    VariableGadget, STATED_COUNTS,
};
pub use mst::{forward_2mst_solution, reduce_3sat_to_2mst, verify_forward_2mst, MstReduction, PathLengths};
pub use random::{gen_random_metric, RandomModel};
pub use tight::{gen_tight_mst, gen_tight_tsp, lift_colocated, TightFamily};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclecover::CoverError;
use crate::instance::InstanceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionMode {
    Paper,
    #[default]
    Compact,
}

impl std::str::FromStr for ReductionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(ReductionMode::Paper),
            "compact" => Ok(ReductionMode::Compact),
            _ => Err(format!("unknown mode {s:?} (paper, compact)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bad lambda {0}: {1}")]
    BadLambda(usize, &'static str),
    #[error("eps must be positive")]
    BadEps,
    #[error("n_pairs must be at least 1")]
    NoPairs,
    #[error("base metric needs at least one city")]
    EmptyBase,
    #[error("formula flavor {got:?} where {want:?} is required")]
    WrongFlavor { got: Flavor, want: Flavor },
    #[error("assignment has {got} values for {want} variables")]
    AssignmentLength { got: usize, want: usize },
    #[error("assignment does not satisfy the formula")]
    AssignmentDoesNotSatisfy,
    #[error("assignment does not make exactly one literal true in every clause")]
    AssignmentNotOneInThree,
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}
