//! Neighbourhood and relational semantics.

pub mod agency;
pub mod batch;
pub mod conditions;
pub mod eval;
pub mod model;
pub mod principles;

pub use agency::{validate_agency_frame, AgencyFrame};
pub use batch::{Batch, Dag};
pub use conditions::{
    check_frame_condition, check_logic_conditions, family_condition, mask_condition, neighbourhood_condition,
};
pub use eval::{
    concept_extension, extensions, formula_holds, holds_in, relational_formula_holds, truth_set,
    valid_in, Structure,
};
pub use model::{DomainMode, Interpretation, Neighbourhood, NeighbourhoodModel, RelationalModel};
pub use principles::{check_principle, InstanceSet};

use crate::syntax::Agent;
use thiserror::Error;

/// Errors raised by model checking.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown concept name `{0}`")]
    UnknownConcept(String),
    #[error("unknown role name `{0}`")]
    UnknownRole(String),
    #[error("unknown individual name `{0}`")]
    UnknownIndividual(String),
    #[error("unknown world {0}")]
    UnknownWorld(usize),
    #[error("agent {agent} is outside 1..={n_agents}")]
    AgentOutOfRange { agent: Agent, n_agents: Agent },
    #[error("interval neighbourhoods over {n_worlds} worlds are too large to expand")]
    IntensionalTooLarge { n_worlds: usize },
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("malformed model JSON: {0}")]
    Json(String),
}
