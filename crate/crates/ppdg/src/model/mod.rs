//! The probabilistic dependence model: the transformed (acyclic) dependence
//! graph, discrete per-node state spaces, node-state traces, and conditional
//! probability tables learned by counting.

mod learn;
mod node;
mod states;
mod trace;
mod transform;

pub use learn::{
    learn_params, CountsMap, ModelFormatError, ParentConfig, Ppdg, RecentStates, Smoothing,
    TraceError,
};
pub use node::Node;
pub use states::{NodeState, StateSpaces, ValuePolicy, PREDICATE_STATES};
pub use trace::{NodeStateTrace, TraceEvent, TraceFormatError};
pub use transform::{transform_pdg, AuxSource, EdgeKind, TransformedPdg};
