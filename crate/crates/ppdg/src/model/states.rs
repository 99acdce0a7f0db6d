//! Discrete abstract states. Predicates take their branch outcome; value
//! nodes (assignments, prints) abstract the computed integer; ENTRY has the
//! single state RUN; aux nodes inherit the space of the statement they
//! shadow. States of a node are mutually exclusive and cover every
//! observable execution.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::node::Node;
use super::transform::TransformedPdg;
use crate::lang::{Ast, StmtKind};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum NodeState {
    #[serde(rename = "TRUE")]
    True,
    #[serde(rename = "FALSE")]
    False,
    #[serde(rename = "NEG")]
    Neg,
    #[serde(rename = "ZERO")]
    Zero,
    #[serde(rename = "POS")]
    Pos,
    #[serde(rename = "RUN")]
    Run,
}

impl std::fmt::Display for NodeState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NodeState::True => "TRUE",
            NodeState::False => "FALSE",
            NodeState::Neg => "NEG",
            NodeState::Zero => "ZERO",
            NodeState::Pos => "POS",
            NodeState::Run => "RUN",
        };
        f.write_str(s)
    }
}

/// How concrete integer values map to abstract states. `Sign` is the default
/// policy; the enum leaves room for alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[non_exhaustive]
pub enum ValuePolicy {
    #[default]
    Sign,
}

impl ValuePolicy {
    pub fn states(&self) -> &'static [NodeState] {
        match self {
            ValuePolicy::Sign => &[NodeState::Neg, NodeState::Zero, NodeState::Pos],
        }
    }

    pub fn abstract_value(&self, value: i64) -> NodeState {
        match self {
            ValuePolicy::Sign => match value.signum() {
                -1 => NodeState::Neg,
                0 => NodeState::Zero,
                _ => NodeState::Pos,
            },
        }
    }
}

pub const PREDICATE_STATES: [NodeState; 2] = [NodeState::True, NodeState::False];

/// Per-node state spaces of a transformed PDG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpaces {
    spaces: BTreeMap<Node, Vec<NodeState>>,
    policy: ValuePolicy,
}

impl StateSpaces {
    pub fn assign(tpdg: &TransformedPdg, ast: &Ast, policy: ValuePolicy) -> StateSpaces {
        let mut spaces = BTreeMap::new();
        spaces.insert(Node::Entry, vec![NodeState::Run]);
        for stmt in ast.statements() {
            let states = match stmt.kind {
                StmtKind::If { .. } | StmtKind::While { .. } => PREDICATE_STATES.to_vec(),
                StmtKind::Assign { .. } | StmtKind::Print { .. } => policy.states().to_vec(),
            };
            spaces.insert(Node::Stmt(stmt.id), states);
        }
        for (aux_node, source) in tpdg.aux_nodes() {
            let shadowed = spaces
                .get(&Node::Stmt(source.source))
                .expect("aux shadows an existing statement")
                .clone();
            spaces.insert(aux_node, shadowed);
        }
        StateSpaces { spaces, policy }
    }

    pub(crate) fn from_raw(spaces: BTreeMap<Node, Vec<NodeState>>, policy: ValuePolicy) -> Self {
        StateSpaces { spaces, policy }
    }

    pub fn policy(&self) -> ValuePolicy {
        self.policy
    }

    pub fn states_of(&self, node: Node) -> Option<&[NodeState]> {
        self.spaces.get(&node).map(|v| v.as_slice())
    }

    pub fn contains(&self, node: Node, state: NodeState) -> bool {
        self.states_of(node).is_some_and(|s| s.contains(&state))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Node, &Vec<NodeState>)> {
        self.spaces.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::pdg_for;
    use crate::lang::{parse, SourceProgram};
    use crate::model::transform_pdg;

    fn spaces_of(text: &str) -> (TransformedPdg, StateSpaces) {
        let ast = parse(&SourceProgram::new("t", text)).unwrap();
        let tpdg = transform_pdg(&pdg_for(&ast));
        let spaces = StateSpaces::assign(&tpdg, &ast, ValuePolicy::Sign);
        (tpdg, spaces)
    }

    #[test]
    fn predicates_get_branch_states_and_values_get_signs() {
        let (_, spaces) = spaces_of("input n; x = n; while (x > 0) { x = x - 1; } print(x);");
        assert_eq!(
            spaces.states_of(Node::stmt(2)),
            Some(&PREDICATE_STATES[..])
        );
        assert_eq!(
            spaces.states_of(Node::stmt(1)),
            Some(&[NodeState::Neg, NodeState::Zero, NodeState::Pos][..])
        );
        assert_eq!(spaces.states_of(Node::Entry), Some(&[NodeState::Run][..]));
    }

    #[test]
    fn aux_nodes_inherit_the_shadowed_space() {
        let (tpdg, spaces) = spaces_of("n = 2; while (n > 0) { n = n - 1; }");
        for (aux_node, source) in tpdg.aux_nodes() {
            assert_eq!(
                spaces.states_of(aux_node),
                spaces.states_of(Node::Stmt(source.source))
            );
        }
    }

    #[test]
    fn sign_abstraction_partitions_the_integers() {
        let policy = ValuePolicy::Sign;
        assert_eq!(policy.abstract_value(-7), NodeState::Neg);
        assert_eq!(policy.abstract_value(0), NodeState::Zero);
        assert_eq!(policy.abstract_value(3), NodeState::Pos);
    }
}
