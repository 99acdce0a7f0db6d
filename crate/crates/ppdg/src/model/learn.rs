//! Parameter learning and probability queries.
//!
//! Counting follows the batch scheme: events are processed in trace order,
//! and each event increments the cell for its node's current state under the
//! current configuration of its parents. A parent's "current" state is the
//! most recent state it assumed earlier in the same trace, or NOT_EXECUTED
//! if it has not occurred yet; ENTRY always counts as RUN. A parentless node
//! has the empty configuration, so its cell is the plain marginal count.
//! Probabilities are relative frequencies: the count of (state, config)
//! divided by the total count of the config. A configuration that was never
//! observed during training queries as probability 0.0 unless add-one
//! smoothing is enabled.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::node::Node;
use super::states::{NodeState, StateSpaces, ValuePolicy};
use super::trace::NodeStateTrace;
use super::transform::{AuxSource, EdgeKind, TransformedPdg};
use crate::graph::Branch;
use crate::lang::{Ast, StmtId};

/// Parent states aligned with the node's sorted parent list; `None` is the
/// distinguished NOT_EXECUTED state.
pub type ParentConfig = Vec<Option<NodeState>>;

pub type CountsMap = BTreeMap<Node, BTreeMap<ParentConfig, BTreeMap<NodeState, u64>>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothing {
    #[default]
    Off,
    Laplace,
}

impl std::str::FromStr for Smoothing {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(Smoothing::Off),
            "laplace" => Ok(Smoothing::Laplace),
            other => Err(format!("unknown smoothing `{other}` (expected off|laplace)")),
        }
    }
}

/// Most-recent-state tracker shared by learning and ranking.
#[derive(Debug, Default, Clone)]
pub struct RecentStates {
    latest: BTreeMap<Node, NodeState>,
}

impl RecentStates {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, node: Node, state: NodeState) {
        self.latest.insert(node, state);
    }

    pub fn get(&self, node: Node) -> Option<NodeState> {
        self.latest.get(&node).copied()
    }

    /// Configuration of the given parents under this cursor.
    pub fn config_for(&self, parents: &[Node]) -> ParentConfig {
        parents
            .iter()
            .map(|&p| match p {
                Node::Entry => Some(NodeState::Run),
                other => self.get(other),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("trace `{test}`: node {node} is not part of the model")]
    UnknownNode { test: String, node: u32 },
    #[error("trace `{test}`: state {state} is not in the state space of node {node}")]
    UnknownState { test: String, node: u32, state: NodeState },
    #[error("trace `{test}` is failing; parameters are learned from passing executions only")]
    FailingTrace { test: String },
}

/// The learned model: transformed dependence graph, state spaces, and the
/// count tables the conditional probabilities are read from.
#[derive(Debug, Clone, PartialEq)]
pub struct Ppdg {
    program: String,
    skeleton: TransformedPdg,
    spaces: StateSpaces,
    parents: BTreeMap<Node, Vec<Node>>,
    counts: CountsMap,
    smoothing: Smoothing,
}

impl Ppdg {
    /// Zero-count model over a transformed PDG.
    pub fn new(
        program: impl Into<String>,
        skeleton: TransformedPdg,
        spaces: StateSpaces,
        smoothing: Smoothing,
    ) -> Ppdg {
        let parents = skeleton
            .nodes()
            .into_iter()
            .map(|n| (n, skeleton.parents(n)))
            .collect();
        Ppdg {
            program: program.into(),
            skeleton,
            spaces,
            parents,
            counts: BTreeMap::new(),
            smoothing,
        }
    }

    /// Runs the whole analysis pipeline for a program and returns the
    /// zero-count model.
    pub fn skeleton_for(ast: &Ast) -> Ppdg {
        Self::skeleton_with(ast, ValuePolicy::Sign, Smoothing::Off)
    }

    pub fn skeleton_with(ast: &Ast, policy: ValuePolicy, smoothing: Smoothing) -> Ppdg {
        let pdg = crate::graph::pdg_for(ast);
        let tpdg = super::transform_pdg(&pdg);
        let spaces = StateSpaces::assign(&tpdg, ast, policy);
        Ppdg::new(ast.name.clone(), tpdg, spaces, smoothing)
    }

    pub fn program(&self) -> &str {
        &self.program
    }

    pub fn skeleton(&self) -> &TransformedPdg {
        &self.skeleton
    }

    pub fn spaces(&self) -> &StateSpaces {
        &self.spaces
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    pub fn parents_of(&self, node: Node) -> &[Node] {
        self.parents.get(&node).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn raw_counts(&self) -> &CountsMap {
        &self.counts
    }

    pub fn total_events(&self) -> u64 {
        self.counts
            .values()
            .flat_map(|per_config| per_config.values())
            .flat_map(|per_state| per_state.values())
            .sum()
    }

    pub fn validate_trace(&self, trace: &NodeStateTrace) -> Result<(), TraceError> {
        for ev in &trace.events {
            if !self.skeleton.contains(ev.node) {
                return Err(TraceError::UnknownNode {
                    test: trace.test_id.clone(),
                    node: self.skeleton.node_number(ev.node),
                });
            }
            if !self.spaces.contains(ev.node, ev.state) {
                return Err(TraceError::UnknownState {
                    test: trace.test_id.clone(),
                    node: self.skeleton.node_number(ev.node),
                    state: ev.state,
                });
            }
        }
        Ok(())
    }

    fn absorb_trace(&mut self, trace: &NodeStateTrace) {
        let mut cursor = RecentStates::new();
        for ev in &trace.events {
            let config = cursor.config_for(self.parents_of(ev.node));
            *self
                .counts
                .entry(ev.node)
                .or_default()
                .entry(config)
                .or_default()
                .entry(ev.state)
                .or_insert(0) += 1;
            cursor.update(ev.node, ev.state);
        }
    }

    /// Conditional probability of `state` at `node` under `config`. Returns
    /// 0.0 for configurations never observed in training (no smoothing), or
    /// the add-one estimate when Laplace smoothing is on.
    pub fn query_prob(&self, node: Node, state: NodeState, config: &ParentConfig) -> f64 {
        let cell = self.counts.get(&node).and_then(|per| per.get(config));
        let count = cell
            .and_then(|states| states.get(&state).copied())
            .unwrap_or(0);
        let denom: u64 = cell.map(|states| states.values().sum()).unwrap_or(0);
        match self.smoothing {
            Smoothing::Off => {
                if denom == 0 {
                    0.0
                } else {
                    count as f64 / denom as f64
                }
            }
            Smoothing::Laplace => {
                let cardinality = self
                    .spaces
                    .states_of(node)
                    .map(|s| s.len() as u64)
                    .unwrap_or(1);
                (count + 1) as f64 / (denom + cardinality) as f64
            }
        }
    }

    /// All observed (config, state, count) cells of a node.
    pub fn cells_of(
        &self,
        node: Node,
    ) -> impl Iterator<Item = (&ParentConfig, NodeState, u64)> {
        self.counts
            .get(&node)
            .into_iter()
            .flat_map(|per_config| {
                per_config.iter().flat_map(|(config, states)| {
                    states.iter().map(move |(&state, &count)| (config, state, count))
                })
            })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PpdgDoc::from(self)).expect("model serialization")
    }

    pub fn from_json(text: &str) -> Result<Ppdg, ModelFormatError> {
        let doc: PpdgDoc =
            serde_json::from_str(text).map_err(|e| ModelFormatError::Json(e.to_string()))?;
        doc.try_into()
    }
}

/// Learns conditional probability tables from passing traces. Every trace is
/// validated against the skeleton before any counting happens; a failing or
/// nonconforming trace rejects the whole batch.
pub fn learn_params(skeleton: &Ppdg, traces: &[NodeStateTrace]) -> Result<Ppdg, TraceError> {
    for trace in traces {
        skeleton.validate_trace(trace)?;
        if trace.is_failing() {
            return Err(TraceError::FailingTrace {
                test: trace.test_id.clone(),
            });
        }
    }
    let mut model = skeleton.clone();
    for trace in traces {
        model.absorb_trace(trace);
    }
    Ok(model)
}

#[derive(Debug, Error)]
pub enum ModelFormatError {
    #[error("invalid model JSON: {0}")]
    Json(String),
    #[error("inconsistent model: {0}")]
    Inconsistent(String),
}

// ---------------------------------------------------------------------------
// JSON document form

#[derive(Debug, Serialize, Deserialize)]
struct PpdgDoc {
    program: String,
    #[serde(rename = "stmtCount")]
    stmt_count: u32,
    policy: ValuePolicy,
    smoothing: Smoothing,
    skeleton: SkeletonDoc,
    #[serde(rename = "stateSpaces")]
    state_spaces: BTreeMap<String, Vec<NodeState>>,
    counts: Vec<CountDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SkeletonDoc {
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeDoc {
    id: u32,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    var: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    src: u32,
    dst: u32,
    kind: String,
    label: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct CountDoc {
    node: u32,
    config: Vec<ConfigEntryDoc>,
    states: BTreeMap<NodeState, u64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ConfigEntryDoc {
    parent: u32,
    state: Option<NodeState>,
}

impl From<&Ppdg> for PpdgDoc {
    fn from(model: &Ppdg) -> Self {
        let sc = model.skeleton.stmt_count();
        let nodes = model
            .skeleton
            .nodes()
            .into_iter()
            .map(|n| {
                let (kind, source, var) = match n {
                    Node::Entry => ("entry", None, None),
                    Node::Stmt(_) => ("stmt", None, None),
                    Node::Aux(_) => {
                        let aux = model.skeleton.aux_source(n).expect("aux node");
                        ("aux", Some(aux.source.0), Some(aux.var.clone()))
                    }
                };
                NodeDoc {
                    id: n.number(sc),
                    kind: kind.to_string(),
                    source,
                    var,
                }
            })
            .collect();
        let edges = model
            .skeleton
            .edges()
            .map(|(src, dst, kind)| EdgeDoc {
                src: src.number(sc),
                dst: dst.number(sc),
                kind: match kind {
                    EdgeKind::Control(_) => "control".into(),
                    EdgeKind::Data(_) => "data".into(),
                    EdgeKind::Aux(_) => "aux".into(),
                },
                label: kind.label(),
            })
            .collect();
        let state_spaces = model
            .spaces
            .iter()
            .map(|(n, states)| (n.number(sc).to_string(), states.clone()))
            .collect();
        let counts = model
            .counts
            .iter()
            .map(|(n, per_config)| {
                let parents = model.parents_of(*n);
                per_config.iter().map(move |(config, states)| CountDoc {
                    node: n.number(sc),
                    config: parents
                        .iter()
                        .zip(config.iter())
                        .map(|(p, s)| ConfigEntryDoc {
                            parent: p.number(sc),
                            state: *s,
                        })
                        .collect(),
                    states: states.clone(),
                })
            })
            .flatten()
            .collect();
        PpdgDoc {
            program: model.program.clone(),
            stmt_count: sc,
            policy: model.spaces.policy(),
            smoothing: model.smoothing,
            skeleton: SkeletonDoc { nodes, edges },
            state_spaces,
            counts,
        }
    }
}

impl TryFrom<PpdgDoc> for Ppdg {
    type Error = ModelFormatError;

    fn try_from(doc: PpdgDoc) -> Result<Self, Self::Error> {
        let sc = doc.stmt_count;
        let mut aux = BTreeMap::new();
        for n in &doc.skeleton.nodes {
            if n.kind == "aux" {
                let node = Node::from_number(n.id, sc);
                let Node::Aux(k) = node else {
                    return Err(ModelFormatError::Inconsistent(format!(
                        "node {} marked aux but numbered as a statement",
                        n.id
                    )));
                };
                aux.insert(
                    k,
                    AuxSource {
                        source: StmtId(n.source.ok_or_else(|| {
                            ModelFormatError::Inconsistent(format!("aux node {} lacks source", n.id))
                        })?),
                        var: n.var.clone().ok_or_else(|| {
                            ModelFormatError::Inconsistent(format!("aux node {} lacks var", n.id))
                        })?,
                    },
                );
            }
        }
        let mut edges = std::collections::BTreeSet::new();
        for e in &doc.skeleton.edges {
            let kind = match e.kind.as_str() {
                "control" => EdgeKind::Control(if e.label == "T" {
                    Branch::True
                } else {
                    Branch::False
                }),
                "data" => EdgeKind::Data(e.label.clone()),
                "aux" => EdgeKind::Aux(e.label.clone()),
                other => {
                    return Err(ModelFormatError::Inconsistent(format!(
                        "unknown edge kind `{other}`"
                    )))
                }
            };
            edges.insert((Node::from_number(e.src, sc), Node::from_number(e.dst, sc), kind));
        }
        let skeleton = TransformedPdg::from_parts(sc, edges, aux);

        let mut spaces = BTreeMap::new();
        for (key, states) in &doc.state_spaces {
            let id: u32 = key.parse().map_err(|_| {
                ModelFormatError::Inconsistent(format!("bad state-space key `{key}`"))
            })?;
            spaces.insert(Node::from_number(id, sc), states.clone());
        }
        let spaces = StateSpaces::from_raw(spaces, doc.policy);

        let mut model = Ppdg::new(doc.program, skeleton, spaces, doc.smoothing);
        for cell in &doc.counts {
            let node = Node::from_number(cell.node, sc);
            let parents = model.parents_of(node).to_vec();
            let declared: Vec<Node> = cell
                .config
                .iter()
                .map(|c| Node::from_number(c.parent, sc))
                .collect();
            if declared != parents {
                return Err(ModelFormatError::Inconsistent(format!(
                    "count cell for node {} lists parents {:?} but the skeleton has {:?}",
                    cell.node, declared, parents
                )));
            }
            let config: ParentConfig = cell.config.iter().map(|c| c.state).collect();
            model
                .counts
                .entry(node)
                .or_default()
                .insert(config, cell.states.clone());
        }
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Verdict;
    use crate::lang::{parse, SourceProgram};
    use crate::model::TraceEvent;

    fn trace(test: &str, events: &[(Node, NodeState)]) -> NodeStateTrace {
        let mut t = NodeStateTrace::new(test, Verdict::Pass);
        t.events = events
            .iter()
            .map(|&(node, state)| TraceEvent { node, state })
            .collect();
        t
    }

    /// print(a); print(b); -- two statements conditioned only on ENTRY.
    fn tiny_model() -> Ppdg {
        let ast = parse(&SourceProgram::new("tiny", "input a; input b; print(a); print(b);"))
            .unwrap();
        Ppdg::skeleton_for(&ast)
    }

    #[test]
    fn marginal_probability_is_the_relative_frequency() {
        let model = tiny_model();
        // 10 observations of node 1: 6 POS, 4 NEG.
        let traces: Vec<NodeStateTrace> = (0..10)
            .map(|i| {
                let state = if i < 6 { NodeState::Pos } else { NodeState::Neg };
                trace(&format!("t{i}"), &[(Node::stmt(1), state)])
            })
            .collect();
        let learned = learn_params(&model, &traces).unwrap();
        let config = vec![Some(NodeState::Run)];
        assert_eq!(learned.query_prob(Node::stmt(1), NodeState::Pos, &config), 0.6);
        assert_eq!(learned.query_prob(Node::stmt(1), NodeState::Neg, &config), 0.4);
        assert_eq!(learned.query_prob(Node::stmt(1), NodeState::Zero, &config), 0.0);
    }

    #[test]
    fn conditional_probability_counts_parent_configurations() {
        // x = a (1); y = x (2): node 2 has parents {ENTRY? no...} data edge 1->2.
        let ast =
            parse(&SourceProgram::new("t", "input a; x = a; y = x;")).unwrap();
        let model = Ppdg::skeleton_for(&ast);
        // Four traces where node 1 is POS; node 2 is POS 3 times, ZERO once.
        // (States are synthetic; learning only sees the events.)
        let mut traces = Vec::new();
        for i in 0..4 {
            let second = if i < 3 { NodeState::Pos } else { NodeState::Zero };
            traces.push(trace(
                &format!("t{i}"),
                &[(Node::stmt(1), NodeState::Pos), (Node::stmt(2), second)],
            ));
        }
        let learned = learn_params(&model, &traces).unwrap();
        let parents = learned.parents_of(Node::stmt(2)).to_vec();
        // Parents: ENTRY (control) and node 1 (data).
        assert_eq!(parents, vec![Node::Entry, Node::stmt(1)]);
        let config = vec![Some(NodeState::Run), Some(NodeState::Pos)];
        assert_eq!(learned.query_prob(Node::stmt(2), NodeState::Pos, &config), 0.75);
    }

    #[test]
    fn unseen_configuration_queries_as_zero() {
        let model = tiny_model();
        let learned = learn_params(&model, &[trace("t0", &[(Node::stmt(1), NodeState::Pos)])])
            .unwrap();
        let config = vec![Some(NodeState::Run)];
        assert_eq!(learned.query_prob(Node::stmt(2), NodeState::Pos, &config), 0.0);
    }

    #[test]
    fn laplace_smoothing_gives_unseen_configs_uniform_mass() {
        let ast = parse(&SourceProgram::new("t", "input a; print(a);")).unwrap();
        let model = Ppdg::skeleton_with(&ast, ValuePolicy::Sign, Smoothing::Laplace);
        let config = vec![Some(NodeState::Run)];
        let p = model.query_prob(Node::stmt(1), NodeState::Pos, &config);
        assert!((p - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn failing_traces_are_rejected() {
        let model = tiny_model();
        let mut t = trace("bad", &[(Node::stmt(1), NodeState::Pos)]);
        t.verdict = Verdict::Fail;
        assert!(matches!(
            learn_params(&model, &[t]),
            Err(TraceError::FailingTrace { .. })
        ));
    }

    #[test]
    fn events_for_unknown_nodes_are_rejected() {
        let model = tiny_model();
        let t = trace("bad", &[(Node::stmt(9), NodeState::Pos)]);
        assert!(matches!(
            learn_params(&model, &[t]),
            Err(TraceError::UnknownNode { .. })
        ));
    }

    #[test]
    fn states_outside_the_space_are_rejected() {
        let model = tiny_model();
        let t = trace("bad", &[(Node::stmt(1), NodeState::True)]);
        assert!(matches!(
            learn_params(&model, &[t]),
            Err(TraceError::UnknownState { .. })
        ));
    }

    #[test]
    fn json_round_trips_the_model() {
        let ast = parse(&SourceProgram::new("t", "n = 2; while (n > 0) { n = n - 1; }")).unwrap();
        let model = Ppdg::skeleton_for(&ast);
        let traces = vec![trace(
            "t0",
            &[
                (Node::stmt(1), NodeState::Pos),
                (Node::stmt(2), NodeState::True),
                (Node::stmt(3), NodeState::Pos),
            ],
        )];
        let learned = learn_params(&model, &traces).unwrap();
        let json = learned.to_json();
        let back = Ppdg::from_json(&json).unwrap();
        assert_eq!(back, learned);
    }
}
