//! Ranking by lowest conditional probability.
//!
//! A failing trace is processed in order. For each event the probability of
//! the observed state given the current parent configuration is looked up in
//! the learned tables; per node the strictly lowest probability seen is
//! recorded together with the trace index and the full state configuration
//! at that point. Nodes are then ordered ascending by that lowest
//! probability, ties broken by ascending trace index — so the earliest
//! anomaly wins, and a repeated minimum keeps its first occurrence.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{
    Node, NodeState, NodeStateTrace, ParentConfig, Ppdg, RecentStates, TraceError,
};

/// The node's own state plus its parents' states at the ranked event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub node_state: NodeState,
    pub parents: Vec<(Node, Option<NodeState>)>,
}

impl Configuration {
    /// Compact rendering: `self=STATE;parent=STATE;...`, NOT_EXECUTED for
    /// parents that had not run.
    pub fn render(&self, stmt_count: u32) -> String {
        let mut parts = vec![format!("self={}", self.node_state)];
        for (parent, state) in &self.parents {
            let state = state
                .map(|s| s.to_string())
                .unwrap_or_else(|| "NOT_EXECUTED".to_string());
            parts.push(format!("{}={}", parent.number(stmt_count), state));
        }
        parts.join(";")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingEntry {
    pub node: Node,
    pub lowest_prob: f64,
    /// 1-based position in the trace where the minimum was first reached.
    pub trace_index: usize,
    pub configuration: Configuration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    entries: Vec<RankingEntry>,
}

impl Ranking {
    pub fn entries(&self) -> &[RankingEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nodes in rank order.
    pub fn nodes(&self) -> Vec<Node> {
        self.entries.iter().map(|e| e.node).collect()
    }

    /// CSV with columns rank, node, prob, index, configuration.
    pub fn to_csv(&self, stmt_count: u32) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["rank", "node", "prob", "index", "configuration"])
            .expect("csv header");
        for (i, entry) in self.entries.iter().enumerate() {
            writer
                .write_record([
                    (i + 1).to_string(),
                    entry.node.number(stmt_count).to_string(),
                    entry.lowest_prob.to_string(),
                    entry.trace_index.to_string(),
                    entry.configuration.render(stmt_count),
                ])
                .expect("csv row");
        }
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
    }

    pub fn to_json(&self, stmt_count: u32) -> String {
        let rows: Vec<serde_json::Value> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, entry)| {
                let parents: Vec<serde_json::Value> = entry
                    .configuration
                    .parents
                    .iter()
                    .map(|(parent, state)| {
                        serde_json::json!({
                            "parent": parent.number(stmt_count),
                            "state": state,
                        })
                    })
                    .collect();
                serde_json::json!({
                    "rank": i + 1,
                    "node": entry.node.number(stmt_count),
                    "prob": entry.lowest_prob,
                    "index": entry.trace_index,
                    "configuration": {
                        "state": entry.configuration.node_state,
                        "parents": parents,
                    },
                })
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("ranking json")
    }
}

#[derive(Debug, Error)]
pub enum LocalizeError {
    #[error("{0}")]
    Trace(#[from] TraceError),
    #[error("trace `{test}` has verdict {verdict}; ranking applies to failing executions")]
    NotFailing { test: String, verdict: String },
}

pub fn rank_cp(trace: &NodeStateTrace, model: &Ppdg) -> Result<Ranking, LocalizeError> {
    if !trace.is_failing() {
        return Err(LocalizeError::NotFailing {
            test: trace.test_id.clone(),
            verdict: trace.verdict.to_string(),
        });
    }
    model.validate_trace(trace)?;

    let mut best: BTreeMap<Node, RankingEntry> = BTreeMap::new();
    let mut cursor = RecentStates::new();
    for (i, ev) in trace.events.iter().enumerate() {
        let index = i + 1;
        let parents = model.parents_of(ev.node).to_vec();
        let config: ParentConfig = cursor.config_for(&parents);
        let prob = model.query_prob(ev.node, ev.state, &config);

        let lower = best
            .get(&ev.node)
            .map(|entry| prob < entry.lowest_prob)
            .unwrap_or(true);
        if lower {
            best.insert(
                ev.node,
                RankingEntry {
                    node: ev.node,
                    lowest_prob: prob,
                    trace_index: index,
                    configuration: Configuration {
                        node_state: ev.state,
                        parents: parents.iter().copied().zip(config.iter().copied()).collect(),
                    },
                },
            );
        }
        cursor.update(ev.node, ev.state);
    }

    Ok(rank_entries(best.into_values().collect()))
}

/// Final ordering step: ascending by lowest probability, ties by ascending
/// trace index. Exposed separately so rankings can be built from externally
/// supplied per-node probabilities.
pub fn rank_entries(mut entries: Vec<RankingEntry>) -> Ranking {
    entries.sort_by(|a, b| {
        a.lowest_prob
            .total_cmp(&b.lowest_prob)
            .then(a.trace_index.cmp(&b.trace_index))
    });
    Ranking { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Verdict;
    use crate::lang::{parse, SourceProgram};
    use crate::model::{learn_params, TraceEvent};

    fn failing_trace(events: &[(Node, NodeState)]) -> NodeStateTrace {
        let mut t = NodeStateTrace::new("fail", Verdict::Fail);
        t.events = events
            .iter()
            .map(|&(node, state)| TraceEvent { node, state })
            .collect();
        t
    }

    fn entry(node: Node, prob: f64, index: usize) -> RankingEntry {
        RankingEntry {
            node,
            lowest_prob: prob,
            trace_index: index,
            configuration: Configuration {
                node_state: NodeState::Pos,
                parents: Vec::new(),
            },
        }
    }

    #[test]
    fn single_visit_yields_single_entry() {
        let ast = parse(&SourceProgram::new("t", "input a; print(a);")).unwrap();
        let skeleton = crate::model::Ppdg::skeleton_for(&ast);
        let passing = {
            let mut t = NodeStateTrace::new("ok", Verdict::Pass);
            t.events = vec![TraceEvent {
                node: Node::stmt(1),
                state: NodeState::Pos,
            }];
            t
        };
        let model = learn_params(&skeleton, &[passing]).unwrap();
        let ranking = rank_cp(&failing_trace(&[(Node::stmt(1), NodeState::Pos)]), &model).unwrap();
        assert_eq!(ranking.len(), 1);
        assert_eq!(ranking.entries()[0].lowest_prob, 1.0);
        assert_eq!(ranking.entries()[0].trace_index, 1);
    }

    #[test]
    fn ties_rank_the_earlier_index_first() {
        let ranking = rank_entries(vec![
            entry(Node::stmt(4), 0.5, 7),
            entry(Node::stmt(2), 0.5, 3),
        ]);
        assert_eq!(ranking.nodes(), vec![Node::stmt(2), Node::stmt(4)]);
    }

    #[test]
    fn passing_traces_are_rejected() {
        let ast = parse(&SourceProgram::new("t", "input a; print(a);")).unwrap();
        let model = crate::model::Ppdg::skeleton_for(&ast);
        let mut t = failing_trace(&[(Node::stmt(1), NodeState::Pos)]);
        t.verdict = Verdict::Pass;
        assert!(matches!(
            rank_cp(&t, &model),
            Err(LocalizeError::NotFailing { .. })
        ));
    }
}
