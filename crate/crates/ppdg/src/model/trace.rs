//! Node-state traces: the (node, state) event sequence one execution emits.
//! Stored as JSON-Lines with a header line carrying test id and verdict.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::node::Node;
use super::states::NodeState;
use crate::exec::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    pub node: Node,
    pub state: NodeState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeStateTrace {
    pub test_id: String,
    pub verdict: Verdict,
    pub events: Vec<TraceEvent>,
}

impl NodeStateTrace {
    pub fn new(test_id: impl Into<String>, verdict: Verdict) -> Self {
        NodeStateTrace {
            test_id: test_id.into(),
            verdict,
            events: Vec::new(),
        }
    }

    pub fn is_failing(&self) -> bool {
        matches!(self.verdict, Verdict::Fail | Verdict::Crash)
    }

    /// JSON-Lines rendering. Node ids are numeric, so the statement count of
    /// the program the trace belongs to is required.
    pub fn to_jsonl(&self, stmt_count: u32) -> String {
        let mut out = String::new();
        let header = TraceHeader {
            test: self.test_id.clone(),
            verdict: self.verdict,
        };
        out.push_str(&serde_json::to_string(&header).expect("trace header"));
        out.push('\n');
        for ev in &self.events {
            let line = TraceLine {
                node: ev.node.number(stmt_count),
                state: ev.state,
            };
            out.push_str(&serde_json::to_string(&line).expect("trace event"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str, stmt_count: u32) -> Result<Self, TraceFormatError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header_line = lines.next().ok_or(TraceFormatError::Empty)?;
        let header: TraceHeader = serde_json::from_str(header_line)
            .map_err(|e| TraceFormatError::BadHeader(e.to_string()))?;
        let mut trace = NodeStateTrace::new(header.test, header.verdict);
        for (i, line) in lines.enumerate() {
            let ev: TraceLine = serde_json::from_str(line)
                .map_err(|e| TraceFormatError::BadEvent { line: i + 2, message: e.to_string() })?;
            trace.events.push(TraceEvent {
                node: Node::from_number(ev.node, stmt_count),
                state: ev.state,
            });
        }
        Ok(trace)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TraceHeader {
    test: String,
    verdict: Verdict,
}

#[derive(Debug, Serialize, Deserialize)]
struct TraceLine {
    node: u32,
    state: NodeState,
}

#[derive(Debug, Error)]
pub enum TraceFormatError {
    #[error("trace file is empty")]
    Empty,
    #[error("bad trace header: {0}")]
    BadHeader(String),
    #[error("bad trace event at line {line}: {message}")]
    BadEvent { line: usize, message: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_round_trips() {
        let mut trace = NodeStateTrace::new("t1", Verdict::Pass);
        trace.events.push(TraceEvent { node: Node::stmt(1), state: NodeState::Zero });
        trace.events.push(TraceEvent { node: Node::Aux(1), state: NodeState::Pos });
        let text = trace.to_jsonl(3);
        assert!(text.starts_with("{\"test\":\"t1\",\"verdict\":\"PASS\"}"));
        let back = NodeStateTrace::from_jsonl(&text, 3).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn missing_header_is_an_error() {
        assert!(matches!(
            NodeStateTrace::from_jsonl("", 3),
            Err(TraceFormatError::Empty)
        ));
    }
}
