//! Statement suspiciousness from coverage tallies:
//! `failed(s) / (passed(s) + failed(s))`, where failed/passed count the test
//! cases whose trace covered the statement. Statements never covered score 0.

use std::collections::BTreeMap;

use crate::exec::ExecutionResult;
use crate::lang::StmtId;
use crate::model::Node;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbiRow {
    pub failed: u32,
    pub passed: u32,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SbiScores {
    rows: BTreeMap<StmtId, SbiRow>,
}

impl SbiScores {
    pub fn row(&self, stmt: StmtId) -> Option<&SbiRow> {
        self.rows.get(&stmt)
    }

    pub fn score(&self, stmt: StmtId) -> f64 {
        self.rows.get(&stmt).map(|r| r.score).unwrap_or(0.0)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&StmtId, &SbiRow)> {
        self.rows.iter()
    }

    /// Statements ordered most-suspicious first; ties broken by ascending id.
    pub fn ranked(&self) -> Vec<StmtId> {
        let mut ids: Vec<StmtId> = self.rows.keys().copied().collect();
        ids.sort_by(|a, b| {
            self.rows[b]
                .score
                .total_cmp(&self.rows[a].score)
                .then(a.cmp(b))
        });
        ids
    }

    /// CSV with the shared ranking columns; index and configuration stay
    /// empty for coverage scores.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["rank", "node", "score", "index", "configuration"])
            .expect("csv header");
        for (i, stmt) in self.ranked().into_iter().enumerate() {
            let row = &self.rows[&stmt];
            writer
                .write_record([
                    (i + 1).to_string(),
                    stmt.to_string(),
                    row.score.to_string(),
                    String::new(),
                    String::new(),
                ])
                .expect("csv row");
        }
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .ranked()
            .into_iter()
            .enumerate()
            .map(|(i, stmt)| {
                let row = &self.rows[&stmt];
                serde_json::json!({
                    "rank": i + 1,
                    "node": stmt.0,
                    "score": row.score,
                    "failed": row.failed,
                    "passed": row.passed,
                })
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("scores json")
    }
}

pub fn sbi_scores(results: &[ExecutionResult], stmt_count: u32) -> SbiScores {
    let mut rows: BTreeMap<StmtId, SbiRow> = (1..=stmt_count)
        .map(|i| {
            (
                StmtId(i),
                SbiRow {
                    failed: 0,
                    passed: 0,
                    score: 0.0,
                },
            )
        })
        .collect();

    for result in results {
        let covered: std::collections::BTreeSet<StmtId> = result
            .trace
            .events
            .iter()
            .filter_map(|e| match e.node {
                Node::Stmt(id) => Some(id),
                _ => None,
            })
            .collect();
        for stmt in covered {
            let row = rows.get_mut(&stmt).expect("trace statement within program");
            if result.verdict.is_failing() {
                row.failed += 1;
            } else {
                row.passed += 1;
            }
        }
    }

    for row in rows.values_mut() {
        let denom = row.failed + row.passed;
        row.score = if denom == 0 {
            0.0
        } else {
            f64::from(row.failed) / f64::from(denom)
        };
    }
    SbiScores { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::{ExecutionResult, Verdict};
    use crate::model::{NodeStateTrace, NodeState, TraceEvent};

    fn result(verdict: Verdict, covered: &[u32]) -> ExecutionResult {
        let mut trace = NodeStateTrace::new("t", verdict);
        trace.events = covered
            .iter()
            .map(|&i| TraceEvent {
                node: Node::stmt(i),
                state: NodeState::Pos,
            })
            .collect();
        ExecutionResult {
            output: Vec::new(),
            verdict,
            trace,
            step_count: 0,
        }
    }

    #[test]
    fn half_failing_coverage_scores_one_half() {
        let results = vec![
            result(Verdict::Fail, &[1]),
            result(Verdict::Fail, &[1]),
            result(Verdict::Pass, &[1]),
            result(Verdict::Pass, &[1]),
        ];
        let scores = sbi_scores(&results, 1);
        assert_eq!(scores.score(StmtId(1)), 0.5);
    }

    #[test]
    fn only_failing_coverage_scores_one() {
        let results = vec![result(Verdict::Crash, &[1]), result(Verdict::Pass, &[])];
        let scores = sbi_scores(&results, 1);
        assert_eq!(scores.score(StmtId(1)), 1.0);
    }

    #[test]
    fn never_covered_scores_zero() {
        let results = vec![result(Verdict::Fail, &[1])];
        let scores = sbi_scores(&results, 2);
        assert_eq!(scores.score(StmtId(2)), 0.0);
        let row = scores.row(StmtId(2)).unwrap();
        assert_eq!((row.failed, row.passed), (0, 0));
    }

    #[test]
    fn repeated_visits_in_one_trace_count_once() {
        let results = vec![result(Verdict::Fail, &[1, 1, 1])];
        let scores = sbi_scores(&results, 1);
        assert_eq!(scores.row(StmtId(1)).unwrap().failed, 1);
    }

    #[test]
    fn ranking_breaks_ties_by_ascending_id() {
        let results = vec![result(Verdict::Fail, &[1, 2, 3]), result(Verdict::Pass, &[2])];
        let scores = sbi_scores(&results, 3);
        // 1 and 3 tie at 1.0; 2 scores 0.5.
        assert_eq!(scores.ranked(), vec![StmtId(1), StmtId(3), StmtId(2)]);
    }
}
