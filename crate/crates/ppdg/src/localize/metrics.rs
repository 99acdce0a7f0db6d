//! Rank of a known-faulty statement within a ranking, and the exam score
//! (rank divided by total statements; lower is better). A faulty statement
//! missing from the ranking gets the sentinel rank N+1 and never counts as
//! found.

use super::rankcp::Ranking;
use super::sbi::SbiScores;
use crate::lang::StmtId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankMetrics {
    /// 1-based rank, or `total + 1` when the statement is absent.
    pub rank: u32,
    /// rank / total statements.
    pub exam: f64,
    pub found: bool,
}

impl RankMetrics {
    pub fn top_k_hit(&self, k: u32) -> bool {
        self.found && self.rank <= k
    }
}

/// Position of `faulty` among the statement entries of an ordered list.
/// Non-statement entries (aux nodes) are skipped when counting: the exam
/// score measures how many program statements are examined before the fault,
/// and aux nodes are not examinable statements.
pub fn rank_metrics(
    ordered: impl IntoIterator<Item = Option<StmtId>>,
    faulty: StmtId,
    total_stmts: u32,
) -> RankMetrics {
    let mut position = 0u32;
    for entry in ordered {
        let Some(stmt) = entry else { continue };
        position += 1;
        if stmt == faulty {
            return RankMetrics {
                rank: position,
                exam: f64::from(position) / f64::from(total_stmts),
                found: true,
            };
        }
    }
    let sentinel = total_stmts + 1;
    RankMetrics {
        rank: sentinel,
        exam: f64::from(sentinel) / f64::from(total_stmts),
        found: false,
    }
}

pub fn rank_metrics_rankcp(ranking: &Ranking, faulty: StmtId, total_stmts: u32) -> RankMetrics {
    rank_metrics(
        ranking.entries().iter().map(|e| e.node.as_stmt()),
        faulty,
        total_stmts,
    )
}

pub fn rank_metrics_sbi(scores: &SbiScores, faulty: StmtId, total_stmts: u32) -> RankMetrics {
    rank_metrics(scores.ranked().into_iter().map(Some), faulty, total_stmts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(list: &[u32]) -> Vec<Option<StmtId>> {
        list.iter().map(|&i| Some(StmtId(i))).collect()
    }

    #[test]
    fn first_of_ten_scores_a_tenth() {
        let m = rank_metrics(ids(&[7, 3, 1]), StmtId(7), 10);
        assert_eq!(m.rank, 1);
        assert_eq!(m.exam, 0.1);
        assert!(m.found);
    }

    #[test]
    fn absent_statement_gets_the_sentinel() {
        let m = rank_metrics(ids(&[1, 2]), StmtId(9), 10);
        assert_eq!(m.rank, 11);
        assert!(!m.found);
        assert!(!m.top_k_hit(5));
    }

    #[test]
    fn sentinel_never_counts_as_top_k_even_for_tiny_programs() {
        let m = rank_metrics(ids(&[1]), StmtId(2), 2);
        assert_eq!(m.rank, 3);
        assert!(!m.top_k_hit(5));
    }

    #[test]
    fn non_statement_entries_do_not_occupy_positions() {
        let m = rank_metrics(vec![None, Some(StmtId(4))], StmtId(4), 4);
        assert_eq!(m.rank, 1);
    }
}
