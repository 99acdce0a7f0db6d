//! Suspiciousness ranking: conditional-probability ranking over a failing
//! trace, and the coverage-tally baseline.

mod metrics;
mod rankcp;
mod sbi;

pub use metrics::{rank_metrics, rank_metrics_rankcp, rank_metrics_sbi, RankMetrics};
pub use rankcp::{rank_cp, rank_entries, Configuration, LocalizeError, Ranking, RankingEntry};
pub use sbi::{sbi_scores, SbiRow, SbiScores};
