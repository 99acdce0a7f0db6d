//! Single-site mutant generation and suite-relative classification.
//!
//! Each mutant replaces exactly one operator, literal, or variable reference,
//! so the token diff between the printed base and the printed mutant is a
//! single edit. Sites are numbered per statement: 0 is the assignment target
//! (when present), expression nodes follow in pre-order starting at 1.

mod apply;
mod classify;

pub use apply::{enumerate_mutants, Mutant, MutationSite};
pub use classify::{classify_mutant, classify_results, golden_suite, MutantClass};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MutationOperator {
    #[serde(rename = "AOR")]
    Aor,
    #[serde(rename = "ROR")]
    Ror,
    #[serde(rename = "LOR")]
    Lor,
    #[serde(rename = "CRP")]
    Crp,
    #[serde(rename = "VRP")]
    Vrp,
}

impl MutationOperator {
    pub const ALL: [MutationOperator; 5] = [
        MutationOperator::Aor,
        MutationOperator::Ror,
        MutationOperator::Lor,
        MutationOperator::Crp,
        MutationOperator::Vrp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutationOperator::Aor => "AOR",
            MutationOperator::Ror => "ROR",
            MutationOperator::Lor => "LOR",
            MutationOperator::Crp => "CRP",
            MutationOperator::Vrp => "VRP",
        }
    }
}

impl std::fmt::Display for MutationOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MutationOperator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "AOR" => Ok(MutationOperator::Aor),
            "ROR" => Ok(MutationOperator::Ror),
            "LOR" => Ok(MutationOperator::Lor),
            "CRP" => Ok(MutationOperator::Crp),
            "VRP" => Ok(MutationOperator::Vrp),
            other => Err(format!(
                "unknown mutation operator `{other}` (expected AOR, ROR, LOR, CRP, or VRP)"
            )),
        }
    }
}

/// Parses a comma-separated operator list like `AOR,ROR,VRP`.
pub fn parse_operator_list(text: &str) -> Result<Vec<MutationOperator>, String> {
    let mut ops: Vec<MutationOperator> = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    ops.sort();
    ops.dedup();
    if ops.is_empty() {
        return Err("empty operator list".to_string());
    }
    Ok(ops)
}
