//! Experiment report: one row per mutant, aggregates per program and
//! overall. Aggregates are always recomputed from the rows.

use serde::{Deserialize, Serialize};

use crate::mutate::MutationOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowClass {
    #[serde(rename = "KILLED")]
    Killed,
    #[serde(rename = "EQUIVALENT_ON_SUITE")]
    EquivalentOnSuite,
    #[serde(rename = "NO_PASSING")]
    NoPassing,
}

impl std::fmt::Display for RowClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RowClass::Killed => "KILLED",
            RowClass::EquivalentOnSuite => "EQUIVALENT_ON_SUITE",
            RowClass::NoPassing => "NO_PASSING",
        };
        f.write_str(s)
    }
}

/// Rank, exam score, and top-k flag for one technique on one mutant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TechniqueOutcome {
    pub rank: u32,
    pub exam: f64,
    pub found: bool,
    #[serde(rename = "topKHit")]
    pub top_k_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutantRow {
    pub program: String,
    pub mutant: String,
    pub operator: MutationOperator,
    pub stmt: u32,
    pub position: u32,
    pub change: String,
    pub class: RowClass,
    pub failing: u32,
    pub passing: u32,
    /// Present only for KILLED mutants.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ppdg: Option<TechniqueOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sbi: Option<TechniqueOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TechniqueAggregate {
    /// Number of killed mutants whose faulty statement ranked within top k.
    pub identified: u32,
    #[serde(rename = "meanExam")]
    pub mean_exam: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramAggregate {
    pub program: String,
    pub stmts: u32,
    pub mutants: u32,
    pub killed: u32,
    #[serde(rename = "equivalentOnSuite")]
    pub equivalent_on_suite: u32,
    #[serde(rename = "noPassing")]
    pub no_passing: u32,
    pub ppdg: TechniqueAggregate,
    pub sbi: TechniqueAggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedProgram {
    pub program: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    #[serde(rename = "topK")]
    pub top_k: u32,
    #[serde(rename = "stepBudget")]
    pub step_budget: u64,
    pub rows: Vec<MutantRow>,
    pub programs: Vec<ProgramAggregate>,
    pub overall: ProgramAggregate,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedProgram>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report json")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Per-program summary plus an OVERALL row.
    pub fn summary_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "program",
                "stmts",
                "mutants",
                "killed",
                "equivalent_on_suite",
                "no_passing",
                "ppdg_identified",
                "sbi_identified",
                "ppdg_mean_exam",
                "sbi_mean_exam",
            ])
            .expect("csv header");
        for agg in self.programs.iter().chain(std::iter::once(&self.overall)) {
            writer
                .write_record([
                    agg.program.clone(),
                    agg.stmts.to_string(),
                    agg.mutants.to_string(),
                    agg.killed.to_string(),
                    agg.equivalent_on_suite.to_string(),
                    agg.no_passing.to_string(),
                    agg.ppdg.identified.to_string(),
                    agg.sbi.identified.to_string(),
                    agg.ppdg.mean_exam.map(|m| m.to_string()).unwrap_or_default(),
                    agg.sbi.mean_exam.map(|m| m.to_string()).unwrap_or_default(),
                ])
                .expect("csv row");
        }
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
    }
}

/// Builds a program aggregate from that program's rows.
pub fn aggregate_rows(program: &str, stmts: u32, rows: &[MutantRow]) -> ProgramAggregate {
    let mut agg = ProgramAggregate {
        program: program.to_string(),
        stmts,
        mutants: rows.len() as u32,
        killed: 0,
        equivalent_on_suite: 0,
        no_passing: 0,
        ppdg: TechniqueAggregate::default(),
        sbi: TechniqueAggregate::default(),
    };
    let mut ppdg_exams = Vec::new();
    let mut sbi_exams = Vec::new();
    for row in rows {
        match row.class {
            RowClass::Killed => agg.killed += 1,
            RowClass::EquivalentOnSuite => agg.equivalent_on_suite += 1,
            RowClass::NoPassing => agg.no_passing += 1,
        }
        if let Some(outcome) = row.ppdg {
            if outcome.top_k_hit {
                agg.ppdg.identified += 1;
            }
            ppdg_exams.push(outcome.exam);
        }
        if let Some(outcome) = row.sbi {
            if outcome.top_k_hit {
                agg.sbi.identified += 1;
            }
            sbi_exams.push(outcome.exam);
        }
    }
    agg.ppdg.mean_exam = mean(&ppdg_exams);
    agg.sbi.mean_exam = mean(&sbi_exams);
    agg
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}
