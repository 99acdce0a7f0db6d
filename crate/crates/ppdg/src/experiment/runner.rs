//! Full pipeline: enumerate mutants per corpus program, classify each one
//! against golden outputs, train on the killed mutants' passing traces, rank
//! their failing traces, score the coverage baseline over the same results,
//! and aggregate.

use std::path::Path;

use crate::exec::run_suite;
use crate::lang::SourceProgram;
use crate::localize::{rank_cp, rank_metrics_rankcp, rank_metrics_sbi, sbi_scores, RankMetrics};
use crate::model::{learn_params, NodeStateTrace, Ppdg};
use crate::mutate::{classify_results, enumerate_mutants, MutantClass};

use super::config::ExperimentConfig;
use super::report::{
    aggregate_rows, ExperimentReport, MutantRow, ProgramAggregate, RowClass, SkippedProgram,
    TechniqueOutcome,
};

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, String> {
    config.validate()?;
    let mut rows: Vec<MutantRow> = Vec::new();
    let mut programs: Vec<ProgramAggregate> = Vec::new();
    let mut skipped: Vec<SkippedProgram> = Vec::new();
    let mut total_stmts = 0u32;

    for entry in &config.programs {
        let label = entry
            .file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| entry.file.display().to_string());
        match run_program(config, &entry.file, &entry.suite) {
            Ok((stmts, program_rows)) => {
                let agg = aggregate_rows(&label, stmts, &program_rows);
                total_stmts += stmts;
                programs.push(agg);
                rows.extend(program_rows);
            }
            Err(reason) => skipped.push(SkippedProgram {
                program: label,
                reason,
            }),
        }
    }

    let overall = aggregate_rows("OVERALL", total_stmts, &rows);
    Ok(ExperimentReport {
        top_k: config.top_k,
        step_budget: config.step_budget,
        rows,
        programs,
        overall,
        skipped,
    })
}

fn run_program(
    config: &ExperimentConfig,
    file: &Path,
    suite_path: &Path,
) -> Result<(u32, Vec<MutantRow>), String> {
    let source = SourceProgram::from_path(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let ast = crate::lang::parse(&source).map_err(|e| format!("parse error: {e}"))?;
    let suite = crate::exec::load_suite(suite_path)?;
    let stmt_count = ast.stmt_count();

    // Sanity gate: the unmutated program must pass its whole suite.
    let base_model = Ppdg::skeleton_with(&ast, Default::default(), config.smoothing);
    let base_results = run_suite(&ast, &base_model, &suite, config.step_budget)
        .map_err(|e| format!("suite does not fit the program: {e}"))?;
    let failing: Vec<&str> = base_results
        .iter()
        .filter(|r| r.verdict.is_failing())
        .map(|r| r.trace.test_id.as_str())
        .collect();
    if !failing.is_empty() {
        return Err(format!(
            "sanity gate: unmutated program fails tests [{}]",
            failing.join(", ")
        ));
    }

    let mutants = enumerate_mutants(&ast, &config.operators);
    let mut rows = Vec::with_capacity(mutants.len());
    for (index, mutant) in mutants.iter().enumerate() {
        let mutant_id = format!("m{:04}", index + 1);
        let mutant_model =
            Ppdg::skeleton_with(&mutant.ast, Default::default(), config.smoothing);
        // The suite's expected outputs are golden: the sanity gate proved
        // them equal to the base program's actual outputs.
        let results = run_suite(&mutant.ast, &mutant_model, &suite, config.step_budget)
            .map_err(|e| format!("mutant {mutant_id}: {e}"))?;
        let class = classify_results(&results);
        let failing = results.iter().filter(|r| r.verdict.is_failing()).count() as u32;
        let passing = results.len() as u32 - failing;

        let (ppdg, sbi) = match &class {
            MutantClass::Killed { .. } => {
                let passing_traces: Vec<NodeStateTrace> = results
                    .iter()
                    .filter(|r| !r.verdict.is_failing())
                    .map(|r| r.trace.clone())
                    .collect();
                let learned = learn_params(&mutant_model, &passing_traces)
                    .map_err(|e| format!("mutant {mutant_id}: {e}"))?;

                // Rank each failing trace separately; keep the best rank.
                let mut best: Option<RankMetrics> = None;
                for result in results.iter().filter(|r| r.verdict.is_failing()) {
                    let ranking = rank_cp(&result.trace, &learned)
                        .map_err(|e| format!("mutant {mutant_id}: {e}"))?;
                    let metrics =
                        rank_metrics_rankcp(&ranking, mutant.faulty_stmt, stmt_count);
                    best = Some(match best {
                        None => metrics,
                        Some(prev) if metrics.rank < prev.rank => metrics,
                        Some(prev) => prev,
                    });
                }
                let ppdg_metrics = best.expect("killed mutants have failing traces");

                let scores = sbi_scores(&results, stmt_count);
                let sbi_metrics = rank_metrics_sbi(&scores, mutant.faulty_stmt, stmt_count);
                (
                    Some(to_outcome(ppdg_metrics, config.top_k)),
                    Some(to_outcome(sbi_metrics, config.top_k)),
                )
            }
            _ => (None, None),
        };

        rows.push(MutantRow {
            program: mutant.base.clone(),
            mutant: mutant_id,
            operator: mutant.operator,
            stmt: mutant.site.stmt.0,
            position: mutant.site.position,
            change: mutant.change.clone(),
            class: match class {
                MutantClass::Killed { .. } => RowClass::Killed,
                MutantClass::EquivalentOnSuite => RowClass::EquivalentOnSuite,
                MutantClass::NoPassing => RowClass::NoPassing,
            },
            failing,
            passing,
            ppdg,
            sbi,
        });
    }
    Ok((stmt_count, rows))
}

fn to_outcome(metrics: RankMetrics, top_k: u32) -> TechniqueOutcome {
    TechniqueOutcome {
        rank: metrics.rank,
        exam: metrics.exam,
        found: metrics.found,
        top_k_hit: metrics.top_k_hit(top_k),
    }
}

/// Writes `report.json` and `summary.csv` into the output directory.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    std::fs::write(dir.join("report.json"), report.to_json())
        .map_err(|e| format!("cannot write report.json: {e}"))?;
    std::fs::write(dir.join("summary.csv"), report.summary_csv())
        .map_err(|e| format!("cannot write summary.csv: {e}"))?;
    Ok(())
}
