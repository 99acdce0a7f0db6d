//! Suite-relative mutant classification against golden outputs.

use crate::exec::{execute, run_suite, ExecError, TestCase, TestSuite};
use crate::lang::Ast;
use crate::model::Ppdg;

use super::Mutant;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MutantClass {
    /// At least one failing and at least one passing test.
    Killed { failing: Vec<String> },
    /// No test fails; indistinguishable from the base under this suite.
    EquivalentOnSuite,
    /// Every test fails, leaving nothing to learn from.
    NoPassing,
}

impl MutantClass {
    pub fn name(&self) -> &'static str {
        match self {
            MutantClass::Killed { .. } => "KILLED",
            MutantClass::EquivalentOnSuite => "EQUIVALENT_ON_SUITE",
            MutantClass::NoPassing => "NO_PASSING",
        }
    }
}

/// Replaces each case's expected output with what the base program actually
/// prints, the golden-run convention. Fails if the base program crashes on
/// any case.
pub fn golden_suite(
    base: &Ast,
    suite: &TestSuite,
    step_budget: u64,
) -> Result<TestSuite, String> {
    let model = Ppdg::skeleton_for(base);
    let mut cases = Vec::with_capacity(suite.cases.len());
    for case in &suite.cases {
        let result = execute(base, &model, case, step_budget).map_err(|e| e.to_string())?;
        if result.verdict == crate::exec::Verdict::Crash {
            return Err(format!(
                "base program crashes on test `{}`; cannot derive golden output",
                case.id
            ));
        }
        cases.push(TestCase {
            id: case.id.clone(),
            inputs: case.inputs.clone(),
            expected: result.output,
        });
    }
    Ok(TestSuite {
        program: suite.program.clone(),
        cases,
    })
}

/// Runs the mutant against a suite whose expected outputs are golden.
pub fn classify_mutant(
    mutant: &Mutant,
    golden: &TestSuite,
    step_budget: u64,
) -> Result<MutantClass, ExecError> {
    let model = Ppdg::skeleton_for(&mutant.ast);
    let results = run_suite(&mutant.ast, &model, golden, step_budget)?;
    Ok(classify_results(&results))
}

/// Classification from already-collected suite results.
pub fn classify_results(results: &[crate::exec::ExecutionResult]) -> MutantClass {
    let failing: Vec<String> = results
        .iter()
        .filter(|r| r.verdict.is_failing())
        .map(|r| r.trace.test_id.clone())
        .collect();
    let passing = results.len() - failing.len();
    if failing.is_empty() {
        MutantClass::EquivalentOnSuite
    } else if passing == 0 {
        MutantClass::NoPassing
    } else {
        MutantClass::Killed { failing }
    }
}
