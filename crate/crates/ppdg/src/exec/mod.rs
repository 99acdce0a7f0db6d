//! Deterministic interpreter that executes MiniLang programs against test
//! cases and emits node-state traces over the transformed dependence graph.

mod interp;
mod suite;

pub use interp::{execute, run_suite, ExecError, ExecutionResult, DEFAULT_STEP_BUDGET};
pub use suite::{load_suite, TestCase, TestSuite};

use serde::{Deserialize, Serialize};

/// Outcome of one execution. CRASH (a runtime fault: division or modulo by
/// zero, or step-budget exhaustion) counts as failing everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "CRASH")]
    Crash,
}

impl Verdict {
    pub fn is_failing(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Crash)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Crash => "CRASH",
        };
        f.write_str(s)
    }
}
