//! Test suites: input bindings plus expected output per case, as JSON.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub id: String,
    pub inputs: BTreeMap<String, i64>,
    pub expected: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestSuite {
    /// Name of the program the suite was written for (informational).
    pub program: String,
    pub cases: Vec<TestCase>,
}

impl TestSuite {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub fn load_suite(path: impl AsRef<Path>) -> Result<TestSuite, String> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read suite {}: {e}", path.display()))?;
    TestSuite::from_json(&text).map_err(|e| format!("invalid suite {}: {e}", path.display()))
}
