//! Experiment configuration, loaded from TOML or JSON. Paths inside the file
//! are resolved relative to the file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::exec::DEFAULT_STEP_BUDGET;
use crate::model::Smoothing;
use crate::mutate::MutationOperator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgramEntry {
    pub file: PathBuf,
    pub suite: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub programs: Vec<ProgramEntry>,
    #[serde(default = "default_operators")]
    pub operators: Vec<MutationOperator>,
    #[serde(default = "default_top_k")]
    pub top_k: u32,
    #[serde(default)]
    pub smoothing: Smoothing,
    #[serde(default = "default_step_budget")]
    pub step_budget: u64,
    /// Reserved: every stage is deterministic, so nothing consumes it yet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

fn default_operators() -> Vec<MutationOperator> {
    MutationOperator::ALL.to_vec()
}

fn default_top_k() -> u32 {
    5
}

fn default_step_budget() -> u64 {
    DEFAULT_STEP_BUDGET
}

impl ExperimentConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut config: ExperimentConfig = if path.extension().and_then(|e| e.to_str())
            == Some("json")
        {
            serde_json::from_str(&text)
                .map_err(|e| format!("invalid JSON config {}: {e}", path.display()))?
        } else {
            toml::from_str(&text)
                .map_err(|e| format!("invalid TOML config {}: {e}", path.display()))?
        };
        config.validate()?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        for entry in &mut config.programs {
            entry.file = base.join(&entry.file);
            entry.suite = base.join(&entry.suite);
        }
        if let Some(out) = &mut config.out_dir {
            *out = base.join(&*out);
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.top_k < 1 {
            return Err("top_k must be at least 1".to_string());
        }
        if self.programs.is_empty() {
            return Err("config lists no programs".to_string());
        }
        if self.operators.is_empty() {
            return Err("config lists no mutation operators".to_string());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_defaults_fill_in() {
        let text = "[[programs]]\nfile = \"a.mini\"\nsuite = \"a.json\"\n";
        let config: ExperimentConfig = toml::from_str(text).unwrap();
        assert_eq!(config.top_k, 5);
        assert_eq!(config.operators, MutationOperator::ALL.to_vec());
        assert_eq!(config.step_budget, DEFAULT_STEP_BUDGET);
        assert_eq!(config.smoothing, Smoothing::Off);
    }

    #[test]
    fn json_configs_parse_too() {
        let text = r#"{"programs": [{"file": "a.mini", "suite": "a.json"}], "top_k": 3}"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(config.top_k, 3);
    }
}
