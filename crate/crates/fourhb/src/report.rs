//! Structured results of the executable axiom suites.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Witness for a failing check, typically a basis monomial or tuple.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    /// True when the check implements a stated reformulation of an axiom
    /// whose original diagrammatic layout is not reproducible from prose.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub reformulation_based: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub r: u64,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, r: u64) -> Self {
        VerificationReport { suite: suite.into(), r, checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, outcome: Result<(), String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed: outcome.is_ok(),
            counterexample: outcome.err(),
            reformulation_based: false,
        });
    }

    pub fn push_reformulated(&mut self, name: impl Into<String>, outcome: Result<(), String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed: outcome.is_ok(),
            counterexample: outcome.err(),
            reformulation_based: true,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_names(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}
