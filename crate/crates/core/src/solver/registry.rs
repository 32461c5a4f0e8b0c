use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{ProofCheck, SolverError, SolverOutcome};

/// One solver invocation, as written to the JSON run report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub cnf_path: PathBuf,
    pub cnf_bytes: u64,
    pub outcome: SolverOutcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proof_bytes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub check: Option<ProofCheck>,
    /// Whether the proof file was kept on disk after checking.
    #[serde(default)]
    pub proof_retained: bool,
}

/// Append-only list of runs, shared between worker threads.
#[derive(Debug, Default)]
pub struct RunRegistry {
    runs: Mutex<Vec<RunReport>>,
}

impl RunRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self, report: RunReport) {
        self.runs.lock().expect("registry lock").push(report);
    }

    /// Runs recorded so far, ordered by instance name.
    pub fn snapshot(&self) -> Vec<RunReport> {
        let mut runs = self.runs.lock().expect("registry lock").clone();
        runs.sort_by(|a, b| a.instance.cmp(&b.instance));
        runs
    }

    pub fn write_json(&self, path: &Path) -> Result<(), SolverError> {
        let text = serde_json::to_string_pretty(&self.snapshot()).expect("report serializes");
        super::write_text(path, &(text + "\n"))
    }
}
