use std::env;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{find_in_path, process, SolverError, CHECKER_ENV};

/// How to invoke a DRAT checker. Templates may contain `{input}` and
/// `{proof}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckerConfig {
    pub name: String,
    pub program: PathBuf,
    pub args: Vec<String>,
    #[serde(default)]
    pub extra_args: Vec<String>,
    #[serde(default, with = "super::opt_secs")]
    pub timeout: Option<Duration>,
}

impl CheckerConfig {
    /// drat-trim and rate both take `<cnf> <proof>`.
    pub fn preset(program: impl Into<PathBuf>) -> CheckerConfig {
        let program = program.into();
        let name = program
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "checker".into());
        CheckerConfig {
            name,
            program,
            args: vec!["{input}".into(), "{proof}".into()],
            extra_args: Vec::new(),
            timeout: None,
        }
    }

    /// `$CHIROSAT_CHECKER`, else drat-trim or rate from PATH.
    pub fn from_env() -> Result<CheckerConfig, SolverError> {
        if let Some(p) = env::var_os(CHECKER_ENV).filter(|p| !p.is_empty()) {
            return Ok(CheckerConfig::preset(PathBuf::from(p)));
        }
        ["drat-trim", "rate"]
            .iter()
            .find_map(|n| find_in_path(n))
            .map(CheckerConfig::preset)
            .ok_or(SolverError::NoChecker)
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofVerdict {
    Verified,
    Rejected,
    /// The checker crashed or produced no verdict.
    CheckerFailed,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofCheck {
    pub verdict: ProofVerdict,
    pub checker: String,
    pub exit_code: Option<i32>,
    #[serde(with = "super::secs")]
    pub elapsed: Duration,
    /// Checker stdout verbatim, followed by the end of its stderr.
    pub output: String,
}

impl ProofCheck {
    pub fn verified(&self) -> bool {
        self.verdict == ProofVerdict::Verified
    }
}

/// Runs the checker on a CNF file and its DRAT proof.
pub fn check_proof(cnf_path: &Path, proof_path: &Path, config: &CheckerConfig) -> Result<ProofCheck, SolverError> {
    let mut args: Vec<String> = config
        .args
        .iter()
        .map(|t| {
            t.replace("{input}", &cnf_path.to_string_lossy())
                .replace("{proof}", &proof_path.to_string_lossy())
        })
        .collect();
    args.extend(config.extra_args.iter().cloned());
    let start = Instant::now();
    let run = process::run(&config.program, &args, config.timeout, process::verbatim)?;
    let elapsed = start.elapsed();
    let mut output = run.stdout;
    if !run.stderr_tail.is_empty() {
        output.push_str(&run.stderr_tail);
    }
    let verdict = verdict(run.timed_out, run.exit_code, &output);
    Ok(ProofCheck {
        verdict,
        checker: config.name.clone(),
        exit_code: run.exit_code,
        elapsed,
        output,
    })
}

fn verdict(timed_out: bool, exit: Option<i32>, output: &str) -> ProofVerdict {
    if timed_out {
        return ProofVerdict::Timeout;
    }
    let status = output
        .lines()
        .filter_map(|l| l.strip_prefix("s "))
        .map(str::trim)
        .next_back();
    match (status, exit) {
        (Some("VERIFIED"), Some(0)) => ProofVerdict::Verified,
        (Some("NOT VERIFIED"), Some(_)) => ProofVerdict::Rejected,
        _ => ProofVerdict::CheckerFailed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(verdict(false, Some(0), "c x\ns VERIFIED\n"), ProofVerdict::Verified);
        assert_eq!(verdict(false, Some(1), "s NOT VERIFIED\n"), ProofVerdict::Rejected);
        assert_eq!(verdict(false, Some(1), "s VERIFIED\n"), ProofVerdict::CheckerFailed);
        assert_eq!(verdict(false, None, ""), ProofVerdict::CheckerFailed);
        assert_eq!(verdict(true, None, "s VERIFIED"), ProofVerdict::Timeout);
    }
}
