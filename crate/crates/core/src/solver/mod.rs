//! Driving external SAT solvers and DRAT checkers.
//!
//! The solver is any executable that reads DIMACS, exits with 10 (SAT, with
//! `v` model lines on stdout) or 20 (UNSAT), and can write a textual DRAT
//! proof. Nothing here solves anything itself.

mod checker;
mod process;
mod registry;

use std::env;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoder::CnfInstance;
pub use checker::{check_proof, CheckerConfig, ProofCheck, ProofVerdict};
pub use registry::{RunRegistry, RunReport};

/// Environment variable naming the default solver executable.
pub const SOLVER_ENV: &str = "CHIROSAT_SOLVER";
/// Environment variable naming the default DRAT checker executable.
pub const CHECKER_ENV: &str = "CHIROSAT_CHECKER";

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("no SAT solver found: set {SOLVER_ENV} or put one of cadical, kissat, varisat on PATH")]
    NoSolver,
    #[error("no DRAT checker found: set {CHECKER_ENV} or put drat-trim or rate on PATH")]
    NoChecker,
    #[error("cannot start {program}: {source}")]
    Spawn {
        program: String,
        #[source]
        source: io::Error,
    },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl SolverError {
    pub(crate) fn io(context: impl Into<String>) -> impl FnOnce(io::Error) -> SolverError {
        let context = context.into();
        move |source| SolverError::Io { context, source }
    }
}

/// Writes `inst` as a DIMACS file.
pub fn write_dimacs(inst: &CnfInstance, path: &Path) -> Result<u64, SolverError> {
    let ctx = || format!("writing {}", path.display());
    let file = File::create(path).map_err(SolverError::io(ctx()))?;
    inst.write_dimacs(BufWriter::new(file))
        .map_err(SolverError::io(ctx()))?;
    Ok(std::fs::metadata(path).map_err(SolverError::io(ctx()))?.len())
}

/// How to invoke a solver. Argument templates may contain `{input}` and
/// `{proof}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub name: String,
    pub program: PathBuf,
    /// Arguments when no proof is requested.
    pub args: Vec<String>,
    /// Arguments when a proof is requested.
    pub proof_args: Vec<String>,
    /// Appended verbatim, e.g. `--unsat`.
    #[serde(default)]
    pub extra_args: Vec<String>,
    #[serde(default, with = "opt_secs")]
    pub timeout: Option<Duration>,
}

impl SolverConfig {
    /// Preset for a known solver family, by executable file name.
    pub fn preset(program: impl Into<PathBuf>) -> SolverConfig {
        let program = program.into();
        let name = program
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "solver".into());
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let (args, proof_args) = if name.starts_with("varisat") {
            (
                s(&["{input}"]),
                s(&["{input}", "--proof", "{proof}", "--proof-format", "drat"]),
            )
        } else {
            // CaDiCaL conventions, shared by kissat; also the fallback.
            (s(&["-q", "{input}"]), s(&["-q", "{input}", "{proof}", "--no-binary"]))
        };
        SolverConfig {
            name,
            program,
            args,
            proof_args,
            extra_args: Vec::new(),
            timeout: None,
        }
    }

    /// `$CHIROSAT_SOLVER`, else the first of cadical, kissat, varisat on PATH.
    pub fn from_env() -> Result<SolverConfig, SolverError> {
        if let Some(p) = env::var_os(SOLVER_ENV).filter(|p| !p.is_empty()) {
            return Ok(SolverConfig::preset(PathBuf::from(p)));
        }
        ["cadical", "kissat", "varisat"]
            .iter()
            .find_map(|n| find_in_path(n))
            .map(SolverConfig::preset)
            .ok_or(SolverError::NoSolver)
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_extra_args(mut self, extra: Vec<String>) -> Self {
        self.extra_args = extra;
        self
    }

    fn command_line(&self, input: &Path, proof: Option<&Path>) -> Vec<String> {
        let templates = if proof.is_some() { &self.proof_args } else { &self.args };
        let mut out: Vec<String> = templates
            .iter()
            .map(|t| {
                let t = t.replace("{input}", &input.to_string_lossy());
                match proof {
                    Some(p) => t.replace("{proof}", &p.to_string_lossy()),
                    None => t,
                }
            })
            .collect();
        out.extend(self.extra_args.iter().cloned());
        out
    }
}

pub(crate) fn find_in_path(name: &str) -> Option<PathBuf> {
    let path = env::var_os("PATH")?;
    env::split_paths(&path).map(|dir| dir.join(name)).find(|p| p.is_file())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Sat,
    Unsat,
    /// The solver gave up or hit the timeout.
    Unknown,
    /// Unexpected exit, inconsistent output, or a model that does not
    /// satisfy the formula.
    Failed,
}

impl std::fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverStatus::Sat => "sat",
            SolverStatus::Unsat => "unsat",
            SolverStatus::Unknown => "unknown",
            SolverStatus::Failed => "failed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverOutcome {
    pub status: SolverStatus,
    /// Signed variable numbers; present iff `status` is `Sat`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub model: Option<Vec<i32>>,
    /// Present iff `status` is `Unsat` and a proof was requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proof_path: Option<PathBuf>,
    #[serde(with = "secs")]
    pub elapsed: Duration,
    pub solver: String,
    pub exit_code: Option<i32>,
    pub timed_out: bool,
    /// Why the status is `Unknown` or `Failed`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl SolverOutcome {
    /// Model as a Boolean vector indexed by variable (slot 0 unused).
    pub fn assignment(&self, num_vars: usize) -> Option<Vec<bool>> {
        let model = self.model.as_ref()?;
        let mut out = vec![false; num_vars + 1];
        for &l in model {
            let v = l.unsigned_abs() as usize;
            if v <= num_vars {
                out[v] = l > 0;
            }
        }
        Some(out)
    }
}

/// Runs the solver on `cnf_path`. A proof is written to `proof` when given.
///
/// Only failure to start the process or to read the CNF back is an `Err`;
/// every other irregularity is reported as `Failed` or `Unknown`.
pub fn run_solver(cnf_path: &Path, config: &SolverConfig, proof: Option<&Path>) -> Result<SolverOutcome, SolverError> {
    let args = config.command_line(cnf_path, proof);
    log::debug!("{} {}", config.program.display(), args.join(" "));
    let start = Instant::now();
    let run = process::run(&config.program, &args, config.timeout, process::solver_stdout)?;
    let elapsed = start.elapsed();
    let mut outcome = SolverOutcome {
        status: SolverStatus::Failed,
        model: None,
        proof_path: None,
        elapsed,
        solver: config.name.clone(),
        exit_code: run.exit_code,
        timed_out: run.timed_out,
        detail: None,
    };
    let parsed = run.stdout;
    let fail = |mut o: SolverOutcome, why: String| {
        o.status = SolverStatus::Failed;
        o.detail = Some(why);
        Ok(o)
    };
    if run.timed_out {
        outcome.status = SolverStatus::Unknown;
        outcome.detail = Some(format!("timeout after {:.1} s", elapsed.as_secs_f64()));
        return Ok(outcome);
    }
    if let Some(err) = parsed.error {
        return fail(outcome, err);
    }
    let claimed = parsed.status.as_deref();
    match (run.exit_code, claimed) {
        (Some(10), None | Some("SATISFIABLE")) => {
            let model = parsed.model;
            if let Err(why) = check_model(cnf_path, &model)? {
                return fail(outcome, why);
            }
            outcome.status = SolverStatus::Sat;
            outcome.model = Some(model);
        }
        (Some(20), None | Some("UNSATISFIABLE")) => {
            outcome.status = SolverStatus::Unsat;
            if let Some(p) = proof {
                if !p.is_file() {
                    return fail(outcome, format!("proof file {} was not written", p.display()));
                }
                outcome.proof_path = Some(p.to_path_buf());
            }
        }
        (Some(0), None | Some("UNKNOWN")) => {
            outcome.status = SolverStatus::Unknown;
            outcome.detail = Some("solver reported unknown".into());
        }
        (code, claim) => {
            let why = format!(
                "unexpected exit {} with status line {}{}",
                code.map_or("by signal".to_string(), |c| c.to_string()),
                claim.map_or("<none>".to_string(), |c| format!("{c:?}")),
                tail_note(&run.stderr_tail)
            );
            return fail(outcome, why);
        }
    }
    Ok(outcome)
}

fn tail_note(tail: &str) -> String {
    let t = tail.trim();
    if t.is_empty() {
        String::new()
    } else {
        format!("; stderr: {t}")
    }
}

/// Streams the CNF file and checks that every clause has a true literal
/// under `model`. The outer `Err` is an I/O problem, the inner one a
/// malformed or falsifying model.
pub fn check_model(cnf_path: &Path, model: &[i32]) -> Result<Result<(), String>, SolverError> {
    let ctx = || format!("reading {}", cnf_path.display());
    let file = File::open(cnf_path).map_err(SolverError::io(ctx()))?;
    let mut value: Vec<i8> = Vec::new();
    for &l in model {
        let v = l.unsigned_abs() as usize;
        if v >= value.len() {
            value.resize(v + 1, 0);
        }
        let s = if l > 0 { 1 } else { -1 };
        if value[v] == -s {
            return Ok(Err(format!("model assigns variable {v} both ways")));
        }
        value[v] = s;
    }
    let truth = |lit: i32| {
        let v = lit.unsigned_abs() as usize;
        let s = value.get(v).copied().unwrap_or(0);
        s != 0 && (s > 0) == (lit > 0)
    };
    let mut satisfied = false;
    let mut clause_no = 0usize;
    let mut in_clause = false;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(SolverError::io(ctx()))?;
        let t = line.trim_start();
        if t.is_empty() || t.starts_with('c') || t.starts_with('p') {
            continue;
        }
        for tok in t.split_whitespace() {
            let lit: i32 = match tok.parse() {
                Ok(l) => l,
                Err(_) => return Ok(Err(format!("bad literal {tok:?} in CNF"))),
            };
            if lit == 0 {
                if !satisfied {
                    return Ok(Err(format!("model falsifies clause {}", clause_no + 1)));
                }
                clause_no += 1;
                satisfied = false;
                in_clause = false;
            } else {
                in_clause = true;
                satisfied |= truth(lit);
            }
        }
    }
    if in_clause {
        return Ok(Err("unterminated last clause in CNF".into()));
    }
    Ok(Ok(()))
}

/// Writes `contents` to `path`, flushing before returning.
pub(crate) fn write_text(path: &Path, contents: &str) -> Result<(), SolverError> {
    let mut f = File::create(path).map_err(SolverError::io(format!("writing {}", path.display())))?;
    f.write_all(contents.as_bytes())
        .and_then(|_| f.flush())
        .map_err(SolverError::io(format!("writing {}", path.display())))
}

pub(crate) mod secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let v = f64::deserialize(d)?;
        Duration::try_from_secs_f64(v).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod opt_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Option<Duration>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&d.as_secs_f64()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Duration>, D::Error> {
        Option::<f64>::deserialize(d)?
            .map(|v| Duration::try_from_secs_f64(v).map_err(serde::de::Error::custom))
            .transpose()
    }
}
