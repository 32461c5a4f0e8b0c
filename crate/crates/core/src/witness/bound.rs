use std::fmt;
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{decode_model, save_witness, verify_witness, WitnessError};
use crate::chirotope::WitnessReport;
use crate::encoder::{write_instance, ProblemMode, ProblemSpec};
use crate::solver::{
    check_proof, run_solver, CheckerConfig, ProofVerdict, RunRegistry, RunReport, SolverConfig, SolverStatus,
};

/// Everything needed to run instances: tools, output directory, policy.
#[derive(Debug, Clone)]
pub struct BoundOptions {
    pub solver: SolverConfig,
    /// `None` disables proof logging and checking; UNSAT rows then stay
    /// uncertified and no bound is derived.
    pub checker: Option<CheckerConfig>,
    pub out_dir: PathBuf,
    pub keep_proofs: bool,
    /// Keep the DIMACS files after solving.
    pub keep_cnf: bool,
    /// Instances run concurrently.
    pub jobs: usize,
    /// Stop after the first certified UNSAT row.
    pub stop_at_first_unsat: bool,
    /// Passed on to every generated [`ProblemSpec`].
    pub symmetry_breaking: bool,
}

impl BoundOptions {
    pub fn new(solver: SolverConfig, checker: Option<CheckerConfig>, out_dir: impl Into<PathBuf>) -> Self {
        BoundOptions {
            solver,
            checker,
            out_dir: out_dir.into(),
            keep_proofs: false,
            keep_cnf: true,
            jobs: 1,
            stop_at_first_unsat: false,
            symmetry_breaking: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Sat,
    Unsat,
    Timeout,
    Failed,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Sat => "sat",
            RowStatus::Unsat => "unsat",
            RowStatus::Timeout => "timeout",
            RowStatus::Failed => "failed",
        })
    }
}

/// Result of one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: usize,
    pub spec: ProblemSpec,
    pub status: RowStatus,
    /// SAT: the decoded witness passed every check. UNSAT: the proof was
    /// accepted by the checker.
    pub certified: bool,
    pub cnf_path: PathBuf,
    pub cnf_bytes: u64,
    pub variables: usize,
    pub clauses: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_report: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proof_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proof_bytes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proof_verdict: Option<ProofVerdict>,
    pub solve_seconds: f64,
    pub check_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

/// Encodes, solves and certifies one instance. Artifacts are named after
/// [`ProblemSpec::slug`].
pub fn solve_instance(
    spec: &ProblemSpec,
    opts: &BoundOptions,
    registry: &RunRegistry,
) -> Result<BoundRow, WitnessError> {
    spec.validate()?;
    let dir = &opts.out_dir;
    fs::create_dir_all(dir).map_err(|source| WitnessError::Io {
        context: format!("creating {}", dir.display()),
        source,
    })?;
    let slug = spec.slug();
    let cnf_path = dir.join(format!("{slug}.cnf"));
    let proof_path = dir.join(format!("{slug}.drat"));
    log::info!("[{slug}] encoding");
    let stats = write_instance(spec, &cnf_path)?;
    log::info!(
        "[{slug}] {} variables, {} clauses, {} bytes",
        stats.variables,
        stats.clauses,
        stats.bytes
    );
    let want_proof = opts.checker.is_some();
    let outcome = run_solver(&cnf_path, &opts.solver, want_proof.then_some(proof_path.as_path()))?;
    log::info!(
        "[{slug}] {} in {:.2} s{}",
        outcome.status,
        outcome.elapsed.as_secs_f64(),
        outcome.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
    );
    let mut row = BoundRow {
        n: spec.n,
        spec: *spec,
        status: RowStatus::Failed,
        certified: false,
        cnf_path: cnf_path.clone(),
        cnf_bytes: stats.bytes,
        variables: stats.variables,
        clauses: stats.clauses,
        witness_path: None,
        witness_report: None,
        proof_path: None,
        proof_bytes: None,
        proof_verdict: None,
        solve_seconds: outcome.elapsed.as_secs_f64(),
        check_seconds: 0.0,
        detail: outcome.detail.clone(),
    };
    let mut check = None;
    match outcome.status {
        SolverStatus::Sat => {
            let cat = spec.catalog()?;
            let model = outcome.model.as_deref().expect("sat outcome has a model");
            let chi = decode_model(model, &cat)?;
            let report = verify_witness(&chi, spec)?;
            row.witness_path = Some(save_witness(dir, &slug, &chi, spec)?);
            if report.passed() {
                row.status = RowStatus::Sat;
                row.certified = true;
            } else {
                log::error!("[{slug}] decoded model fails verification:\n{report}");
                row.detail = Some("decoded witness fails verification".into());
            }
            row.witness_report = Some(report);
        }
        SolverStatus::Unsat => {
            row.status = RowStatus::Unsat;
            if let (Some(checker), Some(proof)) = (&opts.checker, &outcome.proof_path) {
                row.proof_bytes = fs::metadata(proof).ok().map(|m| m.len());
                log::info!("[{slug}] checking proof ({} bytes)", row.proof_bytes.unwrap_or(0));
                let c = check_proof(&cnf_path, proof, checker)?;
                log::info!("[{slug}] proof {:?} in {:.2} s", c.verdict, c.elapsed.as_secs_f64());
                row.check_seconds = c.elapsed.as_secs_f64();
                row.proof_verdict = Some(c.verdict);
                match c.verdict {
                    ProofVerdict::Verified => row.certified = true,
                    ProofVerdict::Timeout => {
                        row.status = RowStatus::Timeout;
                        row.detail = Some("proof check timed out".into());
                    }
                    other => {
                        row.status = RowStatus::Failed;
                        row.detail = Some(format!("proof check: {other:?}"));
                    }
                }
                check = Some(c);
            }
        }
        SolverStatus::Unknown if outcome.timed_out => row.status = RowStatus::Timeout,
        SolverStatus::Unknown | SolverStatus::Failed => row.status = RowStatus::Failed,
    }
    let retained = opts.keep_proofs && row.proof_bytes.is_some();
    if retained {
        row.proof_path = outcome.proof_path.clone();
    } else if proof_path.exists() {
        let _ = fs::remove_file(&proof_path);
    }
    registry.record(RunReport {
        instance: slug,
        cnf_path: cnf_path.clone(),
        cnf_bytes: stats.bytes,
        outcome,
        proof_bytes: row.proof_bytes,
        check,
        proof_retained: retained,
    });
    if !opts.keep_cnf {
        let _ = fs::remove_file(&cnf_path);
    }
    Ok(row)
}

/// Rows for `g^(d)(k)` or `h^(d)(k)` over a range of `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub d: usize,
    pub k: usize,
    pub mode: ProblemMode,
    pub rows: Vec<BoundRow>,
    /// Smallest certified UNSAT `n` whose predecessor is certified SAT (or
    /// below `k`), provided no larger row is SAT.
    pub bound: Option<usize>,
    /// Smallest certified UNSAT `n`: an upper bound even without `bound`.
    pub upper: Option<usize>,
    pub monotone: bool,
}

impl BoundTable {
    pub fn from_rows(d: usize, k: usize, mode: ProblemMode, mut rows: Vec<BoundRow>) -> Self {
        rows.sort_by_key(|r| r.n);
        let monotone = is_monotone(&rows);
        let bound = if monotone { derive_bound(k, &rows) } else { None };
        let upper = rows.iter().find(|r| certified(r, RowStatus::Unsat)).map(|r| r.n);
        BoundTable {
            d,
            k,
            mode,
            rows,
            bound,
            upper: upper.filter(|_| monotone),
            monotone,
        }
    }

    pub fn row(&self, n: usize) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

fn certified(r: &BoundRow, status: RowStatus) -> bool {
    r.status == status && r.certified
}

/// No SAT row above a certified UNSAT row.
fn is_monotone(rows: &[BoundRow]) -> bool {
    match rows.iter().position(|r| certified(r, RowStatus::Unsat)) {
        None => true,
        Some(i) => rows[i..].iter().all(|r| r.status != RowStatus::Sat),
    }
}

fn derive_bound(k: usize, rows: &[BoundRow]) -> Option<usize> {
    let i = rows.iter().position(|r| certified(r, RowStatus::Unsat))?;
    let n = rows[i].n;
    let below_ok = n <= k || (i > 0 && rows[i - 1].n + 1 == n && certified(&rows[i - 1], RowStatus::Sat));
    below_ok.then_some(n)
}

/// Solves `(d, n, k, mode)` for every `n` in `n_range` (ascending) and
/// derives the bound. Rows run `opts.jobs` at a time.
pub fn compute_bound(
    d: usize,
    k: usize,
    mode: ProblemMode,
    n_range: &[usize],
    opts: &BoundOptions,
    registry: &RunRegistry,
) -> Result<BoundTable, WitnessError> {
    if n_range.is_empty() || n_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WitnessError::BadRange);
    }
    let specs: Vec<ProblemSpec> = n_range
        .iter()
        .map(|&n| ProblemSpec {
            d,
            n,
            k,
            mode,
            m: None,
            symmetry_breaking: opts.symmetry_breaking,
        })
        .collect();
    for s in &specs {
        s.validate()?;
    }
    let rows = run_batches(&specs, opts, registry)?;
    Ok(BoundTable::from_rows(d, k, mode, rows))
}

pub(super) fn run_batches(
    specs: &[ProblemSpec],
    opts: &BoundOptions,
    registry: &RunRegistry,
) -> Result<Vec<BoundRow>, WitnessError> {
    let jobs = opts.jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let mut rows = Vec::with_capacity(specs.len());
    for batch in specs.chunks(jobs) {
        let done: Vec<BoundRow> = pool.install(|| {
            batch
                .par_iter()
                .map(|s| solve_instance(s, opts, registry))
                .collect::<Result<_, _>>()
        })?;
        let stop = opts.stop_at_first_unsat && done.iter().any(|r| certified(r, RowStatus::Unsat));
        rows.extend(done);
        if stop {
            break;
        }
    }
    Ok(rows)
}

impl fmt::Display for BoundTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.mode {
            ProblemMode::Gon => "g",
            _ => "h",
        };
        writeln!(f, "{name}^({})({}) over {} instances", self.d, self.k, self.rows.len())?;
        write_rows(f, &self.rows)?;
        if !self.monotone {
            writeln!(
                f,
                "NOT MONOTONE: a satisfiable instance follows a certified unsatisfiable one"
            )?;
        }
        match self.bound {
            Some(b) => writeln!(f, "bound: {name}^({})({}) = {b}", self.d, self.k),
            None => match self.upper {
                Some(u) => writeln!(f, "bound: {name}^({})({}) <= {u}", self.d, self.k),
                None => writeln!(f, "bound: not derived"),
            },
        }
    }
}

pub(super) fn write_rows(f: &mut fmt::Formatter<'_>, rows: &[BoundRow]) -> fmt::Result {
    writeln!(
        f,
        "{:>4}  {:<8} {:<10} {:>10} {:>12} {:>9} {:>9}",
        "n", "status", "certified", "clauses", "cnf bytes", "solve s", "check s"
    )?;
    for r in rows {
        writeln!(
            f,
            "{:>4}  {:<8} {:<10} {:>10} {:>12} {:>9.2} {:>9.2}{}",
            r.n,
            r.status.to_string(),
            if r.certified { "yes" } else { "no" },
            r.clauses,
            r.cnf_bytes,
            r.solve_seconds,
            r.check_seconds,
            r.detail.as_deref().map(|d| format!("  {d}")).unwrap_or_default()
        )?;
    }
    Ok(())
}
