mod config;
mod error;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use chirosat::chirotope::{AxiomMethod, CheckStatus, WitnessReport};
use chirosat::encoder::{write_instance, ProblemMode, ProblemSpec};
use chirosat::solver::{check_proof, run_solver, CheckerConfig, RunRegistry, SolverConfig, SolverStatus};
use chirosat::witness::{self, BoundOptions, RowStatus};
use chirosat::{geometric_scan, Chirotope, Mode, PointSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::{parse_range, JobConfig};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "chirosat",
    version,
    about = "SAT encodings of gon/hole problems over acyclic chirotopes"
)]
struct Cli {
    /// TOML job file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for all artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the report as JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the DIMACS instance for a problem.
    Encode {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also write the variable table `<name>.vars`.
        #[arg(long)]
        catalog: bool,
    },
    /// Solve a problem (or an existing DIMACS file) and certify the answer.
    Solve {
        #[command(flatten)]
        spec: SpecArgs,
        /// Solve this DIMACS file instead of encoding a problem.
        #[arg(long, conflicts_with_all = ["d", "n", "k", "mode", "m"])]
        cnf: Option<PathBuf>,
        #[command(flatten)]
        tools: ToolArgs,
    },
    /// Check a chirotope file against a problem, without any CNF.
    Verify {
        /// Chirotope file (`n r` header, sign line).
        chirotope: PathBuf,
        /// Problem; defaults to the `.spec.json` stored next to the file.
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Compute the chirotope of a point file, optionally scanning for a
    /// k-gon or k-hole.
    Frompoints {
        /// Point file (`n d` header, one point per line).
        points: Option<PathBuf>,
        #[arg(long, value_enum, requires = "k")]
        scan: Option<ScanMode>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Solve a range of n and derive g or h.
    Bound {
        #[command(flatten)]
        job: BoundArgs,
        #[command(flatten)]
        tools: ToolArgs,
    },
    /// Convex 9-gon frame instances without a 6-hole, n in 9..=22.
    Pipeline {
        /// Inclusive, e.g. `9..11`.
        #[arg(long)]
        range: Option<String>,
        /// Leave out the labelling normalisation clauses.
        #[arg(long)]
        no_symmetry_breaking: bool,
        #[command(flatten)]
        tools: ToolArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanMode {
    Gon,
    Hole,
}

#[derive(Args, Default)]
struct SpecArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// gon, hole or hull_frame_hole.
    #[arg(long)]
    mode: Option<ProblemMode>,
    /// Frame size for hull_frame_hole.
    #[arg(long)]
    m: Option<usize>,
    /// Leave out the labelling normalisation clauses.
    #[arg(long)]
    no_symmetry_breaking: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    mode: Option<ProblemMode>,
    /// Inclusive, e.g. `4..5`.
    #[arg(long)]
    range: Option<String>,
    /// Stop at the first certified unsatisfiable n.
    #[arg(long)]
    stop_early: bool,
    /// Leave out the labelling normalisation clauses.
    #[arg(long)]
    no_symmetry_breaking: bool,
}

#[derive(Args, Default)]
struct ToolArgs {
    /// Solver executable (default: $CHIROSAT_SOLVER, then cadical, kissat,
    /// varisat on PATH).
    #[arg(long)]
    solver: Option<PathBuf>,
    /// Extra solver argument, e.g. `--solver-arg=--unsat`. Repeatable.
    #[arg(long = "solver-arg", allow_hyphen_values = true)]
    solver_args: Vec<String>,
    /// DRAT checker (default: $CHIROSAT_CHECKER, then drat-trim, rate).
    #[arg(long)]
    checker: Option<PathBuf>,
    /// Do not log or check proofs.
    #[arg(long)]
    no_verify: bool,
    /// Wall-clock seconds per instance.
    #[arg(long)]
    timeout: Option<f64>,
    /// Keep DRAT proofs after checking.
    #[arg(long)]
    keep_proofs: bool,
    /// Delete DIMACS files after solving.
    #[arg(long)]
    discard_cnf: bool,
    /// Instances solved concurrently.
    #[arg(long)]
    jobs: Option<usize>,
}

struct Ctx {
    cfg: JobConfig,
    out: PathBuf,
    json: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp_millis()
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chirosat: error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = JobConfig::load_opt(cli.config.as_deref())?;
    let out = cli
        .out
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("chirosat-out"));
    let ctx = Ctx {
        cfg,
        out,
        json: cli.json,
    };
    match cli.command {
        Command::Encode { spec, catalog } => encode(&ctx, &spec, catalog),
        Command::Solve { spec, cnf, tools } => match cnf {
            Some(cnf) => solve_file(&ctx, &cnf, &tools),
            None => solve(&ctx, &spec, &tools),
        },
        Command::Verify { chirotope, spec } => verify(&ctx, &chirotope, &spec),
        Command::Frompoints { points, scan, k } => frompoints(&ctx, points.as_deref(), scan, k),
        Command::Bound { job, tools } => bound(&ctx, &job, &tools),
        Command::Pipeline {
            range,
            no_symmetry_breaking,
            tools,
        } => pipeline(&ctx, range, no_symmetry_breaking, &tools),
    }
}

fn required<T>(flag: Option<T>, cfg: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(cfg)
        .ok_or_else(|| CliError::Config(format!("missing `{name}` (flag or config key)")))
}

impl SpecArgs {
    fn is_empty(&self) -> bool {
        self.d.is_none() && self.n.is_none() && self.k.is_none() && self.mode.is_none() && self.m.is_none()
    }

    fn resolve(&self, cfg: &JobConfig) -> Result<ProblemSpec, CliError> {
        let mode = required(self.mode, cfg.mode, "mode")?;
        let spec = ProblemSpec {
            d: required(self.d, cfg.d, "d")?,
            n: required(self.n, cfg.n, "n")?,
            k: required(self.k, cfg.k, "k")?,
            mode,
            m: self.m.or(cfg.m),
            symmetry_breaking: !self.no_symmetry_breaking && cfg.symmetry_breaking.unwrap_or(true),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl Ctx {
    fn create_out(&self) -> Result<(), CliError> {
        fs::create_dir_all(&self.out).map_err(|e| CliError::io(format!("creating {}", self.out.display()), e))
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
        fs::write(&path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        Ok(path)
    }

    /// Prints `value` as JSON with `--json`, else the text form.
    fn emit<T: Serialize>(&self, value: &T, text: &str) {
        let mut stdout = std::io::stdout().lock();
        if self.json {
            let _ = writeln!(
                stdout,
                "{}",
                serde_json::to_string_pretty(value).expect("report serializes")
            );
        } else {
            let _ = write!(stdout, "{text}");
        }
    }

    fn tools(&self, t: &ToolArgs, no_symmetry_breaking: bool) -> Result<BoundOptions, CliError> {
        let cfg = &self.cfg;
        let timeout = t.timeout.or(cfg.timeout).map(Duration::try_from_secs_f64).transpose();
        let timeout = timeout.map_err(|e| CliError::Config(format!("timeout: {e}")))?;
        let mut extra = cfg.solver_args.clone();
        extra.extend(t.solver_args.iter().cloned());
        let solver = match t.solver.clone().or_else(|| cfg.solver.clone()) {
            Some(p) => SolverConfig::preset(p),
            None => SolverConfig::from_env()?,
        }
        .with_timeout(timeout)
        .with_extra_args(extra);
        let verify = !t.no_verify && cfg.verify.unwrap_or(true);
        let checker = if verify {
            let mut c = match t.checker.clone().or_else(|| cfg.checker.clone()) {
                Some(p) => CheckerConfig::preset(p),
                None => CheckerConfig::from_env()?,
            }
            .with_timeout(timeout);
            c.extra_args = cfg.checker_args.clone();
            Some(c)
        } else {
            None
        };
        let mut opts = BoundOptions::new(solver, checker, self.out.clone());
        opts.keep_proofs = t.keep_proofs || cfg.keep_proofs.unwrap_or(false);
        opts.keep_cnf = !t.discard_cnf && cfg.keep_cnf.unwrap_or(true);
        opts.jobs = t.jobs.or(cfg.jobs).unwrap_or(1).max(1);
        opts.symmetry_breaking = !no_symmetry_breaking && cfg.symmetry_breaking.unwrap_or(true);
        Ok(opts)
    }
}

fn encode(ctx: &Ctx, spec: &SpecArgs, catalog: bool) -> Result<(), CliError> {
    let spec = spec.resolve(&ctx.cfg)?;
    ctx.create_out()?;
    let slug = spec.slug();
    let path = ctx.out.join(format!("{slug}.cnf"));
    log::info!("[{slug}] writing {}", path.display());
    let stats = write_instance(&spec, &path)?;
    if catalog {
        let vars = ctx.out.join(format!("{slug}.vars"));
        let file = fs::File::create(&vars).map_err(|e| CliError::io(format!("writing {}", vars.display()), e))?;
        spec.catalog()?
            .write_table(std::io::BufWriter::new(file))
            .map_err(|e| CliError::io(format!("writing {}", vars.display()), e))?;
    }
    #[derive(Serialize)]
    struct Encoded<'a> {
        spec: ProblemSpec,
        path: &'a Path,
        variables: usize,
        clauses: usize,
        bytes: u64,
    }
    let report = Encoded {
        spec,
        path: &path,
        variables: stats.variables,
        clauses: stats.clauses,
        bytes: stats.bytes,
    };
    let text = format!(
        "{}: {} variables, {} clauses, {} bytes\n",
        path.display(),
        stats.variables,
        stats.clauses,
        stats.bytes
    );
    ctx.emit(&report, &text);
    Ok(())
}

fn solve(ctx: &Ctx, spec: &SpecArgs, tools: &ToolArgs) -> Result<(), CliError> {
    let spec = spec.resolve(&ctx.cfg)?;
    let opts = ctx.tools(tools, !spec.symmetry_breaking)?;
    ctx.create_out()?;
    let registry = RunRegistry::new();
    let row = witness::solve_instance(&spec, &opts, &registry)?;
    let slug = spec.slug();
    ctx.write_json(&format!("{slug}.result.json"), &row)?;
    registry.write_json(&ctx.out.join(format!("{slug}.runs.json")))?;
    let mut text = format!(
        "{spec}: {}{}\n",
        row.status,
        if row.certified {
            " (certified)"
        } else {
            " (not certified)"
        }
    );
    if let Some(w) = &row.witness_path {
        text.push_str(&format!("witness: {}\n", w.display()));
    }
    if let Some(r) = &row.witness_report {
        text.push_str(&r.to_string());
    }
    if let Some(d) = &row.detail {
        text.push_str(&format!("detail: {d}\n"));
    }
    ctx.emit(&row, &text);
    let unverified_unsat_ok = row.status == RowStatus::Unsat && opts.checker.is_none();
    match row.status {
        RowStatus::Sat | RowStatus::Unsat if row.certified || unverified_unsat_ok => Ok(()),
        _ => Err(CliError::Outcome(format!("{slug}: {} without certificate", row.status))),
    }
}

fn solve_file(ctx: &Ctx, cnf: &Path, tools: &ToolArgs) -> Result<(), CliError> {
    let opts = ctx.tools(tools, false)?;
    ctx.create_out()?;
    let stem = cnf
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    let proof = ctx.out.join(format!("{stem}.drat"));
    let outcome = run_solver(cnf, &opts.solver, opts.checker.as_ref().map(|_| proof.as_path()))?;
    let check = match (&opts.checker, &outcome.proof_path) {
        (Some(c), Some(p)) => Some(check_proof(cnf, p, c)?),
        _ => None,
    };
    if !opts.keep_proofs && proof.exists() {
        let _ = fs::remove_file(&proof);
    }
    #[derive(Serialize)]
    struct FileResult<'a> {
        outcome: &'a chirosat::SolverOutcome,
        check: &'a Option<chirosat::solver::ProofCheck>,
    }
    let report = FileResult {
        outcome: &outcome,
        check: &check,
    };
    ctx.write_json(&format!("{stem}.result.json"), &report)?;
    let verdict = check
        .as_ref()
        .map(|c| format!(" (proof {:?})", c.verdict))
        .unwrap_or_default();
    ctx.emit(&report, &format!("{}: {}{verdict}\n", cnf.display(), outcome.status));
    match outcome.status {
        SolverStatus::Sat => Ok(()),
        SolverStatus::Unsat if check.as_ref().is_none_or(|c| c.verified()) => Ok(()),
        s => Err(CliError::Outcome(format!("{}: {s} without certificate", cnf.display()))),
    }
}

fn verify(ctx: &Ctx, path: &Path, spec: &SpecArgs) -> Result<(), CliError> {
    let (chi, stored) = witness::load_witness(path)?;
    let spec = if spec.is_empty() && ctx.cfg.mode.is_none() {
        stored
            .ok_or_else(|| CliError::Config(format!("no problem given and no spec file next to {}", path.display())))?
    } else {
        spec.resolve(&ctx.cfg)?
    };
    let report = witness::verify_witness(&chi, &spec)?;
    #[derive(Serialize)]
    struct Verified<'a> {
        spec: ProblemSpec,
        passed: bool,
        report: &'a WitnessReport,
    }
    let passed = report.passed();
    ctx.emit(
        &Verified {
            spec,
            passed,
            report: &report,
        },
        &format!("{} vs {spec}\n{report}", path.display()),
    );
    if passed {
        Ok(())
    } else {
        Err(CliError::Outcome(format!("{} fails {spec}", path.display())))
    }
}

#[derive(Serialize)]
struct PointsReport {
    n: usize,
    d: usize,
    chirotope: PathBuf,
    axioms: CheckStatus<chirosat::AxiomViolation>,
    acyclic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    scan: Option<ScanReport>,
}

#[derive(Serialize)]
struct ScanReport {
    mode: Mode,
    k: usize,
    #[serde(with = "chirosat::one_based::option")]
    found: Option<Vec<usize>>,
    #[serde(with = "chirosat::one_based::option")]
    geometric: Option<Vec<usize>>,
}

fn frompoints(ctx: &Ctx, points: Option<&Path>, scan: Option<ScanMode>, k: Option<usize>) -> Result<(), CliError> {
    let (set, stem) = match (
        points.map(Path::to_path_buf).or(ctx.cfg.points_file.clone()),
        &ctx.cfg.points,
    ) {
        (Some(p), _) => {
            let text = fs::read_to_string(&p).map_err(|e| CliError::io(format!("reading {}", p.display()), e))?;
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "points".into());
            (PointSet::parse(&text)?, stem)
        }
        (None, Some(inline)) => {
            let dim = inline.first().map_or(0, Vec::len);
            let coords = inline.iter().map(|p| p.iter().map(|&c| c.into()).collect()).collect();
            (PointSet::new(dim, coords)?, "points".to_string())
        }
        (None, None) => return Err(CliError::Config("no point file given".into())),
    };
    let chi: Chirotope = set.chirotope()?;
    ctx.create_out()?;
    let chi_path = ctx.out.join(format!("{stem}.chi"));
    fs::write(&chi_path, chi.to_string()).map_err(|e| CliError::io(format!("writing {}", chi_path.display()), e))?;
    let axioms = match chi.verify_axioms(AxiomMethod::ThreeTerm) {
        Ok(()) => CheckStatus::Pass,
        Err(v) => CheckStatus::Fail(v),
    };
    let acyclic = chi.is_acyclic()?;
    let scan = match scan {
        None => None,
        Some(s) => {
            let k = k.expect("clap enforces --k");
            let mode = match s {
                ScanMode::Gon => Mode::Gon,
                ScanMode::Hole => Mode::Hole,
            };
            let found = match mode {
                Mode::Gon => chi.find_k_gon(k)?,
                Mode::Hole => chi.find_k_hole(k)?,
            };
            let geometric = geometric_scan(&set, k, mode)?;
            Some(ScanReport {
                mode,
                k,
                found,
                geometric,
            })
        }
    };
    let report = PointsReport {
        n: set.len(),
        d: set.dim(),
        chirotope: chi_path.clone(),
        axioms,
        acyclic,
        scan,
    };
    ctx.write_json(&format!("{stem}.points.json"), &report)?;
    let mut text = format!(
        "{} points in dimension {} -> {} (rank {})\naxioms: {}\nacyclic: {}\n",
        report.n,
        report.d,
        chi_path.display(),
        chi.rank(),
        if report.axioms.passed() { "pass" } else { "FAIL" },
        if acyclic { "yes" } else { "NO" }
    );
    if let Some(s) = &report.scan {
        let what = match s.mode {
            Mode::Gon => "gon",
            Mode::Hole => "hole",
        };
        match &s.found {
            None => text.push_str(&format!("no {}-{what}\n", s.k)),
            Some(w) => text.push_str(&format!("{}-{what}: {}\n", s.k, chirosat::labels(w))),
        }
    }
    ctx.emit(&report, &text);
    if !report.axioms.passed() || !acyclic {
        return Err(CliError::Outcome(
            "chirotope of the point set fails its own checks".into(),
        ));
    }
    if let Some(s) = &report.scan {
        if s.found != s.geometric {
            return Err(CliError::Outcome("chirotope scan and coordinate scan disagree".into()));
        }
    }
    Ok(())
}

fn bound(ctx: &Ctx, job: &BoundArgs, tools: &ToolArgs) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let d = required(job.d, cfg.d, "d")?;
    let k = required(job.k, cfg.k, "k")?;
    let mode = required(job.mode, cfg.mode, "mode")?;
    if mode == ProblemMode::HullFrameHole {
        return Err(CliError::Config(
            "bound takes mode gon or hole; use `pipeline` for hull frames".into(),
        ));
    }
    let ns = parse_range(&required(job.range.clone(), cfg.range.clone(), "range")?)?;
    for &n in &ns {
        ProblemSpec {
            mode,
            ..ProblemSpec::gon(d, n, k)
        }
        .validate()?;
    }
    let mut opts = ctx.tools(tools, job.no_symmetry_breaking)?;
    opts.stop_at_first_unsat = job.stop_early || cfg.stop_early.unwrap_or(false);
    ctx.create_out()?;
    let registry = RunRegistry::new();
    let table = witness::compute_bound(d, k, mode, &ns, &opts, &registry)?;
    let name = format!("bound_{mode}_d{d}_k{k}_n{}-{}", ns[0], ns[ns.len() - 1]);
    ctx.write_json(&format!("{name}.json"), &table)?;
    registry.write_json(&ctx.out.join(format!("{name}.runs.json")))?;
    ctx.emit(&table, &table.to_string());
    match (table.bound, table.upper) {
        (None, None) => Err(CliError::Outcome("no certified bound in this range".into())),
        _ => Ok(()),
    }
}

fn pipeline(ctx: &Ctx, range: Option<String>, no_symmetry_breaking: bool, tools: &ToolArgs) -> Result<(), CliError> {
    let ns = parse_range(&required(range, ctx.cfg.range.clone(), "range")?)?;
    let opts = ctx.tools(tools, no_symmetry_breaking)?;
    ctx.create_out()?;
    let registry = RunRegistry::new();
    let report = witness::hexagon_pipeline(&ns, &opts, &registry)?;
    let name = format!("pipeline_n{}-{}", ns[0], ns[ns.len() - 1]);
    ctx.write_json(&format!("{name}.json"), &report)?;
    registry.write_json(&ctx.out.join(format!("{name}.runs.json")))?;
    ctx.emit(&report, &report.to_string());
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Outcome(
            "not every instance is certified unsatisfiable".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    use super::Cli;

    #[test]
    fn argument_definitions() {
        Cli::command().debug_assert();
    }
}
