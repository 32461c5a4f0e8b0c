mod common;

use chirosat::solver::{CheckerConfig, RunRegistry};
use chirosat::witness::{compute_bound, load_witness, solve_instance, verify_witness, BoundOptions, RowStatus};
use chirosat::{ProblemMode, ProblemSpec, SolverConfig};

fn options(dir: &std::path::Path) -> BoundOptions {
    let solver = SolverConfig::preset(common::tool("solver").expect("no SAT solver found"));
    let checker = CheckerConfig::preset(common::tool("checker").expect("no DRAT checker found"));
    BoundOptions::new(solver, Some(checker), dir)
}

#[test]
fn g2_4_is_5() {
    let dir = tempfile::tempdir().unwrap();
    let registry = RunRegistry::new();
    let table = compute_bound(2, 4, ProblemMode::Gon, &[4, 5], &options(dir.path()), &registry).unwrap();
    assert_eq!(table.bound, Some(5), "{table}");
    let sat = table.row(4).unwrap();
    assert!(sat.certified);
    let (chi, spec) = load_witness(sat.witness_path.as_ref().unwrap()).unwrap();
    assert_eq!(spec, Some(ProblemSpec::gon(2, 4, 4)));
    assert!(verify_witness(&chi, &ProblemSpec::gon(2, 4, 4)).unwrap().passed());
    assert_eq!(registry.snapshot().len(), 2);
    assert!(
        table.row(5).unwrap().proof_path.is_none(),
        "proofs are discarded by default"
    );
}

/// Every satisfiable instance decodes to a chirotope that passes the
/// independent checks, with and without the labelling normalisation.
#[test]
fn sat_models_are_sound() {
    let dir = tempfile::tempdir().unwrap();
    let registry = RunRegistry::new();
    let mut opts = options(dir.path());
    opts.checker = None;
    let mut specs = Vec::new();
    for n in 5..=8 {
        specs.push(ProblemSpec::gon(2, n, 5));
        specs.push(ProblemSpec::hole(2, n + 1, 5));
    }
    for n in 6..=8 {
        specs.push(ProblemSpec::hole(3, n, 6));
        specs.push(ProblemSpec::gon(3, n, 6));
    }
    specs.push(ProblemSpec::hull_frame(9, 6, 6));
    specs.push(ProblemSpec::hull_frame(8, 5, 6));
    for spec in specs {
        for sb in [true, false] {
            let spec = spec.with_symmetry_breaking(sb);
            let row = solve_instance(&spec, &opts, &registry).unwrap();
            assert_eq!(row.status, RowStatus::Sat, "{spec}: {:?}", row.detail);
            assert!(row.certified, "{spec}: {:?}", row.witness_report);
            let (chi, _) = load_witness(row.witness_path.as_ref().unwrap()).unwrap();
            assert!(verify_witness(&chi, &spec).unwrap().passed());
        }
    }
}

#[test]
fn hull_frame_small_unsat() {
    let dir = tempfile::tempdir().unwrap();
    let registry = RunRegistry::new();
    let row = solve_instance(&ProblemSpec::hull_frame(9, 9, 6), &options(dir.path()), &registry).unwrap();
    assert_eq!(row.status, RowStatus::Unsat);
    assert!(row.certified, "{:?}", row.detail);
}
