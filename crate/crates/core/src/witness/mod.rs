//! Turning solver results back into checked mathematical statements.
//!
//! Models are decoded into chirotopes and re-checked without the CNF;
//! unsatisfiable instances count only with an accepted DRAT proof.

mod bound;
mod pipeline;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::chirotope::{
    AxiomMethod, CheckStatus, Chirotope, ChirotopeError, ConstraintCheck, ConstraintKind, ContainmentTable,
    WitnessReport,
};
use crate::combinatorics::{subsets, Lex};
use crate::encoder::{
    clauses_frame_order, clauses_symmetry_breaking, EncodeError, ProblemMode, ProblemSpec, VarCatalog, WriteError,
};
use crate::sign::Sign;
use crate::solver::SolverError;

pub use bound::{compute_bound, solve_instance, BoundOptions, BoundRow, BoundTable, RowStatus};
pub use pipeline::{hexagon_pipeline, PipelineReport, HEXAGON_FRAME, HEXAGON_K};

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("model leaves sign variable {var} ({}) unassigned", crate::labels(.tuple))]
    UnassignedSign { var: i32, tuple: Vec<usize> },
    #[error("model assigns variable {0} both ways")]
    ConflictingModel(i32),
    #[error("chirotope has n = {n}, rank {rank}; the problem needs n = {want_n}, rank {want_rank}")]
    ShapeMismatch {
        n: usize,
        rank: usize,
        want_n: usize,
        want_rank: usize,
    },
    #[error("n range must be ascending and non-empty")]
    BadRange,
    #[error("the hexagon pipeline covers 9 <= n <= 22, got {0}")]
    PipelineRange(usize),
    #[error(transparent)]
    Chirotope(#[from] ChirotopeError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Write(#[from] WriteError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    SpecFile { path: PathBuf, msg: String },
}

/// Reads the sign atoms off a model (signed variable numbers). Auxiliary
/// atoms are ignored.
pub fn decode_model(model: &[i32], catalog: &VarCatalog) -> Result<Chirotope, WitnessError> {
    let count = catalog.sign_count();
    let mut value: Vec<Option<bool>> = vec![None; count];
    for &lit in model {
        let v = lit.unsigned_abs() as usize;
        if v == 0 || v > count {
            continue;
        }
        let slot = &mut value[v - 1];
        match *slot {
            Some(old) if old != (lit > 0) => return Err(WitnessError::ConflictingModel(v as i32)),
            _ => *slot = Some(lit > 0),
        }
    }
    let signs = value
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            Some(true) => Ok(Sign::Positive),
            Some(false) => Ok(Sign::Negative),
            None => Err(WitnessError::UnassignedSign {
                var: i as i32 + 1,
                tuple: crate::combinatorics::colex_unrank(i, catalog.rank()),
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Chirotope::from_signs(catalog.n(), catalog.rank(), signs)?)
}

/// Full assignment induced by a uniform chirotope: sign atoms from the
/// signs, auxiliary atoms from their definitions. Indexed by variable,
/// slot 0 unused.
pub fn induced_assignment(chi: &Chirotope, catalog: &VarCatalog) -> Result<Vec<bool>, WitnessError> {
    use crate::encoder::Atom;
    check_shape(chi, catalog.n(), catalog.d())?;
    chi.require_uniform()?;
    let table = ContainmentTable::new(chi);
    let mut out = vec![false; catalog.num_vars() + 1];
    for (v, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = match catalog.atom(v as i32).expect("variable in catalog") {
            Atom::Sign(t) => chi.sign_sorted(&t) == Sign::Positive,
            Atom::Sep { hyperplane, pair } => {
                let side = |x: usize| {
                    let mut t = hyperplane.clone();
                    t.push(x);
                    chi.lookup(&t).expect("indices in range")
                };
                side(pair.0) != side(pair.1)
            }
            Atom::Cont { simplex, point } => table.contains(&simplex, point),
        };
    }
    Ok(out)
}

fn check_shape(chi: &Chirotope, n: usize, d: usize) -> Result<(), WitnessError> {
    if chi.len() != n || chi.rank() != d + 1 {
        return Err(WitnessError::ShapeMismatch {
            n: chi.len(),
            rank: chi.rank(),
            want_n: n,
            want_rank: d + 1,
        });
    }
    Ok(())
}

/// Checks a chirotope against a problem using only the chirotope: 3-term
/// axioms, acyclicity, and the forbidden configurations.
pub fn verify_witness(chi: &Chirotope, spec: &ProblemSpec) -> Result<WitnessReport, WitnessError> {
    check_shape(chi, spec.n, spec.d)?;
    let axioms = match chi.verify_axioms(AxiomMethod::ThreeTerm) {
        Ok(()) => CheckStatus::Pass,
        Err(v) => CheckStatus::Fail(v),
    };
    if !chi.is_uniform() {
        let why = "chirotope has zero signs".to_string();
        return Ok(WitnessReport {
            axioms,
            acyclic: CheckStatus::Skipped(why),
            constraints: Vec::new(),
        });
    }
    let acyclic = match chi.find_cyclic_pattern()? {
        None => CheckStatus::Pass,
        Some(p) => CheckStatus::Fail(p),
    };
    let mut constraints = Vec::new();
    match spec.mode {
        ProblemMode::Gon => constraints.push(ConstraintCheck {
            constraint: ConstraintKind::GonFree { k: spec.k },
            witness: chi.find_k_gon(spec.k)?,
        }),
        ProblemMode::Hole => constraints.push(ConstraintCheck {
            constraint: ConstraintKind::HoleFree { k: spec.k },
            witness: chi.find_k_hole(spec.k)?,
        }),
        ProblemMode::HullFrameHole => {
            let m = spec.m.expect("hull size in hull frame mode");
            constraints.push(ConstraintCheck {
                constraint: ConstraintKind::HullFrame { m },
                witness: hull_frame_violation(chi, m),
            });
            constraints.push(ConstraintCheck {
                constraint: ConstraintKind::HoleFree { k: spec.k },
                witness: chi.find_k_hole(spec.k)?,
            });
        }
    }
    Ok(WitnessReport {
        axioms,
        acyclic,
        constraints,
    })
}

/// A non-convex `(d+2)`-subset of the frame, or a single element outside
/// the frame's hull.
fn hull_frame_violation(chi: &Chirotope, m: usize) -> Option<Vec<usize>> {
    let table = ContainmentTable::new(chi);
    let frame: Vec<usize> = (0..m).collect();
    if let Some(u) = Lex::new(m, chi.rank() + 1).find(|u| !table.convex(u)) {
        return Some(u);
    }
    (m..chi.len())
        .find(|&q| !subsets(&frame, chi.rank()).any(|t| table.contains(&t, q)))
        .map(|q| vec![q])
}

/// A relabelling (new element `i` is old element `order[i]`) under which an
/// acyclic uniform chirotope meets the encoder's symmetry-breaking units.
///
/// Gon and hole problems: peel off an extreme element and contract, down
/// to rank 2, then sort the rest along the resulting line. Hull frame
/// problems: the frame counter-clockwise from element 0, then the other
/// elements sorted around element 0. `None` if no such order was found.
pub fn normalising_order(chi: &Chirotope, spec: &ProblemSpec) -> Option<Vec<usize>> {
    if chi.len() != spec.n || chi.rank() != spec.d + 1 || !chi.is_uniform() {
        return None;
    }
    let order: Vec<usize> = match spec.mode {
        ProblemMode::HullFrameHole => {
            let m = spec.m?;
            if chi.rank() != 3 || m < 3 || m > chi.len() {
                return None;
            }
            let around = |v: &mut Vec<usize>| v.sort_by(|&a, &b| chi.orient(&[0, b, a]).cmp(&Sign::Zero));
            let mut frame: Vec<usize> = (1..m).collect();
            let mut rest: Vec<usize> = (m..chi.len()).collect();
            around(&mut frame);
            around(&mut rest);
            std::iter::once(0).chain(frame).chain(rest).collect()
        }
        ProblemMode::Gon | ProblemMode::Hole => {
            let mut alive: Vec<usize> = (0..chi.len()).collect();
            let mut fixed = Vec::new();
            let mut cur = chi.clone();
            while cur.rank() > 2 {
                let table = ContainmentTable::new(&cur);
                let e = (0..cur.len()).find(|&e| {
                    let others: Vec<usize> = (0..cur.len()).filter(|&x| x != e).collect();
                    !table.covered(&others, e)
                })?;
                fixed.push(alive.remove(e));
                cur = cur.contraction(e).ok()?;
            }
            let mut line: Vec<usize> = (0..cur.len()).collect();
            line.sort_by(|&a, &b| cur.orient(&[b, a]).cmp(&Sign::Zero));
            fixed.into_iter().chain(line.into_iter().map(|i| alive[i])).collect()
        }
    };
    let normal = chi.relabeled(&order).ok()?;
    let cat = spec.catalog().ok()?;
    let units = match spec.mode {
        ProblemMode::HullFrameHole => clauses_frame_order(&cat, spec.m?).ok()?,
        _ => clauses_symmetry_breaking(&cat),
    };
    let signs = normal.signs();
    units
        .iter()
        .all(|u| signs[u[0] as usize - 1] == Sign::Positive)
        .then_some(order)
}

/// Stores a witness as `<stem>.chi` plus `<stem>.spec.json`.
pub fn save_witness(dir: &Path, stem: &str, chi: &Chirotope, spec: &ProblemSpec) -> Result<PathBuf, WitnessError> {
    let chi_path = dir.join(format!("{stem}.chi"));
    let spec_path = dir.join(format!("{stem}.spec.json"));
    let io = |p: &Path| {
        let context = format!("writing {}", p.display());
        move |source| WitnessError::Io { context, source }
    };
    fs::write(&chi_path, chi.to_string()).map_err(io(&chi_path))?;
    let json = serde_json::to_string_pretty(spec).expect("spec serializes") + "\n";
    fs::write(&spec_path, json).map_err(io(&spec_path))?;
    Ok(chi_path)
}

/// Reads a chirotope file and, if present, the spec stored next to it.
pub fn load_witness(chi_path: &Path) -> Result<(Chirotope, Option<ProblemSpec>), WitnessError> {
    let read = |p: &Path| {
        fs::read_to_string(p).map_err(|source| WitnessError::Io {
            context: format!("reading {}", p.display()),
            source,
        })
    };
    let chi: Chirotope = read(chi_path)?.parse()?;
    let spec_path = spec_path_for(chi_path);
    let spec = if spec_path.is_file() {
        let text = read(&spec_path)?;
        let spec: ProblemSpec = serde_json::from_str(&text).map_err(|e| WitnessError::SpecFile {
            path: spec_path.clone(),
            msg: e.to_string(),
        })?;
        Some(spec)
    } else {
        None
    };
    Ok((chi, spec))
}

fn spec_path_for(chi_path: &Path) -> PathBuf {
    let stem = chi_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    chi_path.with_file_name(format!("{stem}.spec.json"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::assemble;

    #[test]
    fn square_model_round_trip() {
        let cat = VarCatalog::new(4, 2).unwrap();
        let model: Vec<i32> = (1..=4).collect();
        let chi = decode_model(&model, &cat).unwrap();
        assert_eq!(chi.to_string(), "4 3\n++++\n");
    }

    #[test]
    fn missing_sign_atom() {
        let cat = VarCatalog::new(4, 2).unwrap();
        let err = decode_model(&[1, 2, -4], &cat).unwrap_err();
        assert!(matches!(err, WitnessError::UnassignedSign { var: 3, .. }), "{err}");
    }

    #[test]
    fn square_is_a_four_gon() {
        let square: Chirotope = "4 3\n++++".parse().unwrap();
        let report = verify_witness(&square, &ProblemSpec::gon(2, 4, 4)).unwrap();
        assert!(!report.passed());
        assert_eq!(report.constraints[0].witness, Some(vec![0, 1, 2, 3]));
        assert!(report.axioms.passed() && report.acyclic.passed());
    }

    #[test]
    fn triangle_with_center_satisfies_instance() {
        let chi = crate::PointSetI64::new(2, vec![vec![0, 0], vec![6, 0], vec![0, 6], vec![1, 1]])
            .unwrap()
            .chirotope()
            .unwrap();
        let spec = ProblemSpec::gon(2, 4, 4);
        assert!(verify_witness(&chi, &spec).unwrap().passed());
        let cat = spec.catalog().unwrap();
        let plain = assemble(&spec.with_symmetry_breaking(false)).unwrap();
        let assignment = induced_assignment(&chi, &cat).unwrap();
        assert_eq!(plain.first_unsatisfied(&assignment), None);
        // Element 4 is inside triangle 1 2 3.
        assert!(assignment[cat.cont_var(&[0, 1, 2], 3) as usize]);

        let order = normalising_order(&chi, &spec).unwrap();
        assert_eq!(order, vec![0, 1, 3, 2]);
        let normal = chi.relabeled(&order).unwrap();
        let assignment = induced_assignment(&normal, &cat).unwrap();
        assert_eq!(assemble(&spec).unwrap().first_unsatisfied(&assignment), None);
    }

    #[test]
    fn hull_frame_checks() {
        let pts = crate::PointSetI64::new(
            2,
            vec![
                vec![0, 0],
                vec![10, 0],
                vec![10, 10],
                vec![0, 10],
                vec![3, 4],
                vec![20, 3],
            ],
        )
        .unwrap();
        let chi = pts.chirotope().unwrap();
        assert_eq!(hull_frame_violation(&chi, 4), Some(vec![5]));
        assert_eq!(hull_frame_violation(&chi, 5), Some(vec![0, 1, 3, 4]));
    }

    #[test]
    fn witness_files() {
        let dir = tempfile::tempdir().unwrap();
        let square: Chirotope = "4 3\n++++".parse().unwrap();
        let spec = ProblemSpec::gon(2, 4, 4);
        let p = save_witness(dir.path(), "sq", &square, &spec).unwrap();
        let (chi, back) = load_witness(&p).unwrap();
        assert_eq!(chi, square);
        assert_eq!(back, Some(spec));
    }
}
