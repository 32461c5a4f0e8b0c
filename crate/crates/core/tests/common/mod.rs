#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use chirosat::chirotope::Chirotope;
use chirosat::witness::{decode_model, induced_assignment, normalising_order};
use chirosat::{encoder, geometric_scan, AxiomMethod, CnfInstance, Mode, PointSetI64, ProblemMode, ProblemSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The rank-4 set of 12 points in R^3 without a 7-gon.
pub const TWELVE_POINTS: [[i64; 3]; 12] = [
    [526, 446, 232],
    [0, 756, 64],
    [612, 660, 342],
    [708, 638, 193],
    [546, 563, 134],
    [616, 622, 174],
    [414, 0, 370],
    [548, 594, 151],
    [884, 1334, 722],
    [452, 668, 180],
    [587, 659, 156],
    [579, 692, 0],
];

pub fn twelve_points() -> PointSetI64 {
    PointSetI64::new(3, TWELVE_POINTS.iter().map(|p| p.to_vec()).collect()).unwrap()
}

/// Uniformly random integer points in `[-bound, bound]^d`, redrawn until
/// they are in general position.
pub fn random_general_position(rng: &mut impl Rng, d: usize, n: usize, bound: i64) -> PointSetI64 {
    loop {
        let coords = (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-bound..=bound)).collect())
            .collect();
        let set = PointSetI64::new(d, coords).unwrap();
        if set.in_general_position() {
            return set;
        }
    }
}

/// External tools, when installed next to the cargo binaries or on PATH.
pub fn tool(name: &str) -> Option<PathBuf> {
    let env = match name {
        "checker" => std::env::var_os("CHIROSAT_CHECKER"),
        _ => std::env::var_os("CHIROSAT_SOLVER"),
    };
    if let Some(p) = env {
        return Some(PathBuf::from(p));
    }
    let candidates: &[&str] = match name {
        "checker" => &["drat-trim", "rate"],
        _ => &["cadical", "kissat", "varisat"],
    };
    let mut dirs: Vec<PathBuf> = std::env::var_os("PATH")
        .map(|p| std::env::split_paths(&p).collect())
        .unwrap_or_default();
    dirs.push(PathBuf::from("/opt/cargo/bin"));
    candidates
        .iter()
        .flat_map(|c| dirs.iter().map(move |d| d.join(c)))
        .find(|p| p.is_file())
}

#[derive(Debug, Default)]
pub struct SuiteStats {
    pub sets: usize,
    pub completeness_checks: usize,
    pub violation_checks: usize,
    pub scan_comparisons: usize,
}

/// Runs the realizable-chirotope checks on `count` random sets and returns
/// the first failure.
pub fn property_suite(seed: u64, count: usize) -> Result<SuiteStats, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SuiteStats::default();
    let mut cache: HashMap<ProblemSpec, CnfInstance> = HashMap::new();
    for i in 0..count {
        let d = if i % 2 == 0 { 2 } else { 3 };
        let n = rng.random_range(d + 2..=9);
        let bound = if d == 2 { 40 } else { 12 };
        let set = random_general_position(&mut rng, d, n, bound);
        let chi = set.chirotope().map_err(|e| e.to_string())?;
        let ctx = |what: &str| format!("set {i} (d={d}, n={n}) {:?}: {what}", set_coords(&set));
        for method in [AxiomMethod::ThreeTerm, AxiomMethod::FullExchange] {
            chi.verify_axioms(method)
                .map_err(|v| ctx(&format!("{method:?} axioms: {v}")))?;
        }
        if !chi.is_acyclic().unwrap() {
            return Err(ctx("not acyclic"));
        }
        for mode in [Mode::Gon, Mode::Hole] {
            let mut largest = d + 1;
            for k in 3..=n {
                let found = match mode {
                    Mode::Gon => chi.find_k_gon(k),
                    Mode::Hole => chi.find_k_hole(k),
                }
                .unwrap();
                let scanned = geometric_scan(&set, k, mode).unwrap();
                stats.scan_comparisons += 1;
                if found != scanned {
                    return Err(ctx(&format!(
                        "{mode:?} k={k}: chirotope {found:?}, geometry {scanned:?}"
                    )));
                }
                if found.is_some() {
                    largest = k;
                }
            }
            let pmode = match mode {
                Mode::Gon => ProblemMode::Gon,
                Mode::Hole => ProblemMode::Hole,
            };
            let free = largest + 1;
            if free <= n && free >= d + 2 {
                check_instance(
                    &chi,
                    ProblemSpec {
                        mode: pmode,
                        ..ProblemSpec::gon(d, n, free)
                    },
                    true,
                    &mut cache,
                )
                .map_err(|e| ctx(&e))?;
                stats.completeness_checks += 1;
            }
            if largest >= d + 2 {
                check_instance(
                    &chi,
                    ProblemSpec {
                        mode: pmode,
                        ..ProblemSpec::gon(d, n, largest)
                    },
                    false,
                    &mut cache,
                )
                .map_err(|e| ctx(&e))?;
                stats.violation_checks += 1;
            }
        }
        stats.sets += 1;
    }
    Ok(stats)
}

fn set_coords(set: &PointSetI64) -> Vec<Vec<i64>> {
    set.iter().map(|p| p.to_vec()).collect()
}

/// With `free`, the induced assignment must satisfy the literal encoding
/// and, after normalising the labels, the symmetry-reduced one. Without,
/// it must violate the literal encoding.
fn check_instance(
    chi: &Chirotope,
    spec: ProblemSpec,
    free: bool,
    cache: &mut HashMap<ProblemSpec, CnfInstance>,
) -> Result<(), String> {
    let cat = spec.catalog().unwrap();
    let plain_spec = spec.with_symmetry_breaking(false);
    for s in [spec, plain_spec] {
        cache.entry(s).or_insert_with(|| encoder::assemble(&s).unwrap());
    }
    let plain = &cache[&plain_spec];
    let assignment = induced_assignment(chi, &cat).unwrap();
    let unsat = plain.first_unsatisfied(&assignment);
    if !free {
        return match unsat {
            Some(_) => Ok(()),
            None => Err(format!("{spec}: configuration present but every clause satisfied")),
        };
    }
    if let Some(c) = unsat {
        return Err(format!("{spec}: clause {c} {:?} unsatisfied", plain.clause(c)));
    }
    let order = normalising_order(chi, &spec).ok_or_else(|| format!("{spec}: no normalising order"))?;
    let normal = chi.relabeled(&order).unwrap();
    let reduced = &cache[&spec];
    let assignment = induced_assignment(&normal, &cat).unwrap();
    if let Some(c) = reduced.first_unsatisfied(&assignment) {
        return Err(format!(
            "{spec}: normalised, clause {c} {:?} unsatisfied",
            reduced.clause(c)
        ));
    }
    let model: Vec<i32> = (1..assignment.len())
        .map(|v| if assignment[v] { v as i32 } else { -(v as i32) })
        .collect();
    if decode_model(&model, &cat).unwrap() != normal {
        return Err(format!("{spec}: decode_model does not invert the induced assignment"));
    }
    Ok(())
}
