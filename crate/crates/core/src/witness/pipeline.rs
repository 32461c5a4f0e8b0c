use std::fmt;

use serde::{Deserialize, Serialize};

use super::bound::{run_batches, write_rows, BoundOptions, BoundRow, RowStatus};
use super::WitnessError;
use crate::encoder::ProblemSpec;
use crate::solver::RunRegistry;

/// Size of the convex frame `A`.
pub const HEXAGON_FRAME: usize = 9;
/// Forbidden hole size.
pub const HEXAGON_K: usize = 6;
const RANGE: std::ops::RangeInclusive<usize> = 9..=22;

/// One row per `n`: no planar set of `n` points whose first 9 form a
/// convex 9-gon containing the rest has a 6-hole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub rows: Vec<BoundRow>,
    pub total_cnf_bytes: u64,
    pub total_proof_bytes: u64,
    /// Every requested `n` is UNSAT with an accepted proof.
    pub passed: bool,
}

/// Runs the hull-frame instances for each `n` in `n_range` (within 9..=22).
pub fn hexagon_pipeline(
    n_range: &[usize],
    opts: &BoundOptions,
    registry: &RunRegistry,
) -> Result<PipelineReport, WitnessError> {
    if n_range.is_empty() || n_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WitnessError::BadRange);
    }
    if let Some(&bad) = n_range.iter().find(|n| !RANGE.contains(n)) {
        return Err(WitnessError::PipelineRange(bad));
    }
    let specs: Vec<ProblemSpec> = n_range
        .iter()
        .map(|&n| ProblemSpec::hull_frame(n, HEXAGON_FRAME, HEXAGON_K).with_symmetry_breaking(opts.symmetry_breaking))
        .collect();
    let mut opts = opts.clone();
    opts.stop_at_first_unsat = false;
    let mut rows = run_batches(&specs, &opts, registry)?;
    rows.sort_by_key(|r| r.n);
    let passed = rows.len() == n_range.len() && rows.iter().all(|r| r.status == RowStatus::Unsat && r.certified);
    Ok(PipelineReport {
        total_cnf_bytes: rows.iter().map(|r| r.cnf_bytes).sum(),
        total_proof_bytes: rows.iter().filter_map(|r| r.proof_bytes).sum(),
        rows,
        passed,
    })
}

impl fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "convex {HEXAGON_FRAME}-gon frame without {HEXAGON_K}-hole, {} instances",
            self.rows.len()
        )?;
        write_rows(f, &self.rows)?;
        writeln!(
            f,
            "total DIMACS {} bytes, total proofs {} bytes",
            self.total_cnf_bytes, self.total_proof_bytes
        )?;
        writeln!(f, "pipeline: {}", if self.passed { "PASS" } else { "FAIL" })
    }
}
