//! CNF model for "a rank-`d+1` acyclic chirotope on `n` elements without
//! `k`-gons / `k`-holes".
//!
//! Clause families are emitted in a fixed order: Graßmann–Plücker,
//! acyclicity, auxiliary definitions, the problem constraints, and finally
//! the optional labelling normalisation.

mod catalog;
mod cnf;
pub mod families;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use catalog::{Atom, VarCatalog};
pub use cnf::{ClauseCounter, ClauseSink, CnfInstance, DimacsClauseWriter};
pub use families::{
    clauses_acyclic, clauses_aux_defs, clauses_frame_order, clauses_gp, clauses_hull_frame, clauses_no_gon,
    clauses_no_hole, clauses_symmetry_breaking,
};

/// Written into every DIMACS file so instances can be traced to a generator.
pub const GENERATOR: &str = concat!("chirosat ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("need n >= d + 2 elements, got n = {n}, d = {d}")]
    TooFewElements { n: usize, d: usize },
    #[error("subset size k = {k} must satisfy d + 2 <= k <= n (d = {d}, n = {n})")]
    SubsetSize { k: usize, n: usize, d: usize },
    #[error("hull frame needs 3 <= m <= n, got m = {m}, n = {n}")]
    HullSize { m: usize, n: usize },
    #[error("hull frame mode is planar only, got d = {0}")]
    HullFrameDimension(usize),
    #[error("hull size m is only meaningful in hull_frame_hole mode")]
    UnexpectedHullSize,
    #[error("{0} variables exceed the DIMACS range")]
    TooManyVariables(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemMode {
    Gon,
    Hole,
    /// Elements `1..=m` span a convex `m`-gon containing all other elements,
    /// and there is no `k`-hole.
    HullFrameHole,
}

impl ProblemMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemMode::Gon => "gon",
            ProblemMode::Hole => "hole",
            ProblemMode::HullFrameHole => "hull_frame_hole",
        }
    }
}

impl fmt::Display for ProblemMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ProblemMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gon" => Ok(ProblemMode::Gon),
            "hole" => Ok(ProblemMode::Hole),
            "hull_frame_hole" | "hull-frame-hole" => Ok(ProblemMode::HullFrameHole),
            other => Err(format!("unknown mode {other:?} (gon, hole, hull_frame_hole)")),
        }
    }
}

/// One instance: dimension, element count, forbidden subset size, mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub mode: ProblemMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Add the labelling normalisation clauses. Without them the solver
    /// has to refute every relabelling of a configuration separately.
    #[serde(default = "yes")]
    pub symmetry_breaking: bool,
}

fn yes() -> bool {
    true
}

impl ProblemSpec {
    pub fn gon(d: usize, n: usize, k: usize) -> Self {
        ProblemSpec {
            d,
            n,
            k,
            mode: ProblemMode::Gon,
            m: None,
            symmetry_breaking: true,
        }
    }

    pub fn hole(d: usize, n: usize, k: usize) -> Self {
        ProblemSpec {
            d,
            n,
            k,
            mode: ProblemMode::Hole,
            m: None,
            symmetry_breaking: true,
        }
    }

    /// Planar instance with a convex `m`-gon frame and no `k`-hole.
    pub fn hull_frame(n: usize, m: usize, k: usize) -> Self {
        ProblemSpec {
            d: 2,
            n,
            k,
            mode: ProblemMode::HullFrameHole,
            m: Some(m),
            symmetry_breaking: true,
        }
    }

    pub fn with_symmetry_breaking(mut self, on: bool) -> Self {
        self.symmetry_breaking = on;
        self
    }

    pub fn validate(&self) -> Result<(), EncodeError> {
        if self.d < 2 {
            return Err(EncodeError::Dimension(self.d));
        }
        if self.k < self.d + 2 || self.k > self.n {
            return Err(EncodeError::SubsetSize {
                k: self.k,
                n: self.n,
                d: self.d,
            });
        }
        match (self.mode, self.m) {
            (ProblemMode::HullFrameHole, m) => {
                if self.d != 2 {
                    return Err(EncodeError::HullFrameDimension(self.d));
                }
                let m = m.unwrap_or(0);
                if m < 3 || m > self.n {
                    return Err(EncodeError::HullSize { m, n: self.n });
                }
            }
            (_, Some(_)) => return Err(EncodeError::UnexpectedHullSize),
            (_, None) => {}
        }
        Ok(())
    }

    /// Short identifier used for artifact names, e.g. `gon_d2_n5_k4`.
    pub fn slug(&self) -> String {
        let mut s = format!("{}_d{}_n{}_k{}", self.mode, self.d, self.n, self.k);
        if let Some(m) = self.m {
            s.push_str(&format!("_m{m}"));
        }
        if !self.symmetry_breaking {
            s.push_str("_plain");
        }
        s
    }

    pub fn catalog(&self) -> Result<VarCatalog, EncodeError> {
        self.validate()?;
        VarCatalog::new(self.n, self.d)
    }

    fn comments(&self, cat: &VarCatalog) -> Vec<String> {
        let s = cat.sign_count();
        let p = cat.sep_count();
        let total = cat.num_vars();
        let mut out = vec![
            GENERATOR.to_string(),
            format!(
                "problem d={} n={} k={} mode={}{}",
                self.d,
                self.n,
                self.k,
                self.mode,
                self.m.map(|m| format!(" m={m}")).unwrap_or_default()
            ),
            format!("sign variables 1..{s} (true means +, sorted tuples in colex order)"),
        ];
        out.push(format!("separation variables {}..{}", s + 1, s + p));
        out.push(format!("containment variables {}..{}", s + p + 1, total));
        out.push(format!(
            "symmetry breaking {}",
            if self.symmetry_breaking { "on" } else { "off" }
        ));
        out
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} d={} n={} k={}", self.mode, self.d, self.n, self.k)?;
        if let Some(m) = self.m {
            write!(f, " m={m}")?;
        }
        Ok(())
    }
}

/// Streams every clause of the instance into `sink`.
pub fn emit(spec: &ProblemSpec, sink: &mut impl ClauseSink) -> Result<VarCatalog, EncodeError> {
    let cat = spec.catalog()?;
    families::emit_gp(&cat, sink);
    families::emit_acyclic(&cat, sink);
    families::emit_aux_defs(&cat, sink);
    match spec.mode {
        ProblemMode::Gon => families::emit_no_gon(&cat, spec.k, sink)?,
        ProblemMode::Hole => families::emit_no_hole(&cat, spec.k, sink)?,
        ProblemMode::HullFrameHole => {
            families::emit_hull_frame(&cat, spec.m.expect("validated"), sink)?;
            families::emit_no_hole(&cat, spec.k, sink)?;
        }
    }
    if spec.symmetry_breaking {
        match spec.mode {
            ProblemMode::Gon | ProblemMode::Hole => families::emit_symmetry_breaking(&cat, sink),
            ProblemMode::HullFrameHole => families::emit_frame_order(&cat, spec.m.expect("validated"), sink)?,
        }
    }
    Ok(cat)
}

/// Builds the whole instance in memory.
pub fn assemble(spec: &ProblemSpec) -> Result<CnfInstance, EncodeError> {
    let cat = spec.catalog()?;
    let mut inst = CnfInstance::with_comments(cat.num_vars(), spec.comments(&cat));
    emit(spec, &mut inst)?;
    Ok(inst)
}

#[derive(Debug, Error)]
pub enum WriteError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("writing DIMACS: {0}")]
    Io(#[from] io::Error),
}

/// Summary of a streamed instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceStats {
    pub variables: usize,
    pub clauses: usize,
    pub literals: usize,
    pub bytes: u64,
}

/// Writes the DIMACS file without holding the clauses in memory: one pass
/// counts, a second pass writes. The bytes equal
/// `assemble(spec)?.write_dimacs(..)`.
pub fn write_instance(spec: &ProblemSpec, path: &Path) -> Result<InstanceStats, WriteError> {
    let cat = spec.catalog()?;
    let mut counter = ClauseCounter::default();
    emit(spec, &mut counter)?;
    let mut out = BufWriter::with_capacity(1 << 20, File::create(path)?);
    cnf::write_preamble(&mut out, &spec.comments(&cat), cat.num_vars(), counter.clauses)?;
    let mut body = DimacsClauseWriter::new(out);
    emit(spec, &mut body)?;
    body.finish()?.flush()?;
    Ok(InstanceStats {
        variables: cat.num_vars(),
        clauses: counter.clauses,
        literals: counter.literals,
        bytes: std::fs::metadata(path)?.len(),
    })
}
