use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AxiomViolation, CyclicPattern};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "counterexample")]
pub enum CheckStatus<V> {
    Pass,
    Fail(V),
    /// The check could not run, e.g. because an earlier one failed.
    Skipped(String),
}

impl<V> CheckStatus<V> {
    pub fn passed(&self) -> bool {
        matches!(self, CheckStatus::Pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ConstraintKind {
    GonFree {
        k: usize,
    },
    HoleFree {
        k: usize,
    },
    /// Elements `1..=m` in convex position, all others inside their hull.
    HullFrame {
        m: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub constraint: ConstraintKind,
    #[serde(with = "crate::one_based::option")]
    pub witness: Option<Vec<usize>>,
}

impl ConstraintCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Outcome of checking a chirotope against a problem, without the CNF.
/// Every failure carries a subset that the matching predicate rejects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub axioms: CheckStatus<AxiomViolation>,
    pub acyclic: CheckStatus<CyclicPattern>,
    pub constraints: Vec<ConstraintCheck>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.axioms.passed() && self.acyclic.passed() && self.constraints.iter().all(|c| c.passed())
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::labels;
        match &self.axioms {
            CheckStatus::Pass => writeln!(f, "axioms: pass")?,
            CheckStatus::Fail(v) => writeln!(f, "axioms: FAIL ({v})")?,
            CheckStatus::Skipped(why) => writeln!(f, "axioms: skipped ({why})")?,
        }
        match &self.acyclic {
            CheckStatus::Pass => writeln!(f, "acyclic: pass")?,
            CheckStatus::Fail(p) => writeln!(
                f,
                "acyclic: FAIL (element {} flips every sign of {})",
                p.element + 1,
                labels(&p.subset)
            )?,
            CheckStatus::Skipped(why) => writeln!(f, "acyclic: skipped ({why})")?,
        }
        for c in &self.constraints {
            let name = match c.constraint {
                ConstraintKind::GonFree { k } => format!("no {k}-gon"),
                ConstraintKind::HoleFree { k } => format!("no {k}-hole"),
                ConstraintKind::HullFrame { m } => format!("hull frame of {m}"),
            };
            match &c.witness {
                None => writeln!(f, "{name}: pass")?,
                Some(w) => writeln!(f, "{name}: FAIL (witness {})", labels(w))?,
            }
        }
        Ok(())
    }
}
