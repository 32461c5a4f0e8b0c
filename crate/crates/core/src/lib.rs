//! SAT encodings of Erdős–Szekeres type questions over acyclic chirotopes.
//!
//! The crate turns "is there a rank-`d+1` acyclic chirotope on `n` elements
//! without a `k`-gon / `k`-hole?" into a CNF instance, runs an external SAT
//! solver and DRAT checker on it, and re-checks every satisfying model
//! directly on the decoded chirotope.
//!
//! Element labels are 0-based in the API. Text reports and JSON output show
//! them 1-based, matching the line numbers of point files.

pub mod chirotope;
pub mod combinatorics;
pub mod encoder;
pub mod geometry;
pub mod scalar;
pub mod sign;
pub mod solver;
pub mod witness;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use chirotope::{AxiomMethod, AxiomViolation, Chirotope, ChirotopeError, WitnessReport};
pub use encoder::{CnfInstance, ProblemMode, ProblemSpec, VarCatalog};
pub use geometry::{geometric_scan, orientation, GeometryError, Points};
pub use scalar::Coordinate;
pub use sign::Sign;
pub use solver::{SolverConfig, SolverOutcome, SolverStatus};

/// Arbitrary-precision integer point set, the default for file input.
pub type PointSet = Points<BigInt>;
/// Point set with machine-word coordinates for small, trusted inputs.
pub type PointSetI64 = Points<i64>;
/// Point set with 128-bit coordinates.
pub type PointSetI128 = Points<i128>;

/// Which convexity property a search looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Gon,
    Hole,
}

/// `{1, 2, 5}`-style rendering of 0-based labels.
pub fn labels(items: &[usize]) -> String {
    let inner: Vec<String> = items.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

/// Serde adapters that write 0-based labels as 1-based numbers.
pub mod one_based {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        raw.into_iter()
            .map(|i| {
                i.checked_sub(1)
                    .ok_or_else(|| serde::de::Error::custom("labels start at 1"))
            })
            .collect()
    }

    pub mod single {
        use super::*;

        pub fn serialize<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
            (v + 1).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
            usize::deserialize(d)?
                .checked_sub(1)
                .ok_or_else(|| serde::de::Error::custom("labels start at 1"))
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Vec<usize>>, s: S) -> Result<S::Ok, S::Error> {
            v.as_ref()
                .map(|v| v.iter().map(|i| i + 1).collect::<Vec<_>>())
                .serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<usize>>, D::Error> {
            let raw = Option::<Vec<usize>>::deserialize(d)?;
            raw.map(|v| {
                v.into_iter()
                    .map(|i| {
                        i.checked_sub(1)
                            .ok_or_else(|| serde::de::Error::custom("labels start at 1"))
                    })
                    .collect()
            })
            .transpose()
        }
    }
}
