//! Rank-`r` chirotopes on `n` elements.
//!
//! Signs are stored densely, one per strictly increasing `r`-tuple, at the
//! tuple's colexicographic rank. Lookups on arbitrary ordered tuples go
//! through the alternating law.

mod axioms;
mod convex;
mod report;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::combinatorics::{choose, colex_rank, colex_unrank, sort_with_parity};
use crate::sign::Sign;

pub use axioms::{AxiomMethod, AxiomViolation};
pub use convex::{ContainmentTable, CyclicPattern};
pub use report::{CheckStatus, ConstraintCheck, ConstraintKind, WitnessReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChirotopeError {
    #[error("rank must satisfy 1 <= r <= min(n, 16) (n = {n}, r = {rank})")]
    Shape { n: usize, rank: usize },
    #[error("expected {expected} signs for C({n}, {rank}), got {got}")]
    SignCount {
        n: usize,
        rank: usize,
        expected: usize,
        got: usize,
    },
    #[error("index {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected a tuple of length {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("tuple {} has sign 0; a non-degenerate chirotope is required", crate::labels(.tuple))]
    Degenerate { tuple: Vec<usize> },
    #[error("element {} is part of the simplex", .0 + 1)]
    ElementInSimplex(usize),
    #[error("repeated element in {}", crate::labels(.0))]
    RepeatedElement(Vec<usize>),
    #[error("chirotope text line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Largest supported rank.
pub const MAX_RANK: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chirotope {
    n: usize,
    rank: usize,
    signs: Vec<Sign>,
}

impl Chirotope {
    /// Builds a chirotope from signs in colexicographic tuple order.
    pub fn from_signs(n: usize, rank: usize, signs: Vec<Sign>) -> Result<Self, ChirotopeError> {
        if rank == 0 || rank > n || rank > MAX_RANK {
            return Err(ChirotopeError::Shape { n, rank });
        }
        let expected = choose(n, rank);
        if signs.len() != expected {
            return Err(ChirotopeError::SignCount {
                n,
                rank,
                expected,
                got: signs.len(),
            });
        }
        Ok(Chirotope { n, rank, signs })
    }

    /// Builds a chirotope by evaluating `f` on every sorted tuple.
    pub fn from_fn(n: usize, rank: usize, mut f: impl FnMut(&[usize]) -> Sign) -> Result<Self, ChirotopeError> {
        if rank == 0 || rank > n {
            return Err(ChirotopeError::Shape { n, rank });
        }
        let signs = crate::combinatorics::Colex::new(n, rank).map(|t| f(&t)).collect();
        Chirotope::from_signs(n, rank, signs)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Sign stored at a colexicographic position.
    pub fn sign_at(&self, rank_index: usize) -> Sign {
        self.signs[rank_index]
    }

    /// Sign of a strictly increasing tuple.
    #[inline]
    pub fn sign_sorted(&self, sorted: &[usize]) -> Sign {
        self.signs[colex_rank(sorted)]
    }

    /// Sorted tuple stored at a colexicographic position.
    pub fn tuple_at(&self, rank_index: usize) -> Vec<usize> {
        colex_unrank(rank_index, self.rank)
    }

    pub fn is_uniform(&self) -> bool {
        self.first_zero().is_none()
    }

    pub(crate) fn first_zero(&self) -> Option<Vec<usize>> {
        self.signs.iter().position(|s| s.is_zero()).map(|i| self.tuple_at(i))
    }

    pub(crate) fn require_uniform(&self) -> Result<(), ChirotopeError> {
        match self.first_zero() {
            Some(tuple) => Err(ChirotopeError::Degenerate { tuple }),
            None => Ok(()),
        }
    }

    /// Value on an arbitrary ordered tuple: `sgn(σ) · χ(sorted)`, or zero
    /// when an index repeats.
    pub fn lookup(&self, tuple: &[usize]) -> Result<Sign, ChirotopeError> {
        if tuple.len() != self.rank {
            return Err(ChirotopeError::Arity {
                expected: self.rank,
                got: tuple.len(),
            });
        }
        if let Some(&index) = tuple.iter().find(|&&i| i >= self.n) {
            return Err(ChirotopeError::IndexOutOfRange { index, n: self.n });
        }
        Ok(self.orient(tuple))
    }

    /// Unchecked [`Chirotope::lookup`].
    #[inline]
    pub(crate) fn orient(&self, tuple: &[usize]) -> Sign {
        let mut buf = [0usize; MAX_RANK];
        let t = &mut buf[..tuple.len()];
        t.copy_from_slice(tuple);
        match sort_with_parity(t) {
            None => Sign::Zero,
            Some(odd) => {
                let s = self.signs[colex_rank(t)];
                if odd {
                    -s
                } else {
                    s
                }
            }
        }
    }

    /// Negates every tuple containing `element`.
    pub fn reoriented(&self, element: usize) -> Chirotope {
        let signs = crate::combinatorics::Colex::new(self.n, self.rank)
            .zip(&self.signs)
            .map(|(t, &s)| if t.contains(&element) { -s } else { s })
            .collect();
        Chirotope {
            n: self.n,
            rank: self.rank,
            signs,
        }
    }

    /// The chirotope seen through a relabelling: new element `i` is old
    /// element `order[i]`. `order` must be a permutation of `0..n`.
    pub fn relabeled(&self, order: &[usize]) -> Result<Chirotope, ChirotopeError> {
        let mut seen = vec![false; self.n];
        if order.len() != self.n {
            return Err(ChirotopeError::Arity {
                expected: self.n,
                got: order.len(),
            });
        }
        for &e in order {
            if e >= self.n {
                return Err(ChirotopeError::IndexOutOfRange { index: e, n: self.n });
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(ChirotopeError::RepeatedElement(order.to_vec()));
            }
        }
        let mut t = vec![0; self.rank];
        Chirotope::from_fn(self.n, self.rank, |s| {
            for (x, &i) in t.iter_mut().zip(s) {
                *x = order[i];
            }
            self.orient(&t)
        })
    }

    /// Contraction by `element`: rank `r - 1` on the other elements (kept
    /// in order), with `χ/e(t) = χ(e, t)`.
    pub fn contraction(&self, element: usize) -> Result<Chirotope, ChirotopeError> {
        if element >= self.n {
            return Err(ChirotopeError::IndexOutOfRange {
                index: element,
                n: self.n,
            });
        }
        let mut t = vec![element; self.rank];
        Chirotope::from_fn(self.n - 1, self.rank - 1, |s| {
            for (x, &i) in t[1..].iter_mut().zip(s) {
                *x = if i >= element { i + 1 } else { i };
            }
            self.orient(&t)
        })
    }

    /// Copy with the sign at one colexicographic position negated.
    pub fn with_flipped(&self, rank_index: usize) -> Chirotope {
        let mut out = self.clone();
        out.signs[rank_index] = -out.signs[rank_index];
        out
    }
}

impl fmt::Display for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.rank)?;
        let line: String = self.signs.iter().map(|s| s.symbol()).collect();
        writeln!(f, "{line}")
    }
}

impl FromStr for Chirotope {
    type Err = ChirotopeError;

    /// Parses `n r` followed by `C(n, r)` characters from `{+, -}`.
    fn from_str(text: &str) -> Result<Self, ChirotopeError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(ChirotopeError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse_field = |s: &str| {
            s.parse::<usize>().map_err(|e| ChirotopeError::Parse {
                line: 1,
                msg: format!("bad header field {s:?}: {e}"),
            })
        };
        let [n, rank] = fields[..] else {
            return Err(ChirotopeError::Parse {
                line: 1,
                msg: "header must be `n r`".into(),
            });
        };
        let (n, rank) = (parse_field(n)?, parse_field(rank)?);
        let body = lines.next().unwrap_or("").trim_end_matches('\r');
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(ChirotopeError::Parse {
                line: 3,
                msg: format!("unexpected trailing content {extra:?}"),
            });
        }
        let signs = body
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '+' => Ok(Sign::Positive),
                '-' => Ok(Sign::Negative),
                other => Err(ChirotopeError::Parse {
                    line: 2,
                    msg: format!("character {other:?} at column {} is not + or -", i + 1),
                }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Chirotope::from_signs(n, rank, signs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Chirotope {
        "4 3\n++++\n".parse().unwrap()
    }

    #[test]
    fn lookup_alternates() {
        let chi = square();
        let base = chi.lookup(&[0, 1, 2]).unwrap();
        assert_eq!(base, chi.sign_at(0));
        assert_eq!(chi.lookup(&[1, 0, 2]).unwrap(), -base);
        assert_eq!(chi.lookup(&[2, 0, 1]).unwrap(), base);
        assert_eq!(chi.lookup(&[0, 0, 2]).unwrap(), Sign::Zero);
    }

    #[test]
    fn lookup_errors() {
        let chi = square();
        assert_eq!(
            chi.lookup(&[0, 1, 4]),
            Err(ChirotopeError::IndexOutOfRange { index: 4, n: 4 })
        );
        assert!(matches!(chi.lookup(&[0, 1]), Err(ChirotopeError::Arity { .. })));
    }

    #[test]
    fn text_format() {
        let single: Chirotope = "3 3\n+".parse().unwrap();
        assert_eq!(single.to_string(), "3 3\n+\n");
        assert_eq!(square().to_string(), "4 3\n++++\n");
        assert!(matches!(
            "4 3\n+++".parse::<Chirotope>(),
            Err(ChirotopeError::SignCount {
                expected: 4,
                got: 3,
                ..
            })
        ));
        assert!(matches!(
            "4 3\n++0+".parse::<Chirotope>(),
            Err(ChirotopeError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            "4\n++++".parse::<Chirotope>(),
            Err(ChirotopeError::Parse { line: 1, .. })
        ));
        assert!("4 5\n".parse::<Chirotope>().is_err());
    }

    #[test]
    fn reorientation_flips_containing_tuples() {
        let chi = square().reoriented(3);
        assert_eq!(chi.to_string(), "4 3\n+---\n");
    }
}
