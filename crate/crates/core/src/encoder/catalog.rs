use std::fmt;
use std::io::{self, Write};

use super::EncodeError;
use crate::combinatorics::{choose, colex_rank, colex_unrank, sort_with_parity};

/// A Boolean atom of the model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    /// True iff the sorted `(d+1)`-tuple has sign `+`.
    Sign(Vec<usize>),
    /// True iff the hyperplane through the sorted `d`-set `hyperplane`
    /// separates `pair.0` from `pair.1` (`pair.0 < pair.1`).
    Sep {
        hyperplane: Vec<usize>,
        pair: (usize, usize),
    },
    /// True iff `point` lies in the simplex of the sorted `(d+1)`-set.
    Cont { simplex: Vec<usize>, point: usize },
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::labels;
        match self {
            Atom::Sign(t) => write!(f, "sign {}", labels(t)),
            Atom::Sep { hyperplane, pair } => {
                write!(f, "sep {} {} {}", labels(hyperplane), pair.0 + 1, pair.1 + 1)
            }
            Atom::Cont { simplex, point } => write!(f, "cont {} {}", labels(simplex), point + 1),
        }
    }
}

/// Bijection between atoms and DIMACS variables for fixed `(n, d)`.
///
/// Variables are numbered from 1 in three consecutive blocks: sign atoms by
/// colexicographic rank of their tuple, then separation atoms, then
/// containment atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarCatalog {
    n: usize,
    d: usize,
    sign_count: usize,
    pairs_per_hyperplane: usize,
    sep_count: usize,
    cont_count: usize,
}

impl VarCatalog {
    pub fn new(n: usize, d: usize) -> Result<Self, EncodeError> {
        if d < 2 {
            return Err(EncodeError::Dimension(d));
        }
        if n < d + 2 {
            return Err(EncodeError::TooFewElements { n, d });
        }
        let pairs_per_hyperplane = choose(n - d, 2);
        let sign_count = choose(n, d + 1);
        let sep_count = choose(n, d) * pairs_per_hyperplane;
        let cont_count = choose(n, d + 2) * (d + 2);
        let total = sign_count + sep_count + cont_count;
        if total > i32::MAX as usize {
            return Err(EncodeError::TooManyVariables(total));
        }
        Ok(VarCatalog {
            n,
            d,
            sign_count,
            pairs_per_hyperplane,
            sep_count,
            cont_count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.d + 1
    }

    pub fn sign_count(&self) -> usize {
        self.sign_count
    }

    pub fn sep_count(&self) -> usize {
        self.sep_count
    }

    pub fn cont_count(&self) -> usize {
        self.cont_count
    }

    pub fn num_vars(&self) -> usize {
        self.sign_count + self.sep_count + self.cont_count
    }

    /// Variable of a sorted `(d+1)`-tuple.
    #[inline]
    pub fn sign_var(&self, sorted: &[usize]) -> i32 {
        debug_assert_eq!(sorted.len(), self.d + 1);
        (colex_rank(sorted) + 1) as i32
    }

    /// Literal that is true iff `χ(tuple) = +`, folding in the parity of
    /// the sorting permutation. `None` when an index repeats.
    #[inline]
    pub fn sign_lit(&self, tuple: &[usize]) -> Option<i32> {
        let mut buf = [0usize; 16];
        let t = &mut buf[..tuple.len()];
        t.copy_from_slice(tuple);
        let odd = sort_with_parity(t)?;
        let v = (colex_rank(t) + 1) as i32;
        Some(if odd { -v } else { v })
    }

    /// Variable of `Sep(hyperplane, {a, b})`; `hyperplane` sorted, `a, b`
    /// distinct and outside it.
    pub fn sep_var(&self, hyperplane: &[usize], a: usize, b: usize) -> i32 {
        debug_assert_eq!(hyperplane.len(), self.d);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let shift = |x: usize| x - hyperplane.iter().filter(|&&h| h < x).count();
        let (a, b) = (shift(a), shift(b));
        let pair = choose(b, 2) + a;
        (self.sign_count + colex_rank(hyperplane) * self.pairs_per_hyperplane + pair + 1) as i32
    }

    /// Variable of `Cont(simplex, point)`; `simplex` sorted, `point` outside.
    pub fn cont_var(&self, simplex: &[usize], point: usize) -> i32 {
        debug_assert_eq!(simplex.len(), self.d + 1);
        let mut u = [0usize; 18];
        let pos = simplex.partition_point(|&x| x < point);
        u[..pos].copy_from_slice(&simplex[..pos]);
        u[pos] = point;
        u[pos + 1..simplex.len() + 1].copy_from_slice(&simplex[pos..]);
        let rank = colex_rank(&u[..simplex.len() + 1]);
        (self.sign_count + self.sep_count + rank * (self.d + 2) + pos + 1) as i32
    }

    /// Inverse of the numbering.
    pub fn atom(&self, var: i32) -> Option<Atom> {
        if var < 1 {
            return None;
        }
        let mut i = var as usize - 1;
        if i < self.sign_count {
            return Some(Atom::Sign(colex_unrank(i, self.d + 1)));
        }
        i -= self.sign_count;
        if i < self.sep_count {
            let hyperplane = colex_unrank(i / self.pairs_per_hyperplane, self.d);
            let pr = colex_unrank(i % self.pairs_per_hyperplane, 2);
            let rest: Vec<usize> = (0..self.n).filter(|x| !hyperplane.contains(x)).collect();
            return Some(Atom::Sep {
                pair: (rest[pr[0]], rest[pr[1]]),
                hyperplane,
            });
        }
        i -= self.sep_count;
        if i < self.cont_count {
            let w = self.d + 2;
            let mut simplex = colex_unrank(i / w, w);
            let point = simplex.remove(i % w);
            return Some(Atom::Cont { simplex, point });
        }
        None
    }

    /// Variable of an atom; inverse of [`VarCatalog::atom`].
    pub fn var(&self, atom: &Atom) -> i32 {
        match atom {
            Atom::Sign(t) => self.sign_var(t),
            Atom::Sep { hyperplane, pair } => self.sep_var(hyperplane, pair.0, pair.1),
            Atom::Cont { simplex, point } => self.cont_var(simplex, *point),
        }
    }

    /// Sidecar table: one `var atom` line per variable (labels 1-based).
    pub fn write_table<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "c catalog n={} d={}", self.n, self.d)?;
        for v in 1..=self.num_vars() as i32 {
            let atom = self.atom(v).expect("variable within catalog");
            writeln!(w, "{v} {atom}")?;
        }
        Ok(())
    }
}
