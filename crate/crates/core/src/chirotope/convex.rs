//! Convexity predicates expressed purely through chirotope signs.
//!
//! A point `p` lies in the simplex `T = {t_0..t_d}` iff replacing any `t_j`
//! by `p` keeps the sign of `T`. By Carathéodory a set is in convex position
//! iff every `(d+2)`-subset is, i.e. no point of such a subset lies in the
//! simplex of the others.

use serde::{Deserialize, Serialize};

use super::{Chirotope, ChirotopeError};
use crate::combinatorics::{choose, colex_rank, subsets, Colex, Lex};
use crate::sign::Sign;

/// The all-flipped pattern: replacing any element of `subset \ {element}`
/// by `element` negates the base sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicPattern {
    #[serde(with = "crate::one_based")]
    pub subset: Vec<usize>,
    #[serde(with = "crate::one_based::single")]
    pub element: usize,
}

impl Chirotope {
    /// Signs of the base simplex and of each single replacement by `p`.
    fn replacement_signs(&self, simplex: &[usize], p: usize) -> (Sign, impl Iterator<Item = Sign> + '_) {
        let base = self.orient(simplex);
        let simplex = simplex.to_vec();
        let reps = (0..simplex.len()).map(move |j| {
            let mut t = simplex.clone();
            t[j] = p;
            self.orient(&t)
        });
        (base, reps)
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, simplex: &[usize], p: usize) -> bool {
        let (base, mut reps) = self.replacement_signs(simplex, p);
        reps.all(|s| s == base)
    }

    /// Searches every `(r+1)`-subset for the pattern that no affine point
    /// configuration can produce.
    pub fn find_cyclic_pattern(&self) -> Result<Option<CyclicPattern>, ChirotopeError> {
        self.require_uniform()?;
        let r = self.rank;
        for subset in Lex::new(self.n, r + 1) {
            for (j, &element) in subset.iter().enumerate() {
                let mut base = subset.clone();
                base.remove(j);
                let (s, mut reps) = self.replacement_signs(&base, element);
                if reps.all(|x| x == -s) {
                    return Ok(Some(CyclicPattern { subset, element }));
                }
            }
        }
        Ok(None)
    }

    pub fn is_acyclic(&self) -> Result<bool, ChirotopeError> {
        self.find_cyclic_pattern().map(|p| p.is_none())
    }

    fn check_indices(&self, items: &[usize]) -> Result<(), ChirotopeError> {
        if let Some(&index) = items.iter().find(|&&i| i >= self.n) {
            return Err(ChirotopeError::IndexOutOfRange { index, n: self.n });
        }
        let mut sorted = items.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(ChirotopeError::RepeatedElement(items.to_vec()));
        }
        Ok(())
    }

    /// Whether `p` lies in the simplex spanned by `simplex` (`r` elements).
    pub fn point_in_simplex(&self, simplex: &[usize], p: usize) -> Result<bool, ChirotopeError> {
        if simplex.len() != self.rank {
            return Err(ChirotopeError::Arity {
                expected: self.rank,
                got: simplex.len(),
            });
        }
        if simplex.contains(&p) {
            return Err(ChirotopeError::ElementInSimplex(p));
        }
        let mut all = simplex.to_vec();
        all.push(p);
        self.check_indices(&all)?;
        self.require_uniform()?;
        Ok(self.contains_unchecked(simplex, p))
    }

    /// Carathéodory test on all `(d+2)`-subsets of `subset`.
    pub fn subset_in_convex_position(&self, subset: &[usize]) -> Result<bool, ChirotopeError> {
        self.check_indices(subset)?;
        self.require_uniform()?;
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        Ok(self.convex_unchecked(&sorted))
    }

    fn convex_unchecked(&self, sorted: &[usize]) -> bool {
        let r = self.rank;
        subsets(sorted, r + 1).all(|u| {
            (0..u.len()).all(|j| {
                let mut t = u.clone();
                let p = t.remove(j);
                !self.contains_unchecked(&t, p)
            })
        })
    }

    /// First `k`-subset in lexicographic order that is in convex position.
    pub fn find_k_gon(&self, k: usize) -> Result<Option<Vec<usize>>, ChirotopeError> {
        self.require_uniform()?;
        let table = ContainmentTable::new(self);
        Ok(Lex::new(self.n, k).find(|x| table.convex(x)))
    }

    /// First `k`-subset in lexicographic order that is in convex position
    /// and whose simplices contain no other element.
    pub fn find_k_hole(&self, k: usize) -> Result<Option<Vec<usize>>, ChirotopeError> {
        self.require_uniform()?;
        let table = ContainmentTable::new(self);
        Ok(Lex::new(self.n, k).find(|x| table.convex(x) && table.empty(x)))
    }
}

/// Precomputed containment relation: for each `(d+2)`-subset `U` and each
/// `p ∈ U`, whether `p` lies in the simplex `U \ {p}`.
#[derive(Debug, Clone)]
pub struct ContainmentTable {
    n: usize,
    rank: usize,
    inside: Vec<bool>,
    nonconvex: Vec<bool>,
}

impl ContainmentTable {
    pub fn new(chi: &Chirotope) -> Self {
        let (n, rank) = (chi.len(), chi.rank());
        let width = rank + 1;
        let mut inside = Vec::with_capacity(choose(n, width) * width);
        let mut nonconvex = Vec::with_capacity(choose(n, width));
        for u in Colex::new(n, width) {
            let mut any = false;
            for j in 0..width {
                let mut t = u.clone();
                let p = t.remove(j);
                let c = chi.contains_unchecked(&t, p);
                any |= c;
                inside.push(c);
            }
            nonconvex.push(any);
        }
        ContainmentTable {
            n,
            rank,
            inside,
            nonconvex,
        }
    }

    /// Whether `p` lies in the simplex of the sorted `rank`-tuple `simplex`.
    pub fn contains(&self, simplex: &[usize], p: usize) -> bool {
        let mut u = simplex.to_vec();
        let pos = u.partition_point(|&x| x < p);
        u.insert(pos, p);
        self.inside[colex_rank(&u) * (self.rank + 1) + pos]
    }

    /// Convex position of a sorted subset.
    pub fn convex(&self, sorted: &[usize]) -> bool {
        sorted.len() <= self.rank || subsets(sorted, self.rank + 1).all(|u| !self.nonconvex[colex_rank(&u)])
    }

    /// No element outside the sorted subset lies in one of its simplices.
    pub fn empty(&self, sorted: &[usize]) -> bool {
        if sorted.len() < self.rank {
            return true;
        }
        let simplices: Vec<Vec<usize>> = subsets(sorted, self.rank).collect();
        (0..self.n)
            .filter(|q| sorted.binary_search(q).is_err())
            .all(|q| simplices.iter().all(|t| !self.contains(t, q)))
    }

    /// Whether `q` lies in some simplex spanned by the sorted subset.
    pub fn covered(&self, sorted: &[usize], q: usize) -> bool {
        subsets(sorted, self.rank).any(|t| self.contains(&t, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PointSetI64;

    fn chi(raw: &[[i64; 2]]) -> Chirotope {
        PointSetI64::new(2, raw.iter().map(|p| p.to_vec()).collect())
            .unwrap()
            .chirotope()
            .unwrap()
    }

    #[test]
    fn containment_examples() {
        let inner = chi(&[[0, 0], [6, 0], [0, 6], [1, 1]]);
        assert_eq!(inner.point_in_simplex(&[0, 1, 2], 3), Ok(true));
        let outer = chi(&[[0, 0], [6, 0], [0, 6], [7, 7]]);
        assert_eq!(outer.point_in_simplex(&[0, 1, 2], 3), Ok(false));
        let square: Chirotope = "4 3\n++++".parse().unwrap();
        assert_eq!(square.point_in_simplex(&[0, 1, 2], 3), Ok(false));
        assert_eq!(
            square.point_in_simplex(&[0, 1, 2], 2),
            Err(ChirotopeError::ElementInSimplex(2))
        );
    }

    #[test]
    fn convex_position_examples() {
        let square: Chirotope = "4 3\n++++".parse().unwrap();
        assert_eq!(square.subset_in_convex_position(&[0, 1, 2]), Ok(true));
        assert_eq!(square.subset_in_convex_position(&[0, 1, 2, 3]), Ok(true));
        let inner = chi(&[[0, 0], [6, 0], [0, 6], [1, 1]]);
        assert_eq!(inner.subset_in_convex_position(&[0, 1, 2, 3]), Ok(false));
        assert_eq!(inner.find_k_gon(4), Ok(None));
        assert_eq!(square.find_k_gon(4), Ok(Some(vec![0, 1, 2, 3])));
    }

    #[test]
    fn holes() {
        let center = chi(&[[0, 0], [6, 0], [0, 6], [2, 2]]);
        assert_eq!(center.find_k_hole(3), Ok(Some(vec![0, 1, 3])));
        assert_eq!(center.find_k_gon(3), Ok(Some(vec![0, 1, 2])));
    }

    #[test]
    fn acyclicity() {
        let inner = chi(&[[0, 0], [6, 0], [0, 6], [1, 1]]);
        assert_eq!(inner.is_acyclic(), Ok(true));
        let cyclic = inner.reoriented(3);
        let pattern = cyclic.find_cyclic_pattern().unwrap().unwrap();
        assert_eq!(pattern.subset, vec![0, 1, 2, 3]);
        let single: Chirotope = "3 3\n-".parse().unwrap();
        assert_eq!(single.is_acyclic(), Ok(true));
        let degenerate = Chirotope::from_signs(3, 3, vec![Sign::Zero]).unwrap();
        assert!(degenerate.is_acyclic().is_err());
    }
}
