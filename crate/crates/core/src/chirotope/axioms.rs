use serde::{Deserialize, Serialize};

use super::Chirotope;
use crate::combinatorics::{permutation_sign, Colex, Lex};
use crate::sign::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomMethod {
    /// The exchange axiom over all pairs of `r`-tuples.
    FullExchange,
    /// Non-degeneracy plus the 3-term Graßmann–Plücker relations.
    ThreeTerm,
}

/// First counterexample found by [`Chirotope::verify_axioms`]. Labels are
/// 0-based element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AxiomViolation {
    IdenticallyZero,
    Degenerate {
        #[serde(with = "crate::one_based")]
        tuple: Vec<usize>,
    },
    Alternation {
        #[serde(with = "crate::one_based")]
        tuple: Vec<usize>,
    },
    Exchange {
        #[serde(with = "crate::one_based")]
        a: Vec<usize>,
        #[serde(with = "crate::one_based")]
        b: Vec<usize>,
    },
    ThreeTerm {
        #[serde(with = "crate::one_based")]
        a: Vec<usize>,
        #[serde(with = "crate::one_based")]
        b: Vec<usize>,
    },
}

impl std::fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use crate::labels;
        match self {
            AxiomViolation::IdenticallyZero => write!(f, "identically zero"),
            AxiomViolation::Degenerate { tuple } => write!(f, "zero sign on {}", labels(tuple)),
            AxiomViolation::Alternation { tuple } => {
                write!(f, "alternating law fails on {}", labels(tuple))
            }
            AxiomViolation::Exchange { a, b } => {
                write!(f, "exchange fails for a = {}, b = {}", labels(a), labels(b))
            }
            AxiomViolation::ThreeTerm { a, b } => {
                write!(f, "3-term relation fails for a = {}, b = {}", labels(a), labels(b))
            }
        }
    }
}

/// Number of stored tuples whose permutations are re-checked.
const ALTERNATION_SAMPLE: usize = 32;

impl Chirotope {
    pub fn verify_axioms(&self, method: AxiomMethod) -> Result<(), AxiomViolation> {
        match method {
            AxiomMethod::FullExchange => {
                if self.signs.iter().all(|s| s.is_zero()) {
                    return Err(AxiomViolation::IdenticallyZero);
                }
                self.check_alternation()?;
                self.check_exchange()
            }
            AxiomMethod::ThreeTerm => {
                if let Some(tuple) = self.first_zero() {
                    return Err(AxiomViolation::Degenerate { tuple });
                }
                self.check_alternation()?;
                self.check_three_term()
            }
        }
    }

    /// Alternating law on a sample of stored tuples. The dense storage makes
    /// the law hold by construction, so this only guards `orient` itself.
    fn check_alternation(&self) -> Result<(), AxiomViolation> {
        let r = self.rank;
        let perms: Vec<Vec<usize>> = permutations(r);
        let step = (self.signs.len() / ALTERNATION_SAMPLE).max(1);
        for idx in (0..self.signs.len()).step_by(step) {
            let t = self.tuple_at(idx);
            let base = self.signs[idx];
            for p in &perms {
                let permuted: Vec<usize> = p.iter().map(|&i| t[i]).collect();
                let expect = if permutation_sign(p) < 0 { -base } else { base };
                if self.orient(&permuted) != expect {
                    return Err(AxiomViolation::Alternation { tuple: permuted });
                }
            }
            if r >= 2 {
                let mut repeated = t.clone();
                repeated[1] = repeated[0];
                if !self.orient(&repeated).is_zero() {
                    return Err(AxiomViolation::Alternation { tuple: repeated });
                }
            }
        }
        Ok(())
    }

    /// Exchange axiom: if `χ(b_i, a_2..a_r) · χ(b_1..a_1..b_r) ≥ 0` for
    /// every `i` then `χ(a) · χ(b) ≥ 0`.
    ///
    /// Reordering `a_2..a_r` by σ and `b` by τ with `sgn σ = sgn τ` leaves
    /// every product unchanged, so it suffices to take `b` sorted and
    /// `a_2..a_r` in one even and one odd arrangement.
    fn check_exchange(&self) -> Result<(), AxiomViolation> {
        let (n, r) = (self.n, self.rank);
        let check = |a: &[usize], b: &[usize]| -> Result<(), AxiomViolation> {
            if (self.orient(a) * self.orient(b)) != Sign::Negative {
                return Ok(());
            }
            let mut lhs = a.to_vec();
            let mut rhs = b.to_vec();
            for i in 0..r {
                lhs[0] = b[i];
                rhs[i] = a[0];
                let prod = self.orient(&lhs) * self.orient(&rhs);
                rhs[i] = b[i];
                if prod == Sign::Negative {
                    return Ok(());
                }
            }
            Err(AxiomViolation::Exchange {
                a: a.to_vec(),
                b: b.to_vec(),
            })
        };
        if r <= 2 {
            // too few positions for the symmetry reduction
            for a in ordered_tuples(n, r) {
                for b in ordered_tuples(n, r) {
                    check(&a, &b)?;
                }
            }
            return Ok(());
        }
        let mut a = vec![0; r];
        for b in Colex::new(n, r) {
            for a1 in 0..n {
                a[0] = a1;
                let rest: Vec<usize> = (0..n).filter(|&e| e != a1).collect();
                for tail in Lex::new(rest.len(), r - 1) {
                    for (slot, &i) in a[1..].iter_mut().zip(&tail) {
                        *slot = rest[i];
                    }
                    check(&a, &b)?;
                    a.swap(1, 2);
                    check(&a, &b)?;
                }
            }
        }
        Ok(())
    }

    /// 3-term relations: if `χ(b1,a2,A)·χ(a1,b2,A) ≥ 0` and
    /// `χ(b2,a2,A)·χ(b1,a1,A) ≥ 0` then `χ(a1,a2,A)·χ(b1,b2,A) ≥ 0`, where
    /// `A = a3..ar`. Every term carries `A` in the same positions, so `A`
    /// ranges over sorted subsets only.
    fn check_three_term(&self) -> Result<(), AxiomViolation> {
        let (n, r) = (self.n, self.rank);
        if r < 2 {
            return Ok(());
        }
        let mut t = vec![0usize; r];
        for tail in Lex::new(n, r - 2) {
            t[2..].copy_from_slice(&tail);
            let mut term = |x: usize, y: usize| {
                t[0] = x;
                t[1] = y;
                self.orient(&t)
            };
            for a1 in 0..n {
                for a2 in 0..n {
                    let conclusion_a = term(a1, a2);
                    if conclusion_a.is_zero() {
                        continue;
                    }
                    for b1 in 0..n {
                        for b2 in 0..n {
                            if conclusion_a * term(b1, b2) != Sign::Negative {
                                continue;
                            }
                            let h1 = term(b1, a2) * term(a1, b2);
                            let h2 = term(b2, a2) * term(b1, a1);
                            if h1 != Sign::Negative && h2 != Sign::Negative {
                                let mut a = vec![a1, a2];
                                a.extend_from_slice(&tail);
                                return Err(AxiomViolation::ThreeTerm { a, b: vec![b1, b2] });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    heap_permute(r, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

/// All ordered `r`-tuples of distinct elements of `0..n`.
fn ordered_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    let perms = permutations(r);
    Lex::new(n, r)
        .flat_map(|t| {
            perms
                .iter()
                .map(|p| p.iter().map(|&i| t[i]).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PointSetI64;

    fn chi(dim: usize, raw: &[&[i64]]) -> Chirotope {
        PointSetI64::new(dim, raw.iter().map(|p| p.to_vec()).collect())
            .unwrap()
            .chirotope()
            .unwrap()
    }

    #[test]
    fn permutations_complete() {
        assert_eq!(permutations(4).len(), 24);
        let mut p = permutations(3);
        p.sort();
        p.dedup();
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn realizable_sets_pass() {
        let pentagon = chi(2, &[&[0, 0], &[4, 0], &[5, 3], &[2, 5], &[-1, 3]]);
        assert_eq!(pentagon.verify_axioms(AxiomMethod::ThreeTerm), Ok(()));
        assert_eq!(pentagon.verify_axioms(AxiomMethod::FullExchange), Ok(()));
        let simplex = chi(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(simplex.verify_axioms(AxiomMethod::ThreeTerm), Ok(()));
        assert_eq!(simplex.verify_axioms(AxiomMethod::FullExchange), Ok(()));
    }

    #[test]
    fn single_flip_of_convex_pentagon() {
        // Frozen from an exhaustive brute-force 3-term check: flipping a
        // triple of consecutive hull vertices is a realizable mutation, any
        // other single flip breaks the relations.
        const INVALID: [usize; 5] = [1, 2, 5, 6, 8];
        let pentagon = chi(2, &[&[0, 0], &[4, 0], &[5, 3], &[2, 5], &[-1, 3]]);
        assert_eq!(pentagon.to_string(), "5 3\n++++++++++\n");
        for idx in 0..pentagon.signs().len() {
            let mutated = pentagon.with_flipped(idx);
            let three_term = mutated.verify_axioms(AxiomMethod::ThreeTerm);
            let exchange = mutated.verify_axioms(AxiomMethod::FullExchange);
            if !INVALID.contains(&idx) {
                assert_eq!(three_term, Ok(()), "flip at {idx}");
                assert_eq!(exchange, Ok(()), "flip at {idx}");
                continue;
            }
            assert!(exchange.is_err(), "flip at {idx}");
            match three_term {
                Err(AxiomViolation::ThreeTerm { a, b }) => {
                    // the reported combination really violates the relation
                    let t = |x: usize, y: usize| mutated.orient(&[x, y, a[2]]);
                    let (a1, a2, b1, b2) = (a[0], a[1], b[0], b[1]);
                    assert_ne!(t(b1, a2) * t(a1, b2), Sign::Negative);
                    assert_ne!(t(b2, a2) * t(b1, a1), Sign::Negative);
                    assert_eq!(t(a1, a2) * t(b1, b2), Sign::Negative);
                }
                other => panic!("flip at {idx}: expected a 3-term violation, got {other:?}"),
            }
        }
    }

    #[test]
    fn zero_signs() {
        let zero = Chirotope::from_signs(3, 3, vec![Sign::Zero]).unwrap();
        assert_eq!(
            zero.verify_axioms(AxiomMethod::FullExchange),
            Err(AxiomViolation::IdenticallyZero)
        );
        assert_eq!(
            zero.verify_axioms(AxiomMethod::ThreeTerm),
            Err(AxiomViolation::Degenerate { tuple: vec![0, 1, 2] })
        );
    }
}
