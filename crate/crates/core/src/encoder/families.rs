//! Clause families of the model. Each `emit_*` function writes one family
//! to a sink in a fixed order; the `clauses_*` wrappers collect it.

use std::collections::HashSet;

use rayon::prelude::*;

use super::cnf::ClauseSink;
use super::{EncodeError, VarCatalog};
use crate::combinatorics::{subsets, Colex, Lex};

/// Context blocks handed to the thread pool at once.
const GP_CHUNK: usize = 64;

/// 3-term Graßmann–Plücker clauses.
///
/// For a fixed sorted context `A = a3..ar` the six terms
/// `(b1,a2,A) (a1,b2,A) (b2,a2,A) (b1,a1,A) (a1,a2,A) (b1,b2,A)` are mapped
/// to sign literals, and every assignment of the involved variables that
/// makes both hypotheses hold and the conclusion fail is forbidden by one
/// clause. A term with a repeated index is zero: it satisfies its
/// hypothesis, and a zero conclusion makes the combination vacuous.
/// Clauses are deduplicated within a context block; distinct blocks never
/// share a clause because the block is the intersection of the tuples.
pub fn emit_gp(cat: &VarCatalog, sink: &mut impl ClauseSink) {
    let contexts: Vec<Vec<usize>> = Lex::new(cat.n(), cat.rank() - 2).collect();
    for chunk in contexts.chunks(GP_CHUNK) {
        let blocks: Vec<Vec<Vec<i32>>> = chunk.par_iter().map(|a| gp_block(cat, a)).collect();
        for clause in blocks.iter().flatten() {
            sink.push(clause);
        }
    }
}

pub fn clauses_gp(cat: &VarCatalog) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    emit_gp(cat, &mut out);
    out
}

/// Clauses of one context block. The relation is invariant under
/// `(a1,a2,b1,b2) -> (a2,a1,b2,b1)` and `(a1,a2) <-> (b1,b2)`, so only
/// `a1 < a2` with `(a1,a2)` lexicographically at most `{b1,b2}` is visited.
fn gp_block(cat: &VarCatalog, context: &[usize]) -> Vec<Vec<i32>> {
    let n = cat.n();
    let r = cat.rank();
    let mut seen: HashSet<[i32; 6]> = HashSet::new();
    let mut out = Vec::new();
    let mut t = vec![0usize; r];
    t[2..].copy_from_slice(context);
    let mut lit = |x: usize, y: usize| {
        t[0] = x;
        t[1] = y;
        cat.sign_lit(&t)
    };
    for a1 in 0..n {
        for a2 in a1 + 1..n {
            let Some(t4) = lit(a1, a2) else { continue };
            for b1 in 0..n {
                for b2 in 0..n {
                    if (a1, a2) > (b1.min(b2), b1.max(b2)) {
                        continue;
                    }
                    let Some(t5) = lit(b1, b2) else { continue };
                    let terms = [lit(b1, a2), lit(a1, b2), lit(b2, a2), lit(b1, a1), Some(t4), Some(t5)];
                    forbidden_patterns(&terms, |clause| {
                        let mut key = [0i32; 6];
                        key[..clause.len()].copy_from_slice(clause);
                        if seen.insert(key) {
                            out.push(clause.to_vec());
                        }
                    });
                }
            }
        }
    }
    out
}

/// Calls `emit` with each clause forbidding an assignment under which
/// `t0·t1 ≥ 0 ∧ t2·t3 ≥ 0 ∧ t4·t5 < 0`, with `None` terms read as zero.
fn forbidden_patterns(terms: &[Option<i32>; 6], mut emit: impl FnMut(&[i32])) {
    let mut vars = [0i32; 6];
    let mut nv = 0;
    for l in terms.iter().flatten() {
        let v = l.abs();
        if !vars[..nv].contains(&v) {
            vars[nv] = v;
            nv += 1;
        }
    }
    vars[..nv].sort_unstable();
    let vars = &vars[..nv];
    let mut clause = [0i32; 6];
    for mask in 0..1u32 << nv {
        let sign = |term: Option<i32>| -> i8 {
            match term {
                None => 0,
                Some(l) => {
                    let idx = vars
                        .iter()
                        .position(|&v| v == l.abs())
                        .expect("term variable collected");
                    if (mask >> idx & 1 == 1) == (l > 0) {
                        1
                    } else {
                        -1
                    }
                }
            }
        };
        let s = terms.map(sign);
        if s[0] * s[1] >= 0 && s[2] * s[3] >= 0 && s[4] * s[5] < 0 {
            for (i, &v) in vars.iter().enumerate() {
                clause[i] = if mask >> i & 1 == 1 { -v } else { v };
            }
            emit(&clause[..nv]);
        }
    }
}

/// Forbids, on every `(d+2)`-subset `U` and designated `q ∈ U`, the pattern
/// where replacing each element of `U \ {q}` by `q` flips the base sign.
/// Two clauses (one per base polarity) per `(U, q)`.
pub fn emit_acyclic(cat: &VarCatalog, sink: &mut impl ClauseSink) {
    let w = cat.d() + 2;
    let mut clause = Vec::with_capacity(w);
    for u in Lex::new(cat.n(), w) {
        for j in 0..w {
            let q = u[j];
            let mut base = u.clone();
            base.remove(j);
            let base_lit = cat.sign_lit(&base).expect("distinct");
            let reps: Vec<i32> = (0..base.len())
                .map(|i| {
                    let mut t = base.clone();
                    t[i] = q;
                    cat.sign_lit(&t).expect("distinct")
                })
                .collect();
            for positive in [true, false] {
                clause.clear();
                // base must not have sign `positive`
                clause.push(if positive { -base_lit } else { base_lit });
                // replacements must not all have the opposite sign
                clause.extend(reps.iter().map(|&l| if positive { l } else { -l }));
                sink.push(&clause);
            }
        }
    }
}

pub fn clauses_acyclic(cat: &VarCatalog) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    emit_acyclic(cat, &mut out);
    out
}

/// Biconditional definitions of the separation atoms (4 clauses each, in
/// variable order) followed by the containment atoms (`d+2` each).
pub fn emit_aux_defs(cat: &VarCatalog, sink: &mut impl ClauseSink) {
    emit_sep_defs(cat, sink);
    emit_cont_defs(cat, sink);
}

pub fn clauses_aux_defs(cat: &VarCatalog) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    emit_aux_defs(cat, &mut out);
    out
}

fn emit_sep_defs(cat: &VarCatalog, sink: &mut impl ClauseSink) {
    let (n, d) = (cat.n(), cat.d());
    let mut t = vec![0usize; d + 1];
    for h in Colex::new(n, d) {
        let rest: Vec<usize> = (0..n).filter(|x| h.binary_search(x).is_err()).collect();
        t[..d].copy_from_slice(&h);
        for pair in Colex::new(rest.len(), 2) {
            let (a, b) = (rest[pair[0]], rest[pair[1]]);
            let s = cat.sep_var(&h, a, b);
            t[d] = a;
            let x = cat.sign_lit(&t).expect("distinct");
            t[d] = b;
            let y = cat.sign_lit(&t).expect("distinct");
            // s <-> (x xor y)
            sink.push(&[-s, x, y]);
            sink.push(&[-s, -x, -y]);
            sink.push(&[s, -x, y]);
            sink.push(&[s, x, -y]);
        }
    }
}

fn emit_cont_defs(cat: &VarCatalog, sink: &mut impl ClauseSink) {
    let w = cat.d() + 2;
    let mut long = Vec::with_capacity(w);
    for u in Colex::new(cat.n(), w) {
        for j in 0..w {
            let p = u[j];
            let mut simplex = u.clone();
            simplex.remove(j);
            let c = cat.cont_var(&simplex, p);
            long.clear();
            long.push(c);
            for i in 0..simplex.len() {
                let mut facet = simplex.clone();
                let apex = facet.remove(i);
                let s = cat.sep_var(&facet, apex, p);
                sink.push(&[-c, -s]);
                long.push(s);
            }
            sink.push(&long);
        }
    }
}

/// Literals `Cont(T, p)` over `T ⊂ pool` with `min(pool) ∈ T`.
fn fan_literals(cat: &VarCatalog, pool: &[usize], p: usize, out: &mut Vec<i32>) {
    let Some((&apex, others)) = pool.split_first() else {
        return;
    };
    let mut simplex = Vec::with_capacity(cat.d() + 1);
    for face in subsets(others, cat.d()) {
        simplex.clear();
        simplex.push(apex);
        simplex.extend_from_slice(&face);
        out.push(cat.cont_var(&simplex, p));
    }
}

fn check_k(cat: &VarCatalog, k: usize) -> Result<(), EncodeError> {
    if k < cat.d() + 2 || k > cat.n() {
        return Err(EncodeError::SubsetSize {
            k,
            n: cat.n(),
            d: cat.d(),
        });
    }
    Ok(())
}

/// One clause per `k`-subset `X`: some `p ∈ X` lies in a simplex of
/// `X \ {p}` through its minimum.
pub fn emit_no_gon(cat: &VarCatalog, k: usize, sink: &mut impl ClauseSink) -> Result<(), EncodeError> {
    check_k(cat, k)?;
    let mut clause = Vec::new();
    for x in Lex::new(cat.n(), k) {
        clause.clear();
        push_inner_part(cat, &x, &mut clause);
        sink.push(&clause);
    }
    Ok(())
}

pub fn clauses_no_gon(cat: &VarCatalog, k: usize) -> Result<Vec<Vec<i32>>, EncodeError> {
    let mut out = Vec::new();
    emit_no_gon(cat, k, &mut out)?;
    Ok(out)
}

fn push_inner_part(cat: &VarCatalog, x: &[usize], clause: &mut Vec<i32>) {
    let mut rest = Vec::with_capacity(x.len() - 1);
    for (j, &p) in x.iter().enumerate() {
        rest.clear();
        rest.extend(x.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &e)| e));
        fan_literals(cat, &rest, p, clause);
    }
}

/// One clause per `k`-subset `X`: either `X` is not convex (as for gons) or
/// some `p ∉ X` lies in a simplex of `X` through `min(X)`.
pub fn emit_no_hole(cat: &VarCatalog, k: usize, sink: &mut impl ClauseSink) -> Result<(), EncodeError> {
    check_k(cat, k)?;
    let mut clause = Vec::new();
    for x in Lex::new(cat.n(), k) {
        clause.clear();
        push_inner_part(cat, &x, &mut clause);
        for p in (0..cat.n()).filter(|p| x.binary_search(p).is_err()) {
            fan_literals(cat, &x, p, &mut clause);
        }
        sink.push(&clause);
    }
    Ok(())
}

pub fn clauses_no_hole(cat: &VarCatalog, k: usize) -> Result<Vec<Vec<i32>>, EncodeError> {
    let mut out = Vec::new();
    emit_no_hole(cat, k, &mut out)?;
    Ok(out)
}

/// Planar frame: elements `0..m` form a convex `m`-gon and every other
/// element lies in a triangle of the fan from element 0.
pub fn emit_hull_frame(cat: &VarCatalog, m: usize, sink: &mut impl ClauseSink) -> Result<(), EncodeError> {
    if cat.d() != 2 {
        return Err(EncodeError::HullFrameDimension(cat.d()));
    }
    if m < 3 || m > cat.n() {
        return Err(EncodeError::HullSize { m, n: cat.n() });
    }
    for u in Lex::new(m, 4) {
        for j in 0..4 {
            let mut simplex = u.clone();
            let p = simplex.remove(j);
            sink.push(&[-cat.cont_var(&simplex, p)]);
        }
    }
    let frame: Vec<usize> = (0..m).collect();
    let mut clause = Vec::new();
    for p in m..cat.n() {
        clause.clear();
        fan_literals(cat, &frame, p, &mut clause);
        sink.push(&clause);
    }
    Ok(())
}

pub fn clauses_hull_frame(cat: &VarCatalog, m: usize) -> Result<Vec<Vec<i32>>, EncodeError> {
    let mut out = Vec::new();
    emit_hull_frame(cat, m, &mut out)?;
    Ok(out)
}

/// Labelling normalisation for gon/hole instances, as unit clauses
/// `χ(0, 1, .., r-3, a, b) = +` for `r-3 < a < b`.
///
/// Every acyclic uniform chirotope has a relabelling satisfying them: take
/// an extreme element `e_1`, an extreme element `e_2` of the contraction by
/// `e_1`, and so on down to rank 2, where the remaining elements are sorted.
/// Gons and holes do not depend on labels.
pub fn emit_symmetry_breaking(cat: &VarCatalog, sink: &mut impl ClauseSink) {
    let r = cat.rank();
    let mut t: Vec<usize> = (0..r).collect();
    for pair in Lex::new(cat.n() - (r - 2), 2) {
        t[r - 2] = pair[0] + r - 2;
        t[r - 1] = pair[1] + r - 2;
        sink.push(&[cat.sign_var(&t)]);
    }
}

pub fn clauses_symmetry_breaking(cat: &VarCatalog) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    emit_symmetry_breaking(cat, &mut out);
    out
}

/// Labelling normalisation for the planar frame: the frame `0..m` in
/// counter-clockwise order (every frame triple positive) and the other
/// elements sorted around frame vertex 0.
pub fn emit_frame_order(cat: &VarCatalog, m: usize, sink: &mut impl ClauseSink) -> Result<(), EncodeError> {
    if cat.d() != 2 {
        return Err(EncodeError::HullFrameDimension(cat.d()));
    }
    if m < 3 || m > cat.n() {
        return Err(EncodeError::HullSize { m, n: cat.n() });
    }
    for t in Lex::new(m, 3) {
        sink.push(&[cat.sign_var(&t)]);
    }
    for pair in Lex::new(cat.n() - m, 2) {
        sink.push(&[cat.sign_var(&[0, pair[0] + m, pair[1] + m])]);
    }
    Ok(())
}

pub fn clauses_frame_order(cat: &VarCatalog, m: usize) -> Result<Vec<Vec<i32>>, EncodeError> {
    let mut out = Vec::new();
    emit_frame_order(cat, m, &mut out)?;
    Ok(out)
}
