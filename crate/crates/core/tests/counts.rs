use std::collections::HashSet;

use chirosat::encoder::{
    assemble, clauses_acyclic, clauses_aux_defs, clauses_frame_order, clauses_gp, clauses_hull_frame, clauses_no_gon,
    clauses_no_hole, clauses_symmetry_breaking,
};
use chirosat::{ProblemSpec, VarCatalog};

fn c(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn dims() -> impl Iterator<Item = (usize, usize)> {
    (2..=3).flat_map(|d| (d + 2..=8).map(move |n| (n, d)))
}

fn widths(clauses: &[Vec<i32>]) -> HashSet<usize> {
    clauses.iter().map(Vec::len).collect()
}

#[test]
fn catalog_sizes() {
    for (n, d) in dims() {
        let cat = VarCatalog::new(n, d).unwrap();
        assert_eq!(cat.sign_count(), c(n, d + 1));
        assert_eq!(cat.sep_count(), c(n, d) * c(n - d, 2));
        assert_eq!(cat.cont_count(), c(n, d + 2) * (d + 2));
        assert_eq!(cat.num_vars(), cat.sign_count() + cat.sep_count() + cat.cont_count());
    }
}

#[test]
fn family_sizes() {
    for (n, d) in dims() {
        let cat = VarCatalog::new(n, d).unwrap();
        let acyclic = clauses_acyclic(&cat);
        assert_eq!(acyclic.len(), 2 * (d + 2) * c(n, d + 2), "n={n} d={d}");
        assert_eq!(widths(&acyclic), HashSet::from([d + 2]));
        let aux = clauses_aux_defs(&cat);
        assert_eq!(
            aux.len(),
            4 * cat.sep_count() + (d + 2) * cat.cont_count(),
            "n={n} d={d}"
        );
        let units = clauses_symmetry_breaking(&cat);
        assert_eq!(units.len(), c(n - (d + 1) + 2, 2));
        assert!(units.iter().all(|u| u.len() == 1 && u[0] > 0));
        for k in d + 2..=n {
            let gon = clauses_no_gon(&cat, k).unwrap();
            assert_eq!(gon.len(), c(n, k));
            assert_eq!(widths(&gon), HashSet::from([k * c(k - 2, d)]), "gon n={n} d={d} k={k}");
            let hole = clauses_no_hole(&cat, k).unwrap();
            assert_eq!(hole.len(), c(n, k));
            let w = k * c(k - 2, d) + (n - k) * c(k - 1, d);
            assert_eq!(widths(&hole), HashSet::from([w]), "hole n={n} d={d} k={k}");
            for (g, h) in gon.iter().zip(&hole) {
                assert!(g.iter().all(|l| h.contains(l)));
            }
        }
    }
}

#[test]
fn hull_frame_sizes() {
    for n in 4..=8 {
        let cat = VarCatalog::new(n, 2).unwrap();
        for m in 3..=n {
            let frame = clauses_hull_frame(&cat, m).unwrap();
            let units = 4 * c(m, 4);
            assert_eq!(frame.len(), units + (n - m), "n={n} m={m}");
            assert!(frame[..units].iter().all(|u| u.len() == 1 && u[0] < 0));
            assert!(frame[units..].iter().all(|cl| cl.len() == c(m - 1, 2)));
            assert_eq!(clauses_frame_order(&cat, m).unwrap().len(), c(m, 3) + c(n - m, 2));
        }
    }
    let cat = VarCatalog::new(9, 2).unwrap();
    assert_eq!(clauses_hull_frame(&cat, 9).unwrap().len(), 504);
    let cat = VarCatalog::new(12, 2).unwrap();
    let frame = clauses_hull_frame(&cat, 9).unwrap();
    assert_eq!(frame.len(), 504 + 3);
    assert_eq!(frame[504].len(), 28);
}

#[test]
fn assembled_totals() {
    for (n, d) in dims() {
        let cat = VarCatalog::new(n, d).unwrap();
        let base = clauses_gp(&cat).len() + clauses_acyclic(&cat).len() + clauses_aux_defs(&cat).len();
        for k in d + 2..=n {
            let plain = ProblemSpec::gon(d, n, k).with_symmetry_breaking(false);
            let inst = assemble(&plain).unwrap();
            assert_eq!(inst.num_vars(), cat.num_vars());
            assert_eq!(inst.num_clauses(), base + c(n, k));
            let reduced = assemble(&ProblemSpec::hole(d, n, k)).unwrap();
            assert_eq!(reduced.num_clauses(), base + c(n, k) + c(n - d + 1, 2));
            for cl in inst.clauses().chain(reduced.clauses()) {
                assert!(!cl.is_empty());
                assert!(cl
                    .iter()
                    .all(|&l| l != 0 && l.unsigned_abs() as usize <= cat.num_vars()));
                let vars: HashSet<u32> = cl.iter().map(|l| l.unsigned_abs()).collect();
                assert_eq!(vars.len(), cl.len());
            }
        }
    }
}

/// Sign literal of an arbitrary tuple: the variable of its sorted version,
/// negated for an odd sorting permutation, `None` on a repeated index.
fn literal(t: &[usize]) -> Option<i32> {
    let mut s = t.to_vec();
    let mut odd = false;
    for i in 0..s.len() {
        for j in 0..s.len() - 1 - i {
            if s[j] == s[j + 1] {
                return None;
            }
            if s[j] > s[j + 1] {
                s.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    let var = 1 + s.iter().enumerate().map(|(i, &x)| c(x, i + 1)).sum::<usize>() as i32;
    Some(if odd { -var } else { var })
}

/// Every ordered choice of `a1..ar, b1, b2`; a clause for each sign
/// pattern of the involved variables violating
/// `χ(b1,a2,A)χ(a1,b2,A) ≥ 0 ∧ χ(b2,a2,A)χ(b1,a1,A) ≥ 0 ⇒ χ(a1,a2,A)χ(b1,b2,A) ≥ 0`.
fn brute_force_gp(n: usize, r: usize) -> HashSet<Vec<i32>> {
    let mut out = HashSet::new();
    let total = n.pow(r as u32 + 2);
    for code in 0..total {
        let mut x = code;
        let mut idx = Vec::with_capacity(r + 2);
        for _ in 0..r + 2 {
            idx.push(x % n);
            x /= n;
        }
        let (a1, a2, b1, b2) = (idx[0], idx[1], idx[r], idx[r + 1]);
        let ctx = &idx[2..r];
        let term = |x: usize, y: usize| {
            let mut t = vec![x, y];
            t.extend_from_slice(ctx);
            literal(&t)
        };
        let terms = [
            term(b1, a2),
            term(a1, b2),
            term(b2, a2),
            term(b1, a1),
            term(a1, a2),
            term(b1, b2),
        ];
        if terms[4].is_none() || terms[5].is_none() {
            continue;
        }
        let mut vars: Vec<i32> = terms.iter().flatten().map(|l| l.abs()).collect();
        vars.sort_unstable();
        vars.dedup();
        for mask in 0u32..1 << vars.len() {
            let value = |l: Option<i32>| -> i32 {
                l.map_or(0, |l| {
                    let bit = mask >> vars.iter().position(|&v| v == l.abs()).unwrap() & 1;
                    if (bit == 1) == (l > 0) {
                        1
                    } else {
                        -1
                    }
                })
            };
            let s: Vec<i32> = terms.iter().map(|&t| value(t)).collect();
            if s[0] * s[1] >= 0 && s[2] * s[3] >= 0 && s[4] * s[5] < 0 {
                let clause = vars
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if mask >> i & 1 == 1 { -v } else { v })
                    .collect();
                out.insert(clause);
            }
        }
    }
    out
}

#[test]
fn gp_matches_brute_force() {
    for (n, d) in dims() {
        let cat = VarCatalog::new(n, d).unwrap();
        let gp = clauses_gp(&cat);
        let expected = brute_force_gp(n, d + 1);
        let got: HashSet<Vec<i32>> = gp
            .iter()
            .map(|cl| {
                let mut cl = cl.clone();
                cl.sort_by_key(|l| l.abs());
                cl
            })
            .collect();
        assert_eq!(got.len(), gp.len(), "duplicate GP clauses for n={n} d={d}");
        assert_eq!(got, expected, "n={n} d={d}");
    }
}
