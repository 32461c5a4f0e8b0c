//! Index arithmetic shared by the chirotope store and the variable catalog:
//! binomial coefficients, colexicographic ranking of sorted tuples, and
//! permutation parity.

use std::sync::OnceLock;

const TABLE_SIZE: usize = 130;

fn table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0u64; TABLE_SIZE * TABLE_SIZE];
        for n in 0..TABLE_SIZE {
            t[n * TABLE_SIZE] = 1;
            for k in 1..=n {
                let above = t[(n - 1) * TABLE_SIZE + k - 1];
                let left = if k < n { t[(n - 1) * TABLE_SIZE + k] } else { 0 };
                t[n * TABLE_SIZE + k] = above.saturating_add(left);
            }
        }
        t
    })
}

/// `C(n, k)`, zero when `k > n`. Saturates at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    if n < TABLE_SIZE {
        return table()[n * TABLE_SIZE + k];
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Same as [`binomial`] but as a `usize` for indexing.
#[inline]
pub fn choose(n: usize, k: usize) -> usize {
    binomial(n, k) as usize
}

/// Colexicographic rank of a strictly increasing tuple of 0-based indices.
#[inline]
pub fn colex_rank(sorted: &[usize]) -> usize {
    sorted.iter().enumerate().map(|(i, &c)| choose(c, i + 1)).sum()
}

/// Inverse of [`colex_rank`] for tuples of length `k`.
pub fn colex_unrank(mut rank: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for i in (0..k).rev() {
        // largest c with C(c, i+1) <= rank
        let mut c = i;
        while choose(c + 1, i + 1) <= rank {
            c += 1;
        }
        out[i] = c;
        rank -= choose(c, i + 1);
    }
    out
}

/// Sorts `t` in place and returns the parity of the sorting permutation
/// (`true` = odd), or `None` if `t` contains a repeated entry.
#[inline]
pub fn sort_with_parity(t: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && t[j - 1] == t[j] {
            return None;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(odd)
}

/// Sign of the permutation `perm` of `0..perm.len()` (+1 even, -1 odd).
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    if odd {
        -1
    } else {
        1
    }
}

/// Strictly increasing `k`-tuples over `0..n` in colexicographic order.
#[derive(Debug, Clone)]
pub struct Colex {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Colex { n, current }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut advanced = false;
        for i in 0..k {
            let limit = if i + 1 < k { next[i + 1] } else { self.n };
            if next[i] + 1 < limit {
                next[i] += 1;
                for (j, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Strictly increasing `k`-subsets of `items` in lexicographic order.
pub fn subsets<'a>(items: &'a [usize], k: usize) -> impl Iterator<Item = Vec<usize>> + 'a {
    Lex::new(items.len(), k).map(move |idx| idx.iter().map(|&i| items[i]).collect())
}

/// Strictly increasing `k`-tuples over `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Lex {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Lex {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Lex { n, current }
    }
}

impl Iterator for Lex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
