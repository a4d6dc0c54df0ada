//! Binomial coefficients and lexicographic k-subset enumeration.
//!
//! Subsets are strictly increasing index lists over `0..n`. Ranks follow the
//! lexicographic order of those lists, so rank 0 is `[0, 1, .., k-1]`.

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Lexicographic rank of a strictly increasing `k`-subset of `0..n`.
pub fn lex_rank(subset: &[usize], n: usize) -> u64 {
    let k = subset.len();
    let mut rank = 0;
    let mut next = 0;
    for (pos, &x) in subset.iter().enumerate() {
        for skipped in next..x {
            rank += binomial(n - skipped - 1, k - pos - 1);
        }
        next = x + 1;
    }
    rank
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(mut rank: u64, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut x = 0;
    for pos in 0..k {
        loop {
            let block = binomial(n - x - 1, k - pos - 1);
            if rank < block {
                break;
            }
            rank -= block;
            x += 1;
        }
        out.push(x);
        x += 1;
    }
    out
}

/// Advances `subset` to its lexicographic successor in place. Returns `false`
/// (leaving `subset` untouched) when it is already the last one.
pub fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Iterator over all `k`-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut succ = out.clone();
        self.current = next_combination(&mut succ, self.n).then_some(succ);
        Some(out)
    }
}

/// Sign of the permutation that sorts `items`; zero if any value repeats.
pub fn sort_sign(items: &mut [usize]) -> i8 {
    let mut sign = 1i8;
    // insertion sort, counting transpositions
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && items[j - 1] > items[j] {
            items.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if items.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(6, 4), 15);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn rank_unrank_agree_with_iteration_order() {
        for (n, k) in [(6, 3), (8, 4), (5, 0), (5, 5), (20, 3)] {
            let mut count = 0u64;
            for (i, c) in Combinations::new(n, k).enumerate() {
                assert_eq!(lex_rank(&c, n), i as u64);
                assert_eq!(lex_unrank(i as u64, n, k), c);
                count += 1;
            }
            assert_eq!(count, binomial(n, k));
        }
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(sort_sign(&mut [1, 2, 3]), 1);
        assert_eq!(sort_sign(&mut [2, 1, 3]), -1);
        assert_eq!(sort_sign(&mut [3, 1, 2]), 1);
        assert_eq!(sort_sign(&mut [2, 2, 3]), 0);
        let mut v = [4, 0, 2];
        sort_sign(&mut v);
        assert_eq!(v, [0, 2, 4]);
    }
}
