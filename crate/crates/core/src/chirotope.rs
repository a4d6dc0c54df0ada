//! Chirotopes stored on sorted r-subsets.

use std::fmt;

use crate::combinatorics::{binomial, lex_rank, sort_sign, Combinations};
use crate::error::{OmError, Result};
use crate::signed::check_keep;

/// `Φ_r(n) = Σ_{i=0..r} C(n, i)`.
pub fn phi(r: usize, n: usize) -> Result<u64> {
    if r > n {
        return Err(OmError::RankOutOfRange { n, rank: r });
    }
    Ok((0..=r).map(|i| binomial(n, i)).sum())
}

/// An alternating sign map on `rank`-tuples of `{1, .., n}`.
///
/// Only the values on strictly increasing tuples are stored, in lexicographic
/// order. Equality identifies `χ` with `-χ`.
#[derive(Clone)]
pub struct Chirotope {
    n: usize,
    rank: usize,
    values: Vec<i8>,
}

impl Chirotope {
    pub fn from_values(n: usize, rank: usize, values: Vec<i8>) -> Result<Self> {
        if n == 0 || n > crate::signed::MAX_GROUND || rank == 0 || rank > n {
            return Err(OmError::RankOutOfRange { n, rank });
        }
        let expected = binomial(n, rank) as usize;
        if values.len() != expected {
            return Err(OmError::ChirotopeLength {
                expected,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(OmError::Inconsistent(
                "chirotope values must lie in {-1, 0, 1}".into(),
            ));
        }
        if values.iter().all(|&v| v == 0) {
            return Err(OmError::ZeroChirotope);
        }
        Ok(Chirotope { n, rank, values })
    }

    /// Parses the compact `{+,-,0}` form produced by `Display`.
    pub fn from_sign_string(n: usize, rank: usize, text: &str) -> Result<Self> {
        let values = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                other => Err(OmError::IllegalCharacter(other)),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::from_values(n, rank, values)
    }

    /// Builds a chirotope by evaluating `f` on every increasing 1-based tuple.
    pub fn from_fn(n: usize, rank: usize, mut f: impl FnMut(&[usize]) -> i8) -> Result<Self> {
        if n == 0 || rank == 0 || rank > n {
            return Err(OmError::RankOutOfRange { n, rank });
        }
        let values = Combinations::new(n, rank)
            .map(|c| {
                let tuple: Vec<usize> = c.iter().map(|i| i + 1).collect();
                f(&tuple)
            })
            .collect();
        Self::from_values(n, rank, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Stored values in lexicographic order of increasing tuples.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// `χ(tuple)` for any 1-based tuple of length `rank`, using alternation
    /// for unsorted input. Repeated elements give 0.
    pub fn value(&self, tuple: &[usize]) -> i8 {
        assert_eq!(tuple.len(), self.rank, "tuple length must equal the rank");
        let mut sorted: Vec<usize> = tuple.iter().map(|&e| e - 1).collect();
        let sign = sort_sign(&mut sorted);
        if sign == 0 {
            return 0;
        }
        assert!(sorted[self.rank - 1] < self.n, "element out of range");
        sign * self.values[lex_rank(&sorted, self.n) as usize]
    }

    pub fn is_uniform(&self) -> bool {
        self.values.iter().all(|&v| v != 0)
    }

    pub fn negated(&self) -> Self {
        Chirotope {
            n: self.n,
            rank: self.rank,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// `χ(e_1, .., e_r) = +1` on every increasing tuple.
    pub fn alternating(n: usize, rank: usize) -> Result<Self> {
        Self::from_fn(n, rank, |_| 1)
    }

    /// Rank-2 chirotope with `χ(i, j) = +1` iff `σ(i) >= σ(j)`, where `σ`
    /// swaps `2k-1` and `2k`.
    pub fn m2(n: usize) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(OmError::OddGroundSet(n));
        }
        let sigma = |i: usize| if i % 2 == 1 { i + 1 } else { i - 1 };
        Self::from_fn(n, 2, |t| if sigma(t[0]) >= sigma(t[1]) { 1 } else { -1 })
    }

    /// Deletion of every element outside `keep`, relabeled `1..=keep.len()`.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        check_keep(keep, self.n)?;
        if keep.len() < self.rank {
            return Err(OmError::RankDrop(keep.to_vec()));
        }
        let values: Vec<i8> = Combinations::new(keep.len(), self.rank)
            .map(|c| {
                let tuple: Vec<usize> = c.iter().map(|&j| keep[j]).collect();
                self.value(&tuple)
            })
            .collect();
        if values.iter().all(|&v| v == 0) {
            return Err(OmError::RankDrop(keep.to_vec()));
        }
        Self::from_values(keep.len(), self.rank, values)
    }

    /// Contraction of `u`: `χ'(x_1, .., x_{r-1}) = χ(u, x_1, .., x_{r-1})` on
    /// the remaining elements, relabeled in order.
    pub fn contract(&self, u: usize) -> Result<Self> {
        if u == 0 || u > self.n {
            return Err(OmError::BadElementList(vec![u]));
        }
        if self.rank < 2 || self.n < 2 {
            return Err(OmError::RankOutOfRange {
                n: self.n - 1,
                rank: self.rank.saturating_sub(1),
            });
        }
        let rest: Vec<usize> = (1..=self.n).filter(|&e| e != u).collect();
        let values: Vec<i8> = Combinations::new(rest.len(), self.rank - 1)
            .map(|c| {
                let mut tuple = Vec::with_capacity(self.rank);
                tuple.push(u);
                tuple.extend(c.iter().map(|&j| rest[j]));
                self.value(&tuple)
            })
            .collect();
        if values.iter().all(|&v| v == 0) {
            return Err(OmError::LoopContraction(u));
        }
        Self::from_values(rest.len(), self.rank - 1, values)
    }
}

impl PartialEq for Chirotope {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.rank == other.rank
            && (self.values == other.values
                || self
                    .values
                    .iter()
                    .zip(&other.values)
                    .all(|(a, b)| *a == -*b))
    }
}

impl Eq for Chirotope {}

impl fmt::Display for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            f.write_str(match v {
                1 => "+",
                -1 => "-",
                _ => "0",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chirotope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chirotope(n={}, r={}, {})", self.n, self.rank, self)
    }
}
