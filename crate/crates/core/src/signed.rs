//! Signed vectors on small ground sets.
//!
//! A [`SignedVector`] on `E = {1, .., n}` (n <= 32) is stored as two disjoint
//! bitmasks, bit `e - 1` standing for element `e`. The text form is one
//! character per element from `{+, -, 0}`.
//!
//! Vectors are totally ordered by their text form under plain byte order,
//! which puts `'+' < '-' < '0'`. Every sorted collection in this crate uses
//! that order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{OmError, Result};

pub const MAX_GROUND: usize = 32;
/// Largest number of free positions `full_support_extensions` will enumerate.
pub const MAX_FREE_POSITIONS: usize = 20;

/// The ground set `{1, .., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet(u8);

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_GROUND).contains(&n) {
            Ok(GroundSet(n as u8))
        } else {
            Err(OmError::GroundSetSize(n))
        }
    }

    pub fn len(self) -> usize {
        self.0 as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn full(self) -> ElementSet {
        ElementSet(low_mask(self.len()))
    }
}

fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A subset of a ground set, shown as comma-joined ascending 1-based labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet(u32);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u32) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Builds a set from 1-based element labels.
    pub fn from_elements(elements: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > MAX_GROUND {
                return Err(OmError::BadElementList(elements.to_vec()));
            }
            bits |= 1 << (e - 1);
        }
        Ok(ElementSet(bits))
    }

    pub fn contains(self, e: usize) -> bool {
        (1..=MAX_GROUND).contains(&e) && self.0 & (1 << (e - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending 1-based labels.
    pub fn elements(self) -> Vec<usize> {
        (0..32)
            .filter(|i| self.0 & (1 << i) != 0)
            .map(|i| i + 1)
            .collect()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.elements().iter().map(|e| e.to_string()).collect();
        f.write_str(&labels.join(","))
    }
}

impl FromStr for ElementSet {
    type Err = OmError;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(ElementSet::EMPTY);
        }
        let labels = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| OmError::BadElementList(Vec::new()))?;
        ElementSet::from_elements(&labels)
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Checks that `keep` is a nonempty strictly increasing list inside `1..=n`.
pub(crate) fn check_keep(keep: &[usize], n: usize) -> Result<()> {
    let ok = !keep.is_empty()
        && keep[0] >= 1
        && keep[keep.len() - 1] <= n
        && keep.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(OmError::BadElementList(keep.to_vec()))
    }
}

/// Picks the bits at the 1-based positions `keep` and packs them into the low bits.
pub(crate) fn gather_bits(bits: u32, keep: &[usize]) -> u32 {
    keep.iter()
        .enumerate()
        .fold(0, |acc, (j, &e)| acc | (((bits >> (e - 1)) & 1) << j))
}

/// Inverse of [`gather_bits`].
pub(crate) fn scatter_bits(bits: u32, keep: &[usize]) -> u32 {
    keep.iter()
        .enumerate()
        .fold(0, |acc, (j, &e)| acc | (((bits >> j) & 1) << (e - 1)))
}

/// A map `E -> {-1, 0, +1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedVector {
    n: u8,
    pos: u32,
    neg: u32,
}

impl SignedVector {
    pub fn new(ground: GroundSet, positive: ElementSet, negative: ElementSet) -> Result<Self> {
        let full = ground.full();
        if !positive.is_subset(full) || !negative.is_subset(full) {
            let mut all = positive.elements();
            all.extend(negative.elements());
            return Err(OmError::BadElementList(all));
        }
        let overlap = positive.bits() & negative.bits();
        if overlap != 0 {
            return Err(OmError::Overlap(ElementSet(overlap).to_string()));
        }
        Ok(SignedVector {
            n: ground.len() as u8,
            pos: positive.bits(),
            neg: negative.bits(),
        })
    }

    /// Unchecked constructor for internal hot paths.
    pub(crate) fn from_raw(n: usize, pos: u32, neg: u32) -> Self {
        debug_assert!(pos & neg == 0 && (pos | neg) & !low_mask(n) == 0);
        SignedVector {
            n: n as u8,
            pos,
            neg,
        }
    }

    pub fn zero(ground: GroundSet) -> Self {
        Self::from_raw(ground.len(), 0, 0)
    }

    pub fn ones(ground: GroundSet) -> Self {
        Self::from_raw(ground.len(), ground.full().bits(), 0)
    }

    /// Full-support vector whose positive part is `positive`.
    pub fn full_support(ground: GroundSet, positive: ElementSet) -> Self {
        let full = ground.full().bits();
        let pos = positive.bits() & full;
        Self::from_raw(ground.len(), pos, full & !pos)
    }

    pub fn parse(text: &str, ground: GroundSet) -> Result<Self> {
        let n = ground.len();
        let len = text.chars().count();
        if len != n {
            return Err(OmError::LengthMismatch {
                expected: n,
                found: len,
            });
        }
        let (mut pos, mut neg) = (0u32, 0u32);
        for (i, c) in text.chars().enumerate() {
            match c {
                '+' => pos |= 1 << i,
                '-' => neg |= 1 << i,
                '0' => {}
                other => return Err(OmError::IllegalCharacter(other)),
            }
        }
        Ok(Self::from_raw(n, pos, neg))
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet(self.n)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    /// Always false; a ground set has at least one element.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn positive(&self) -> ElementSet {
        ElementSet(self.pos)
    }

    pub fn negative(&self) -> ElementSet {
        ElementSet(self.neg)
    }

    pub fn support(&self) -> ElementSet {
        ElementSet(self.pos | self.neg)
    }

    pub fn zeros(&self) -> ElementSet {
        ElementSet(low_mask(self.len()) & !(self.pos | self.neg))
    }

    /// Sign at the 1-based element `e`.
    pub fn sign(&self, e: usize) -> i8 {
        let bit = 1u32 << (e - 1);
        if self.pos & bit != 0 {
            1
        } else if self.neg & bit != 0 {
            -1
        } else {
            0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pos | self.neg == 0
    }

    pub fn has_full_support(&self) -> bool {
        self.pos | self.neg == low_mask(self.len())
    }

    pub fn opposite(&self) -> Self {
        SignedVector {
            n: self.n,
            pos: self.neg,
            neg: self.pos,
        }
    }

    /// True for the zero vector and for vectors whose first nonzero sign is `+`.
    pub fn is_canonical(&self) -> bool {
        let support = self.pos | self.neg;
        support == 0 || self.pos & (support & support.wrapping_neg()) != 0
    }

    pub fn canonicalize(&self) -> Self {
        if self.is_canonical() {
            *self
        } else {
            self.opposite()
        }
    }

    fn same_ground(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(OmError::GroundSetMismatch {
                left: self.len(),
                right: other.len(),
            })
        }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_ground(other)?;
        Ok(self.compose_raw(other))
    }

    pub(crate) fn compose_raw(&self, other: &Self) -> Self {
        let support = self.pos | self.neg;
        SignedVector {
            n: self.n,
            pos: self.pos | (other.pos & !support),
            neg: self.neg | (other.neg & !support),
        }
    }

    /// Elements where the two vectors carry opposite nonzero signs.
    pub fn separation_set(&self, other: &Self) -> Result<ElementSet> {
        self.same_ground(other)?;
        Ok(self.separation_raw(other))
    }

    pub(crate) fn separation_raw(&self, other: &Self) -> ElementSet {
        ElementSet((self.pos & other.neg) | (self.neg & other.pos))
    }

    /// Conformal order: `self ⪯ other`.
    pub fn conforms(&self, other: &Self) -> Result<bool> {
        self.same_ground(other)?;
        Ok(self.conforms_raw(other))
    }

    pub(crate) fn conforms_raw(&self, other: &Self) -> bool {
        self.pos & !other.pos == 0 && self.neg & !other.neg == 0
    }

    /// The positive and negative parts of the componentwise product are both
    /// empty or both nonempty.
    pub fn perpendicular(&self, other: &Self) -> Result<bool> {
        self.same_ground(other)?;
        Ok(self.perpendicular_raw(other))
    }

    pub(crate) fn perpendicular_raw(&self, other: &Self) -> bool {
        let agree = (self.pos & other.pos) | (self.neg & other.neg);
        let disagree = (self.pos & other.neg) | (self.neg & other.pos);
        (agree == 0) == (disagree == 0)
    }

    /// Restriction to the 1-based elements in `keep`, relabeled `1..=keep.len()`
    /// in order.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        check_keep(keep, self.len())?;
        Ok(Self::from_raw(
            keep.len(),
            gather_bits(self.pos, keep),
            gather_bits(self.neg, keep),
        ))
    }

    /// Places this vector's signs at the positions `keep` of a larger ground
    /// set, zero elsewhere. `restrict(lift(x, keep), keep) == x`.
    pub fn lift(&self, keep: &[usize], ground: GroundSet) -> Result<Self> {
        check_keep(keep, ground.len())?;
        if keep.len() != self.len() {
            return Err(OmError::LengthMismatch {
                expected: self.len(),
                found: keep.len(),
            });
        }
        Ok(Self::from_raw(
            ground.len(),
            scatter_bits(self.pos, keep),
            scatter_bits(self.neg, keep),
        ))
    }

    /// All full-support vectors `Y` with `self ⪯ Y`, in sorted order.
    pub fn full_support_extensions(&self) -> Result<Vec<Self>> {
        let free = self.zeros();
        let z = free.len();
        if z > MAX_FREE_POSITIONS {
            return Err(OmError::TooManyCompletions(z));
        }
        let free_positions = free.elements();
        let mut out: Vec<Self> = (0u32..1 << z)
            .map(|choice| {
                let extra = scatter_bits(choice, &free_positions);
                SignedVector {
                    n: self.n,
                    pos: self.pos | extra,
                    neg: self.neg | (free.bits() & !extra),
                }
            })
            .collect();
        out.sort();
        Ok(out)
    }

    fn symbol_rank(&self, bit: u32) -> u8 {
        if self.pos & bit != 0 {
            0
        } else if self.neg & bit != 0 {
            1
        } else {
            2
        }
    }
}

impl Ord for SignedVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            let diff = (self.pos ^ other.pos) | (self.neg ^ other.neg);
            if diff == 0 {
                return Ordering::Equal;
            }
            let bit = diff & diff.wrapping_neg();
            self.symbol_rank(bit).cmp(&other.symbol_rank(bit))
        })
    }
}

impl PartialOrd for SignedVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (1..=self.len())
            .map(|e| match self.sign(e) {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedVector({self})")
    }
}

impl FromStr for SignedVector {
    type Err = OmError;

    /// Parses with the ground set size taken from the string length.
    fn from_str(s: &str) -> Result<Self> {
        SignedVector::parse(s, GroundSet::new(s.chars().count())?)
    }
}

impl Serialize for SignedVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignedVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
