//! Tope and covector sets generated from chirotopes.

use std::collections::{BTreeSet, HashSet};

use crate::chirotope::Chirotope;
use crate::combinatorics::Combinations;
use crate::error::{OmError, Result};
use crate::signed::{ElementSet, GroundSet, SignedVector};

/// Default cap on the number of covectors the composition closure may visit.
pub const CLOSURE_LIMIT: usize = 1 << 20;
/// Largest ground set for routines that enumerate all `3^n` signed vectors.
pub const MAX_ENUMERATION_GROUND: usize = 14;

/// Canonical full-support covectors of a rank-`rank` oriented matroid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopeSet {
    ground: GroundSet,
    rank: usize,
    topes: BTreeSet<SignedVector>,
}

impl TopeSet {
    /// Fails if some member is not a canonical full-support vector on `n`
    /// elements. Duplicates collapse.
    pub fn new(
        n: usize,
        rank: usize,
        topes: impl IntoIterator<Item = SignedVector>,
    ) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if rank == 0 || rank > n {
            return Err(OmError::RankOutOfRange { n, rank });
        }
        let mut set = BTreeSet::new();
        for t in topes {
            if t.len() != n || !t.has_full_support() || !t.is_canonical() {
                return Err(OmError::BadTope(t.to_string()));
            }
            set.insert(t);
        }
        Ok(TopeSet {
            ground,
            rank,
            topes: set,
        })
    }

    /// Tope set of the matroid defined by a uniform chirotope.
    pub fn from_chirotope(chi: &Chirotope) -> Result<Self> {
        let cocircuits = cocircuits_from_chirotope(chi)?;
        let topes = topes_from_cocircuits(&cocircuits, chi.n())?;
        debug_assert_eq!(topes.rank(), chi.rank());
        Ok(topes)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Same topes, different rank metadata.
    pub fn with_rank(&self, rank: usize) -> Result<Self> {
        if rank == 0 || rank > self.n() {
            return Err(OmError::RankOutOfRange { n: self.n(), rank });
        }
        Ok(TopeSet {
            rank,
            ..self.clone()
        })
    }

    pub fn len(&self) -> usize {
        self.topes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topes.is_empty()
    }

    /// Canonical topes in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &SignedVector> + '_ {
        self.topes.iter()
    }

    /// Both signs of every tope.
    pub fn iter_signed(&self) -> impl Iterator<Item = SignedVector> + '_ {
        self.topes.iter().flat_map(|t| [*t, t.opposite()])
    }

    /// Membership up to sign.
    pub fn contains(&self, x: &SignedVector) -> bool {
        self.topes.contains(&x.canonicalize())
    }

    pub fn is_subset(&self, other: &TopeSet) -> bool {
        self.n() == other.n() && self.topes.is_subset(&other.topes)
    }

    /// Lookup table indexed by the positive mask of a full-support vector;
    /// both signs of every tope are marked.
    pub(crate) fn membership_table(&self) -> Vec<bool> {
        let full = self.ground.full().bits();
        let mut table = vec![false; 1usize << self.n()];
        for t in &self.topes {
            let p = t.positive().bits();
            table[p as usize] = true;
            table[(full & !p) as usize] = true;
        }
        table
    }

    /// Tope set of the deletion to `keep` (relabeled in order); rank metadata
    /// is kept.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let topes = self
            .topes
            .iter()
            .map(|t| t.restrict(keep).map(|r| r.canonicalize()))
            .collect::<Result<BTreeSet<_>>>()?;
        TopeSet::new(keep.len(), self.rank.min(keep.len()), topes)
    }
}

/// Every covector, both signs, `0` included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovectorSet {
    ground: GroundSet,
    rank: usize,
    covectors: BTreeSet<SignedVector>,
}

impl CovectorSet {
    /// No axioms are checked here; see [`crate::axioms::check_covector_axioms`].
    pub fn from_vectors(
        n: usize,
        rank: usize,
        vectors: impl IntoIterator<Item = SignedVector>,
    ) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        let covectors = vectors.into_iter().collect::<BTreeSet<_>>();
        if let Some(bad) = covectors.iter().find(|x| x.len() != n) {
            return Err(OmError::GroundSetMismatch {
                left: n,
                right: bad.len(),
            });
        }
        Ok(CovectorSet {
            ground,
            rank,
            covectors,
        })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.covectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covectors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SignedVector> + '_ {
        self.covectors.iter()
    }

    pub fn contains(&self, x: &SignedVector) -> bool {
        self.covectors.contains(x)
    }

    /// Nonzero conformally minimal members, canonical representatives only.
    pub fn minimal_nonzero(&self) -> BTreeSet<SignedVector> {
        let nonzero: Vec<&SignedVector> = self.covectors.iter().filter(|x| !x.is_zero()).collect();
        nonzero
            .iter()
            .filter(|x| !nonzero.iter().any(|y| y != *x && y.conforms_raw(x)))
            .map(|x| x.canonicalize())
            .collect()
    }
}

/// One canonical cocircuit per `(r-1)`-subset `Z`:
/// `c(e) = χ(z_1, .., z_{r-1}, e)` off `Z`, zero on `Z`.
pub fn cocircuits_from_chirotope(chi: &Chirotope) -> Result<Vec<SignedVector>> {
    if !chi.is_uniform() {
        return Err(OmError::NonUniform);
    }
    let n = chi.n();
    let r = chi.rank();
    let mut out = BTreeSet::new();
    let mut tuple = vec![0usize; r];
    for z in Combinations::new(n, r - 1) {
        for (slot, &zi) in tuple.iter_mut().zip(&z) {
            *slot = zi + 1;
        }
        let (mut pos, mut neg) = (0u32, 0u32);
        for e in 1..=n {
            if z.contains(&(e - 1)) {
                continue;
            }
            tuple[r - 1] = e;
            match chi.value(&tuple) {
                1 => pos |= 1 << (e - 1),
                -1 => neg |= 1 << (e - 1),
                _ => unreachable!("uniform chirotope"),
            }
        }
        out.insert(SignedVector::from_raw(n, pos, neg).canonicalize());
    }
    Ok(out.into_iter().collect())
}

/// Canonical full-support compositions of cocircuits, with the default
/// closure bound.
pub fn topes_from_cocircuits(cocircuits: &[SignedVector], n: usize) -> Result<TopeSet> {
    topes_from_cocircuits_bounded(cocircuits, n, CLOSURE_LIMIT)
}

/// Closes `±cocircuits` under composition (breadth first, right-multiplying
/// by generators) and keeps the full-support results. Rank metadata is
/// inferred as one more than the smallest cocircuit zero set.
pub fn topes_from_cocircuits_bounded(
    cocircuits: &[SignedVector],
    n: usize,
    limit: usize,
) -> Result<TopeSet> {
    let ground = GroundSet::new(n)?;
    if cocircuits.is_empty() {
        return Err(OmError::EmptyCocircuits);
    }
    if let Some(bad) = cocircuits.iter().find(|c| c.len() != n) {
        return Err(OmError::GroundSetMismatch {
            left: n,
            right: bad.len(),
        });
    }
    let rank = cocircuits
        .iter()
        .map(|c| c.zeros().len())
        .min()
        .unwrap_or(0)
        + 1;

    let generators: Vec<SignedVector> = cocircuits
        .iter()
        .flat_map(|c| [*c, c.opposite()])
        .filter(|c| !c.is_zero())
        .collect();
    let mut seen: HashSet<SignedVector> = generators.iter().copied().collect();
    let mut queue: Vec<SignedVector> = seen.iter().copied().collect();
    let mut topes = BTreeSet::new();
    while let Some(x) = queue.pop() {
        if x.has_full_support() {
            topes.insert(x.canonicalize());
            continue;
        }
        let support = x.support().bits();
        for g in &generators {
            if g.support().bits() & !support == 0 {
                continue;
            }
            let y = x.compose_raw(g);
            if seen.insert(y) {
                if seen.len() > limit {
                    return Err(OmError::ClosureBound(limit));
                }
                queue.push(y);
            }
        }
    }
    TopeSet::new(ground.len(), rank.min(n), topes)
}

/// Canonical full-support vectors with at most `rank - 1` sign changes.
pub fn alternating_topes_direct(n: usize, rank: usize) -> Result<TopeSet> {
    let ground = GroundSet::new(n)?;
    if rank == 0 || rank > n {
        return Err(OmError::RankOutOfRange { n, rank });
    }
    if n > 24 {
        return Err(OmError::TooLarge {
            what: "direct tope enumeration",
            n,
            limit: 24,
        });
    }
    let adjacent = if n == 1 { 0 } else { (1u32 << (n - 1)) - 1 };
    let topes = (0u32..1 << n)
        .filter(|p| p & 1 == 1)
        .filter(|p| (((p ^ (p >> 1)) & adjacent).count_ones() as usize) < rank)
        .map(|p| SignedVector::full_support(ground, ElementSet::from_bits(p)));
    TopeSet::new(n, rank, topes)
}

/// Visits every signed vector on `n` elements exactly once.
pub(crate) fn for_each_signed_vector(n: usize, mut f: impl FnMut(SignedVector)) {
    for support in 0u32..1 << n {
        let mut pos = support;
        loop {
            f(SignedVector::from_raw(n, pos, support & !pos));
            if pos == 0 {
                break;
            }
            pos = (pos - 1) & support;
        }
    }
}

/// All `X` such that `X ∘ T` is a tope for every tope `T` (both signs).
pub fn covectors_from_topes(topes: &TopeSet) -> Result<CovectorSet> {
    let n = topes.n();
    if n > MAX_ENUMERATION_GROUND {
        return Err(OmError::TooLarge {
            what: "covector enumeration",
            n,
            limit: MAX_ENUMERATION_GROUND,
        });
    }
    let table = topes.membership_table();
    let signed: Vec<SignedVector> = topes.iter_signed().collect();
    let mut out = Vec::new();
    for_each_signed_vector(n, |x| {
        if signed
            .iter()
            .all(|t| table[x.compose_raw(t).positive().bits() as usize])
        {
            out.push(x);
        }
    });
    CovectorSet::from_vectors(n, topes.rank(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chirotope::phi;

    fn sv(s: &str) -> SignedVector {
        s.parse().unwrap()
    }

    fn topes_of(chi: &Chirotope) -> TopeSet {
        TopeSet::from_chirotope(chi).unwrap()
    }

    #[test]
    fn cocircuit_examples() {
        let alt = Chirotope::alternating(4, 2).unwrap();
        let cc = cocircuits_from_chirotope(&alt).unwrap();
        assert!(cc.contains(&sv("+0--")));
        assert_eq!(cc.len(), 4);

        let m = Chirotope::m2(4).unwrap();
        assert!(cocircuits_from_chirotope(&m).unwrap().contains(&sv("0+--")));

        for (n, r) in [(6, 4), (8, 4), (6, 3), (5, 2)] {
            let cc = cocircuits_from_chirotope(&Chirotope::alternating(n, r).unwrap()).unwrap();
            assert_eq!(cc.len() as u64, crate::combinatorics::binomial(n, r - 1));
        }

        let non_uniform = Chirotope::from_values(3, 2, vec![0, 1, 1]).unwrap();
        assert_eq!(
            cocircuits_from_chirotope(&non_uniform),
            Err(OmError::NonUniform)
        );
    }

    #[test]
    fn moment_curve_cocircuit_cross_check() {
        // points t = 1..4 on a line, homogenized as (1, t); the cocircuit of Z = {2}
        // is the sign of det[(1, 2), (1, e)] = e - 2.
        let signs: Vec<i8> = (1..=4i32).map(|e| (e - 2).signum() as i8).collect();
        assert_eq!(signs, vec![-1, 0, 1, 1]);
        let realized = SignedVector::from_raw(4, 0b1100, 0b0001).canonicalize();
        let cc = cocircuits_from_chirotope(&Chirotope::alternating(4, 2).unwrap()).unwrap();
        assert!(cc.contains(&realized));
    }

    #[test]
    fn tope_counts_from_chirotopes() {
        assert_eq!(topes_of(&Chirotope::alternating(6, 4).unwrap()).len(), 26);
        assert_eq!(topes_of(&Chirotope::m2(6).unwrap()).len(), 6);
        assert_eq!(topes_of(&Chirotope::alternating(8, 4).unwrap()).len(), 64);
        assert_eq!(topes_of(&Chirotope::m2(8).unwrap()).len(), 8);
        for (n, r) in [(4, 2), (5, 3), (6, 4), (7, 3), (8, 4)] {
            let t = topes_of(&Chirotope::alternating(n, r).unwrap());
            assert_eq!(t.len() as u64, phi(r - 1, n - 1).unwrap());
            assert_eq!(t.rank(), r);
        }
    }

    #[test]
    fn closure_errors() {
        assert_eq!(topes_from_cocircuits(&[], 4), Err(OmError::EmptyCocircuits));
        let cc = cocircuits_from_chirotope(&Chirotope::alternating(6, 4).unwrap()).unwrap();
        assert_eq!(
            topes_from_cocircuits_bounded(&cc, 6, 10),
            Err(OmError::ClosureBound(10))
        );
        assert!(topes_from_cocircuits(&cc, 7).is_err());
    }

    #[test]
    fn direct_alternating_topes() {
        let t = alternating_topes_direct(6, 4).unwrap();
        assert_eq!(t.len(), 26);
        assert!(t.contains(&sv("+-+---")));
        assert!(t.contains(&sv("+----+")));
        let small = alternating_topes_direct(4, 2).unwrap();
        let want: Vec<_> = ["++++", "+++-", "++--", "+---"]
            .iter()
            .map(|s| sv(s))
            .collect();
        let got: Vec<_> = small.iter().copied().collect();
        let mut want_sorted = want.clone();
        want_sorted.sort();
        assert_eq!(got, want_sorted);
        assert_eq!(alternating_topes_direct(8, 4).unwrap().len(), 64);
    }

    #[test]
    fn dual_generation_agrees() {
        for (n, r) in [(4, 2), (4, 4), (6, 4), (8, 4), (7, 3)] {
            let direct = alternating_topes_direct(n, r).unwrap();
            let closure = topes_of(&Chirotope::alternating(n, r).unwrap());
            assert_eq!(direct, closure, "n={n} r={r}");
        }
    }

    #[test]
    fn tope_set_validation() {
        assert!(TopeSet::new(3, 2, [sv("+0-")]).is_err());
        assert!(TopeSet::new(3, 2, [sv("-++")]).is_err());
        assert!(TopeSet::new(3, 4, [sv("+++")]).is_err());
        let t = TopeSet::new(3, 2, [sv("+++"), sv("+++")]).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.contains(&sv("---")));
    }

    #[test]
    fn covector_basics() {
        let t = topes_of(&Chirotope::alternating(6, 4).unwrap());
        let l = covectors_from_topes(&t).unwrap();
        assert!(l.contains(&SignedVector::zero(t.ground())));
        for tope in t.iter_signed() {
            assert!(l.contains(&tope));
        }
        // uniform rank 4 on 6 elements: zero sets of size s <= 3 carry
        // C(6, s) * 2Φ_{3-s}(5-s) covectors each.
        assert_eq!(l.len(), 1 + 52 + 132 + 120 + 40);
        assert!(!l.contains(&sv("+-+-00")));
    }

    #[test]
    fn cocircuits_are_minimal_covectors() {
        let chis = [
            Chirotope::alternating(6, 4).unwrap(),
            Chirotope::alternating(5, 2).unwrap(),
            Chirotope::m2(6).unwrap(),
            Chirotope::m2(4).unwrap(),
        ];
        for chi in &chis {
            let l = covectors_from_topes(&topes_of(chi)).unwrap();
            let minimal = l.minimal_nonzero();
            let cc: BTreeSet<_> = cocircuits_from_chirotope(chi)
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(minimal, cc, "{chi:?}");
        }
    }

    #[test]
    fn deletion_commutes_with_tope_restriction() {
        let keeps: [&[usize]; 3] = [&[1, 2, 3, 4, 5, 6], &[1, 2, 5, 6, 7, 8], &[2, 3, 5, 7, 8]];
        for chi in [
            Chirotope::alternating(8, 4).unwrap(),
            Chirotope::m2(8).unwrap(),
        ] {
            let t = topes_of(&chi);
            for keep in keeps {
                let by_topes = t.restrict(keep).unwrap();
                let by_chirotope = topes_of(&chi.restrict(keep).unwrap());
                assert_eq!(by_topes, by_chirotope, "{chi:?} {keep:?}");
            }
        }
    }
}
