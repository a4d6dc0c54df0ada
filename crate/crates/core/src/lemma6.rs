//! Exhaustive search for rank-3 uniform tope sets sandwiched between the
//! six-element instances, and verification of the circuits they all share.
//!
//! Candidates are `base ∪ S` where `base = T(m2(6))` and `S` ranges over the
//! 10-subsets of the 20 remaining topes of the alternating matroid. Subsets are
//! visited in lexicographic order of index tuples; parallel runs split that
//! order into contiguous rank ranges and concatenate the results, so the
//! survivor list never depends on the thread count.

use rayon::prelude::*;

use crate::axioms::{check_uniform_tope_axioms, circuit_on_support, SupportWitness};
use crate::chirotope::{phi, Chirotope};
use crate::combinatorics::{binomial, lex_unrank, next_combination, Combinations};
use crate::error::{OmError, Result};
use crate::matroid::TopeSet;
use crate::signed::{gather_bits, ElementSet, SignedVector};

/// Supports of the two circuits every survivor must carry.
pub const LEMMA_SUPPORTS: [[usize; 4]; 2] = [[1, 2, 3, 4], [1, 2, 5, 6]];
/// The circuits forced on those supports.
pub const LEMMA_CIRCUITS: [&str; 2] = ["+-+-00", "+-00-+"];
/// The alternating-matroid topes no survivor may contain.
pub const EXCLUDED_TOPES: [&str; 2] = ["+-+---", "+----+"];

pub fn lemma_supports() -> [ElementSet; 2] {
    LEMMA_SUPPORTS.map(|s| ElementSet::from_elements(&s).expect("static support"))
}

pub fn lemma_circuits() -> [SignedVector; 2] {
    LEMMA_CIRCUITS.map(|s| s.parse().expect("static circuit"))
}

pub fn excluded_topes() -> [SignedVector; 2] {
    EXCLUDED_TOPES.map(|s| s.parse().expect("static tope"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchInstance {
    /// Topes of the rank-4 source.
    pub source: TopeSet,
    /// Topes every candidate must contain.
    pub base: TopeSet,
    /// `source \ base`, sorted.
    pub pool: Vec<SignedVector>,
    /// How many pool members a candidate takes.
    pub choose: usize,
    /// Rank of the candidate matroids.
    pub rank: usize,
}

impl SearchInstance {
    /// Candidates are rank-`rank` tope sets `T` with `target ⊆ T ⊆ source`.
    pub fn new(source: &TopeSet, target: &TopeSet, rank: usize) -> Result<Self> {
        if source.n() != target.n() {
            return Err(OmError::GroundSetMismatch {
                left: source.n(),
                right: target.n(),
            });
        }
        if !target.is_subset(source) {
            return Err(OmError::Inconsistent(
                "target topes are not contained in the source topes".into(),
            ));
        }
        let n = source.n();
        let size = phi(rank - 1, n - 1)? as usize;
        let choose = size.checked_sub(target.len()).ok_or_else(|| {
            OmError::Inconsistent("intermediate tope count is below the base size".into())
        })?;
        let pool: Vec<SignedVector> = source
            .iter()
            .filter(|t| !target.contains(t))
            .copied()
            .collect();
        Ok(SearchInstance {
            source: source.clone(),
            base: target.with_rank(rank)?,
            pool,
            choose,
            rank,
        })
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn combination_count(&self) -> u64 {
        binomial(self.pool.len(), self.choose)
    }

    /// `base ∪ {pool[i] : i ∈ picks}` as a tope set of the search rank.
    pub fn candidate(&self, picks: &[usize]) -> Result<TopeSet> {
        let topes = self
            .base
            .iter()
            .copied()
            .chain(picks.iter().map(|&i| self.pool[i]));
        TopeSet::new(self.n(), self.rank, topes)
    }
}

/// The six-element instance: alternating rank 4 over m2, intermediates of rank 3.
pub fn build_search_instance() -> Result<SearchInstance> {
    let source = TopeSet::from_chirotope(&Chirotope::alternating(6, 4)?)?;
    let target = TopeSet::from_chirotope(&Chirotope::m2(6)?)?;
    let inst = SearchInstance::new(&source, &target, 3)?;
    if inst.base.len() != 6 || inst.pool.len() != 20 || inst.choose != 10 {
        return Err(OmError::Inconsistent(format!(
            "search instance has base {}, pool {}, choose {}",
            inst.base.len(),
            inst.pool.len(),
            inst.choose
        )));
    }
    Ok(inst)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivorRecord {
    /// Lexicographic rank of the chosen pool subset.
    pub combination_rank: u64,
    /// Sorted canonical topes.
    pub topes: Vec<SignedVector>,
    pub vc_witnesses: Vec<SupportWitness>,
    /// For each of [`EXCLUDED_TOPES`]: true when the tope is absent.
    pub excluded: [bool; 2],
    /// Circuits on [`LEMMA_SUPPORTS`]; `None` when extraction failed.
    pub circuits: [Option<SignedVector>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma6Certificate {
    pub instance: SearchInstance,
    pub combinations_checked: u64,
    pub survivors: Vec<SurvivorRecord>,
    /// Circuits shared by every survivor, if they agree.
    pub conclusion_circuits: Option<[SignedVector; 2]>,
}

/// Per-support coverage masks: bit `p` is set when some tope restricts to the
/// local pattern with positive bits `p` (either sign).
struct CoverageTable {
    supports: Vec<Vec<usize>>,
    full: u64,
    base: Vec<u64>,
    pool: Vec<Vec<u64>>,
}

impl CoverageTable {
    fn new(inst: &SearchInstance) -> Result<Self> {
        let k = inst.rank + 1;
        if k > 6 {
            return Err(OmError::TooLarge {
                what: "bitmask VC filter (rank + 1)",
                n: k,
                limit: 6,
            });
        }
        let supports: Vec<Vec<usize>> = Combinations::new(inst.n(), k)
            .map(|q| q.iter().map(|i| i + 1).collect())
            .collect();
        let local_full = (1u32 << k) - 1;
        let cover = |t: &SignedVector| -> Vec<u64> {
            supports
                .iter()
                .map(|q| {
                    let p = gather_bits(t.positive().bits(), q);
                    (1u64 << p) | (1u64 << (local_full & !p))
                })
                .collect()
        };
        let mut base = vec![0u64; supports.len()];
        for t in inst.base.iter() {
            for (acc, m) in base.iter_mut().zip(cover(t)) {
                *acc |= m;
            }
        }
        let pool = inst.pool.iter().map(cover).collect();
        let full = if k == 6 {
            u64::MAX
        } else {
            (1u64 << (1 << k)) - 1
        };
        Ok(CoverageTable {
            supports,
            full,
            base,
            pool,
        })
    }

    /// Every support keeps at least one uncovered pattern.
    fn passes(&self, picks: &[usize], scratch: &mut [u64]) -> bool {
        scratch.copy_from_slice(&self.base);
        for &i in picks {
            for (acc, m) in scratch.iter_mut().zip(&self.pool[i]) {
                *acc |= m;
            }
        }
        scratch.iter().all(|&c| c != self.full)
    }
}

fn scan_range(
    table: &CoverageTable,
    inst: &SearchInstance,
    start: u64,
    count: u64,
) -> Vec<(u64, Vec<usize>)> {
    let mut out = Vec::new();
    if count == 0 {
        return out;
    }
    let n = inst.pool.len();
    let mut picks = lex_unrank(start, n, inst.choose);
    let mut scratch = vec![0u64; table.supports.len()];
    for offset in 0..count {
        if table.passes(&picks, &mut scratch) {
            out.push((start + offset, picks.clone()));
        }
        if !next_combination(&mut picks, n) {
            break;
        }
    }
    out
}

/// Splits `0..total` into `parts` contiguous ranges.
fn rank_ranges(total: u64, parts: u64) -> Vec<(u64, u64)> {
    let parts = parts.max(1).min(total.max(1));
    (0..parts)
        .map(|i| {
            let lo = total * i / parts;
            let hi = total * (i + 1) / parts;
            (lo, hi - lo)
        })
        .collect()
}

/// Runs the full enumeration on `threads` workers (1 = on the calling thread).
pub fn enumerate_survivors(inst: &SearchInstance, threads: usize) -> Result<Lemma6Certificate> {
    let table = CoverageTable::new(inst)?;
    let total = inst.combination_count();
    let hits: Vec<(u64, Vec<usize>)> = if threads <= 1 {
        scan_range(&table, inst, 0, total)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| OmError::Inconsistent(format!("thread pool: {e}")))?;
        let ranges = rank_ranges(total, threads as u64 * 8);
        pool.install(|| {
            ranges
                .par_iter()
                .map(|&(lo, len)| scan_range(&table, inst, lo, len))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
    };

    let supports = lemma_supports();
    let excluded = excluded_topes();
    let mut survivors = Vec::with_capacity(hits.len());
    for (rank, picks) in hits {
        let candidate = inst.candidate(&picks)?;
        let report = check_uniform_tope_axioms(&candidate);
        if !report.passes() {
            return Err(OmError::Inconsistent(format!(
                "bitmask filter accepted combination {rank} but the axiom check rejects it"
            )));
        }
        survivors.push(SurvivorRecord {
            combination_rank: rank,
            topes: candidate.iter().copied().collect(),
            vc_witnesses: report.witnesses,
            excluded: excluded.map(|t| !candidate.contains(&t)),
            circuits: supports.map(|q| circuit_on_support(&candidate, q).ok()),
        });
    }

    let conclusion_circuits = survivors.first().and_then(|first| {
        let [Some(a), Some(b)] = first.circuits else {
            return None;
        };
        survivors
            .iter()
            .all(|s| s.circuits == [Some(a), Some(b)])
            .then_some([a, b])
    });

    Ok(Lemma6Certificate {
        instance: inst.clone(),
        combinations_checked: total,
        survivors,
        conclusion_circuits,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("lemma check failed{}: {reason}", survivor.map(|i| format!(" at survivor {i}")).unwrap_or_default())]
pub struct Lemma6Failure {
    pub survivor: Option<usize>,
    pub reason: String,
}

fn fail(survivor: Option<usize>, reason: impl Into<String>) -> Lemma6Failure {
    Lemma6Failure {
        survivor,
        reason: reason.into(),
    }
}

/// The unique tope of `source` whose restriction to `support` is `±pattern`.
pub fn unique_tope_matching(
    source: &TopeSet,
    support: ElementSet,
    pattern: &SignedVector,
) -> Option<SignedVector> {
    let q = support.elements();
    let local = pattern.restrict(&q).ok()?;
    let matches: Vec<SignedVector> = source
        .iter()
        .filter(|t| {
            let r = t.restrict(&q).expect("support inside ground set");
            r == local || r == local.opposite()
        })
        .copied()
        .collect();
    match matches.as_slice() {
        [only] => Some(*only),
        _ => None,
    }
}

/// Re-checks everything the certificate claims about the survivors, plus the
/// side facts linking each excluded tope to its circuit.
pub fn verify_lemma6(cert: &Lemma6Certificate) -> std::result::Result<(), Lemma6Failure> {
    let inst = &cert.instance;
    if cert.combinations_checked != inst.combination_count() {
        return Err(fail(
            None,
            format!(
                "checked {} combinations, expected {}",
                cert.combinations_checked,
                inst.combination_count()
            ),
        ));
    }

    let supports = lemma_supports();
    let circuits = lemma_circuits();
    let excluded = excluded_topes();

    for i in 0..2 {
        match unique_tope_matching(&inst.source, supports[i], &circuits[i]) {
            Some(t) if t == excluded[i] => {}
            other => {
                return Err(fail(
                    None,
                    format!(
                        "expected {} to be the only source tope matching {} on {}, found {:?}",
                        excluded[i], circuits[i], supports[i], other
                    ),
                ))
            }
        }
    }

    let size = phi(inst.rank - 1, inst.n() - 1).unwrap_or(0) as usize;
    for (idx, s) in cert.survivors.iter().enumerate() {
        let here = Some(idx);
        let topes = TopeSet::new(inst.n(), inst.rank, s.topes.iter().copied())
            .map_err(|e| fail(here, e.to_string()))?;
        if topes.len() != size || s.topes.len() != size {
            return Err(fail(
                here,
                format!("has {} topes, expected {size}", s.topes.len()),
            ));
        }
        if !inst.base.iter().all(|t| topes.contains(t)) {
            return Err(fail(here, "does not contain the base topes"));
        }
        if !topes.is_subset(&inst.source) {
            return Err(fail(here, "contains a vector outside the source topes"));
        }
        let report = check_uniform_tope_axioms(&topes);
        if !report.passes() {
            return Err(fail(here, "fails the uniform tope axioms"));
        }
        if report.witnesses != s.vc_witnesses {
            return Err(fail(here, "recorded witnesses differ from recomputed ones"));
        }
        for (t, absent) in excluded.iter().zip(s.excluded) {
            if topes.contains(t) || !absent {
                return Err(fail(
                    here,
                    format!("contains or misreports excluded tope {t}"),
                ));
            }
        }
        for ((q, want), recorded) in supports.iter().zip(&circuits).zip(&s.circuits) {
            let got = circuit_on_support(&topes, *q).map_err(|e| fail(here, e.to_string()))?;
            if got != *want || *recorded != Some(got) {
                return Err(fail(
                    here,
                    format!("circuit on {q} is {got} (recorded {recorded:?}), expected {want}"),
                ));
            }
        }
    }

    if cert.conclusion_circuits != Some(circuits) {
        return Err(fail(
            None,
            format!(
                "conclusion circuits {:?} differ from {circuits:?}",
                cert.conclusion_circuits
            ),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: &str) -> SignedVector {
        s.parse().unwrap()
    }

    #[test]
    fn instance_shape() {
        let inst = build_search_instance().unwrap();
        assert_eq!(inst.base.len(), 6);
        assert_eq!(inst.pool.len(), 20);
        assert_eq!(inst.choose, 10);
        assert_eq!(inst.combination_count(), 184_756);
        assert!(inst.base.is_subset(&inst.source));
        assert!(inst.pool.windows(2).all(|w| w[0] < w[1]));
        assert!(inst.pool.iter().all(|t| !inst.base.contains(t)));
    }

    #[test]
    fn rank_ranges_cover_everything() {
        for (total, parts) in [(184_756, 7), (5, 8), (0, 3), (10, 1)] {
            let ranges = rank_ranges(total, parts);
            let mut next = 0;
            for (lo, len) in ranges {
                assert_eq!(lo, next);
                next += len;
            }
            assert_eq!(next, total);
        }
    }

    #[test]
    fn side_lemmas() {
        let inst = build_search_instance().unwrap();
        let [q1, q2] = lemma_supports();
        assert_eq!(
            unique_tope_matching(&inst.source, q1, &sv("+-+-00")),
            Some(sv("+-+---"))
        );
        assert_eq!(
            unique_tope_matching(&inst.source, q2, &sv("+-00-+")),
            Some(sv("+----+"))
        );
    }

    #[test]
    fn bitmask_filter_matches_axiom_checker() {
        let inst = build_search_instance().unwrap();
        let table = CoverageTable::new(&inst).unwrap();
        let mut scratch = vec![0u64; table.supports.len()];
        // every 500th combination plus the first and last
        let total = inst.combination_count();
        let ranks = (0..total).step_by(500).chain([total - 1]);
        for rank in ranks {
            let picks = lex_unrank(rank, inst.pool.len(), inst.choose);
            let fast = table.passes(&picks, &mut scratch);
            let slow = check_uniform_tope_axioms(&inst.candidate(&picks).unwrap()).passes();
            assert_eq!(fast, slow, "rank {rank}");
        }
    }

    #[test]
    fn corrupted_certificate_fails_verification() {
        let inst = build_search_instance().unwrap();
        let mut cert = enumerate_survivors(&inst, 1).unwrap();
        assert!(verify_lemma6(&cert).is_ok());

        let mut bad = cert.clone();
        bad.combinations_checked -= 1;
        assert!(verify_lemma6(&bad).is_err());

        // swap one pool tope of survivor 3 for the excluded tope
        let excluded = sv("+-+---");
        let s = &mut cert.survivors[3];
        let pos = s.topes.iter().position(|t| !inst.base.contains(t)).unwrap();
        s.topes[pos] = excluded;
        s.topes.sort();
        let err = verify_lemma6(&cert).unwrap_err();
        assert_eq!(err.survivor, Some(3));
    }
}
