//! Axiom checkers for covector sets and uniform tope sets, and circuit
//! extraction from tope sets.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::chirotope::phi;
use crate::combinatorics::Combinations;
use crate::error::{OmError, Result};
use crate::matroid::{CovectorSet, TopeSet};
use crate::signed::{gather_bits, scatter_bits, ElementSet, SignedVector};

/// Examples kept per violation kind; the counters are exact.
pub const MAX_REPORTED: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationFailure {
    pub x: SignedVector,
    pub y: SignedVector,
    pub element: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CovectorAxiomReport {
    pub contains_zero: bool,
    pub opposite_failures: usize,
    pub composition_failures: usize,
    pub elimination_failures: usize,
    pub missing_opposites: Vec<SignedVector>,
    pub missing_compositions: Vec<(SignedVector, SignedVector)>,
    pub failed_eliminations: Vec<EliminationFailure>,
}

impl CovectorAxiomReport {
    pub fn passes(&self) -> bool {
        self.contains_zero
            && self.opposite_failures == 0
            && self.composition_failures == 0
            && self.elimination_failures == 0
    }
}

fn record<T>(list: &mut Vec<T>, item: T) {
    if list.len() < MAX_REPORTED {
        list.push(item);
    }
}

/// Checks zero membership, symmetry, closure under composition and covector
/// elimination. Violations are reported, never raised.
pub fn check_covector_axioms(covectors: &CovectorSet) -> CovectorAxiomReport {
    let full = covectors.ground().full().bits();
    let members: Vec<SignedVector> = covectors.iter().copied().collect();
    let mut report = CovectorAxiomReport {
        contains_zero: covectors.contains(&SignedVector::zero(covectors.ground())),
        ..Default::default()
    };

    for x in &members {
        if !covectors.contains(&x.opposite()) {
            report.opposite_failures += 1;
            record(&mut report.missing_opposites, *x);
        }
    }

    // projections of the set onto each coordinate mask, built on demand
    let mut projections: HashMap<u32, HashSet<(u32, u32)>> = HashMap::new();
    for x in &members {
        for y in &members {
            let xy = x.compose_raw(y);
            if !covectors.contains(&xy) {
                report.composition_failures += 1;
                record(&mut report.missing_compositions, (*x, *y));
            }
            let sep = x.separation_raw(y).bits();
            if sep == 0 {
                continue;
            }
            for e in ElementSet::from_bits(sep).elements() {
                let bit = 1u32 << (e - 1);
                let fixed = (full & !sep) | bit;
                let index = projections.entry(fixed).or_insert_with(|| {
                    members
                        .iter()
                        .map(|z| (z.positive().bits() & fixed, z.negative().bits() & fixed))
                        .collect()
                });
                let target = (
                    xy.positive().bits() & fixed & !bit,
                    xy.negative().bits() & fixed & !bit,
                );
                if !index.contains(&target) {
                    report.elimination_failures += 1;
                    record(
                        &mut report.failed_eliminations,
                        EliminationFailure {
                            x: *x,
                            y: *y,
                            element: e,
                        },
                    );
                }
            }
        }
    }
    report
}

/// The pattern that no tope restricts to on one `(r+1)`-subset, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportWitness {
    pub support: ElementSet,
    pub pattern: Option<SignedVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformTopeReport {
    pub n: usize,
    pub rank: usize,
    pub expected_count: u64,
    pub count: usize,
    pub witnesses: Vec<SupportWitness>,
}

impl UniformTopeReport {
    pub fn count_ok(&self) -> bool {
        self.expected_count == self.count as u64
    }

    pub fn passes(&self) -> bool {
        self.count_ok() && self.witnesses.iter().all(|w| w.pattern.is_some())
    }
}

/// Canonical signed vectors supported exactly on `support`, sorted.
pub fn canonical_patterns(n: usize, support: ElementSet) -> Vec<SignedVector> {
    let elements = support.elements();
    let k = elements.len();
    if k == 0 {
        return Vec::new();
    }
    let mut out: Vec<SignedVector> = (0u32..1 << (k - 1))
        .map(|free| {
            let local_pos = 1 | (free << 1);
            let local_neg = ((1u32 << k) - 1) & !local_pos;
            SignedVector::from_raw(
                n,
                scatter_bits(local_pos, &elements),
                scatter_bits(local_neg, &elements),
            )
        })
        .collect();
    out.sort();
    out
}

/// Restriction patterns of `topes` on `support`, both signs, as a table
/// indexed by the gathered positive bits.
fn covered_patterns(topes: &TopeSet, elements: &[usize]) -> Vec<bool> {
    let k = elements.len();
    let local_full = (1u32 << k) - 1;
    let mut covered = vec![false; 1 << k];
    for t in topes.iter() {
        let p = gather_bits(t.positive().bits(), elements);
        covered[p as usize] = true;
        covered[(local_full & !p) as usize] = true;
    }
    covered
}

/// Patterns `c` on `support` with every tope perpendicular to `c`.
fn avoided_patterns(topes: &TopeSet, support: ElementSet) -> Vec<SignedVector> {
    let elements = support.elements();
    let covered = covered_patterns(topes, &elements);
    canonical_patterns(topes.n(), support)
        .into_iter()
        .filter(|c| !covered[gather_bits(c.positive().bits(), &elements) as usize])
        .collect()
}

/// Tope-count and VC-dimension conditions characterising the tope sets of
/// uniform oriented matroids of the stated rank. The witness for each
/// `(r+1)`-subset is the first avoided pattern in sorted order.
pub fn check_uniform_tope_axioms(topes: &TopeSet) -> UniformTopeReport {
    let n = topes.n();
    let rank = topes.rank();
    let expected_count = phi(rank - 1, n - 1).unwrap_or(0);
    let witnesses = Combinations::new(n, rank + 1)
        .map(|q| {
            let labels: Vec<usize> = q.iter().map(|i| i + 1).collect();
            let support = ElementSet::from_elements(&labels).expect("labels in range");
            SupportWitness {
                support,
                pattern: avoided_patterns(topes, support).into_iter().next(),
            }
        })
        .collect();
    UniformTopeReport {
        n,
        rank,
        expected_count,
        count: topes.len(),
        witnesses,
    }
}

/// The unique canonical circuit supported on `support`: the only pattern on
/// it to which every tope is perpendicular.
pub fn circuit_on_support(topes: &TopeSet, support: ElementSet) -> Result<SignedVector> {
    let expected = topes.rank() + 1;
    if support.len() != expected || !support.is_subset(topes.ground().full()) {
        return Err(OmError::SupportSize {
            support: support.to_string(),
            expected,
            found: support.len(),
        });
    }
    let avoided = avoided_patterns(topes, support);
    match avoided.as_slice() {
        [] => Err(OmError::NoCircuit(support.to_string())),
        [c] => Ok(*c),
        many => Err(OmError::MultipleCircuits {
            support: support.to_string(),
            count: many.len(),
        }),
    }
}
