//! The eight-element argument: the strong map exists, yet any rank-3
//! intermediate would need two incompatible circuits on `{1, 2, 5, 6}`.

use serde::{Deserialize, Serialize};

use crate::axioms::{check_uniform_tope_axioms, circuit_on_support};
use crate::chirotope::Chirotope;
use crate::combinatorics::{binomial, Combinations};
use crate::error::{OmError, Result};
use crate::lemma6::{
    build_search_instance, enumerate_survivors, lemma_circuits, lemma_supports, verify_lemma6,
    Lemma6Certificate,
};
use crate::matroid::TopeSet;
use crate::signed::{gather_bits, ElementSet, GroundSet, SignedVector};
use crate::strong_map::{is_strong_map_topes, StrongMapVerdict};

/// The two six-element restrictions used by the argument.
pub const KEPT_SETS: [[usize; 6]; 2] = [[1, 2, 3, 4, 5, 6], [1, 2, 5, 6, 7, 8]];
/// Support on which the lifted circuits collide.
pub const CONFLICT_SUPPORT: [usize; 4] = [1, 2, 5, 6];

pub fn conflict_support() -> ElementSet {
    ElementSet::from_elements(&CONFLICT_SUPPORT).expect("static support")
}

/// Tope-inclusion check of `alternating(8, 4) -> m2(8)`.
pub fn verify_premise_n8() -> Result<StrongMapVerdict> {
    let source = TopeSet::from_chirotope(&Chirotope::alternating(8, 4)?)?;
    let target = TopeSet::from_chirotope(&Chirotope::m2(8)?)?;
    is_strong_map_topes(&source, &target)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionCheck {
    pub kept: Vec<usize>,
    pub m1_restricted: String,
    pub m2_restricted: String,
    pub m1_restricted_equals_alternating: bool,
    pub m2_restricted_equals_m2_6: bool,
    /// The six-element support (after relabeling) whose circuit is lifted.
    pub lemma_support: ElementSet,
    pub lemma_circuit: SignedVector,
    pub lifted_circuit: SignedVector,
}

impl RestrictionCheck {
    pub fn passes(&self) -> bool {
        self.m1_restricted_equals_alternating && self.m2_restricted_equals_m2_6
    }
}

/// Restricts both eight-element chirotopes to `kept`, compares them with the
/// six-element pair, and lifts the six-element circuit whose support maps onto
/// `{1, 2, 5, 6}`.
pub fn check_restriction(kept: &[usize]) -> Result<RestrictionCheck> {
    let m1 = Chirotope::alternating(8, 4)?.restrict(kept)?;
    let m2 = Chirotope::m2(8)?.restrict(kept)?;
    let target = conflict_support();
    if !target.is_subset(ElementSet::from_elements(kept)?) {
        return Err(OmError::BadElementList(kept.to_vec()));
    }
    let lemma_support = ElementSet::from_bits(gather_bits(target.bits(), kept));
    let index = lemma_supports()
        .iter()
        .position(|q| *q == lemma_support)
        .ok_or_else(|| {
            OmError::Inconsistent(format!(
                "relabeled support {lemma_support} carries no forced circuit"
            ))
        })?;
    let lemma_circuit = lemma_circuits()[index];
    let lifted_circuit = lemma_circuit.lift(kept, GroundSet::new(8)?)?;
    Ok(RestrictionCheck {
        kept: kept.to_vec(),
        m1_restricted_equals_alternating: m1 == Chirotope::alternating(6, 4)?,
        m2_restricted_equals_m2_6: m2 == Chirotope::m2(6)?,
        m1_restricted: m1.to_string(),
        m2_restricted: m2.to_string(),
        lemma_support,
        lemma_circuit,
        lifted_circuit,
    })
}

/// Same nonempty support, and neither equal nor opposite.
pub fn circuits_conflict(a: &SignedVector, b: &SignedVector) -> bool {
    a.len() == b.len() && !a.is_zero() && a.support() == b.support() && a != b && *a != b.opposite()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssumptionKind {
    /// A standard fact, checked empirically on the available instances.
    Checked,
    /// A cited result, not checked here.
    Cited,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumption {
    pub name: String,
    pub kind: AssumptionKind,
    pub statement: String,
    pub check: Option<String>,
    pub check_passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "stage")]
pub enum Verdict {
    Nonfactorizable,
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContradictionCertificate {
    pub premise_strong_map: StrongMapVerdict,
    pub lemma6: Lemma6Certificate,
    pub lemma6_failure: Option<String>,
    pub restriction_a: RestrictionCheck,
    pub restriction_b: RestrictionCheck,
    pub circuits_conflict: bool,
    pub assumptions: Vec<Assumption>,
    pub verdict: Verdict,
}

/// Deleting elements of a survivor yields the circuits of the survivor that
/// live inside the kept set.
fn check_deletion_circuits(lemma: &Lemma6Certificate) -> bool {
    let n = lemma.instance.n();
    let rank = lemma.instance.rank;
    lemma.survivors.iter().all(|s| {
        let Ok(topes) = TopeSet::new(n, rank, s.topes.iter().copied()) else {
            return false;
        };
        (rank + 1..n).all(|size| {
            Combinations::new(n, size).all(|k| {
                let keep: Vec<usize> = k.iter().map(|i| i + 1).collect();
                let Ok(deleted) = topes.restrict(&keep) else {
                    return false;
                };
                if !check_uniform_tope_axioms(&deleted).passes() {
                    return false;
                }
                Combinations::new(size, rank + 1).all(|q| {
                    let local: Vec<usize> = q.iter().map(|i| i + 1).collect();
                    let parent: Vec<usize> = q.iter().map(|&i| keep[i]).collect();
                    let (Ok(lq), Ok(pq)) = (
                        ElementSet::from_elements(&local),
                        ElementSet::from_elements(&parent),
                    ) else {
                        return false;
                    };
                    match (
                        circuit_on_support(&deleted, lq),
                        circuit_on_support(&topes, pq),
                    ) {
                        (Ok(c), Ok(p)) => p
                            .restrict(&keep)
                            .map(|r| r.canonicalize() == c)
                            .unwrap_or(false),
                        _ => false,
                    }
                })
            })
        })
    })
}

/// Every `(r+1)`-subset of every survivor carries exactly one circuit pair.
fn check_unique_circuits(lemma: &Lemma6Certificate) -> bool {
    let n = lemma.instance.n();
    let rank = lemma.instance.rank;
    lemma.survivors.iter().all(|s| {
        let Ok(topes) = TopeSet::new(n, rank, s.topes.iter().copied()) else {
            return false;
        };
        Combinations::new(n, rank + 1).all(|q| {
            let labels: Vec<usize> = q.iter().map(|i| i + 1).collect();
            ElementSet::from_elements(&labels)
                .and_then(|support| circuit_on_support(&topes, support))
                .is_ok()
        })
    })
}

/// Restricting the eight-element pair keeps the tope inclusion on both kept sets.
fn check_restricted_strong_maps() -> Result<bool> {
    let source = TopeSet::from_chirotope(&Chirotope::alternating(8, 4)?)?;
    let target = TopeSet::from_chirotope(&Chirotope::m2(8)?)?;
    for kept in KEPT_SETS {
        let s = source.restrict(&kept)?;
        let t = target.restrict(&kept)?.with_rank(2)?;
        if !is_strong_map_topes(&s, &t)?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}

fn assumptions(lemma: &Lemma6Certificate) -> Result<Vec<Assumption>> {
    Ok(vec![
        Assumption {
            name: "deletion-circuits".into(),
            kind: AssumptionKind::Checked,
            statement: "the circuits of a deletion are exactly the circuits of the parent supported inside the kept set".into(),
            check: Some("every deletion of every survivor to 4 or 5 elements is a uniform rank-3 tope set whose circuits are the restricted parent circuits".into()),
            check_passed: Some(check_deletion_circuits(lemma)),
        },
        Assumption {
            name: "unique-circuit-per-support".into(),
            kind: AssumptionKind::Checked,
            statement: "a uniform rank-r oriented matroid has exactly one circuit pair on each (r+1)-subset".into(),
            check: Some("circuit extraction finds exactly one canonical circuit on all 15 four-element supports of every survivor".into()),
            check_passed: Some(check_unique_circuits(lemma)),
        },
        Assumption {
            name: "restriction-preserves-strong-maps".into(),
            kind: AssumptionKind::Checked,
            statement: "restricting a strong map M1 -> M' -> M2 to a subset of the ground set gives strong maps between the restrictions".into(),
            check: Some("the restricted eight-element pair keeps the tope inclusion on both kept sets".into()),
            check_passed: Some(check_restricted_strong_maps()?),
        },
        Assumption {
            name: "factorization-through-rank-3".into(),
            kind: AssumptionKind::Cited,
            statement: "a factorizable corank-2 strong map passes through a rank-3 matroid M' with strong maps M1 -> M' -> M2, since deletions and contractions commute".into(),
            check: None,
            check_passed: None,
        },
        Assumption {
            name: "uniform-intermediate".into(),
            kind: AssumptionKind::Cited,
            statement: "the intermediate matroid may be taken uniform by perturbing the extension element (Bjorner et al., Oriented Matroids, Prop. 7.2.2(2))".into(),
            check: None,
            check_passed: None,
        },
    ])
}

/// Runs every stage and assembles the certificate. Mathematical failures
/// produce a certificate with an `Invalid` verdict naming the first failing
/// stage; only construction errors are returned as `Err`.
pub fn build_contradiction_certificate(threads: usize) -> Result<ContradictionCertificate> {
    let premise = verify_premise_n8()?;
    let instance = build_search_instance()?;
    let lemma6 = enumerate_survivors(&instance, threads)?;
    build_from_lemma(premise, lemma6)
}

/// Assembles the certificate from an already computed search result.
pub fn build_from_lemma(
    premise: StrongMapVerdict,
    lemma6: Lemma6Certificate,
) -> Result<ContradictionCertificate> {
    let lemma6_failure = verify_lemma6(&lemma6).err().map(|e| e.to_string());
    let restriction_a = check_restriction(&KEPT_SETS[0])?;
    let restriction_b = check_restriction(&KEPT_SETS[1])?;
    let (a, b) = (restriction_a.lifted_circuit, restriction_b.lifted_circuit);
    let conflict = a.support() == conflict_support()
        && b.support() == conflict_support()
        && circuits_conflict(&a, &b);
    let assumptions = assumptions(&lemma6)?;

    let verdict = if !premise.holds || premise.corank != 2 {
        Verdict::Invalid("premise".into())
    } else if lemma6_failure.is_some() {
        Verdict::Invalid("lemma6".into())
    } else if !restriction_a.passes() {
        Verdict::Invalid("restriction-a".into())
    } else if !restriction_b.passes() {
        Verdict::Invalid("restriction-b".into())
    } else if !conflict {
        Verdict::Invalid("circuit-conflict".into())
    } else if assumptions.iter().any(|a| a.check_passed == Some(false)) {
        Verdict::Invalid("assumptions".into())
    } else {
        Verdict::Nonfactorizable
    };

    Ok(ContradictionCertificate {
        premise_strong_map: premise,
        lemma6,
        lemma6_failure,
        restriction_a,
        restriction_b,
        circuits_conflict: conflict,
        assumptions,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectSearchOutcome {
    /// The whole space was exhausted without finding an intermediate.
    NoneFound { nodes: u64 },
    /// The node budget ran out first.
    BudgetExhausted { nodes: u64 },
}

/// Backtracking search for a rank-3 uniform tope set `S` with
/// `T(m2(8)) ⊆ S ⊆ T(alternating(8, 4))`.
///
/// Pruning: no 4-subset may have all 16 local patterns covered, and every
/// 4-subset must still be able to reach the 14 covered patterns any
/// rank-3 uniform tope set shows on four elements. A found set is returned as
/// `Err(Inconsistent)`, since it would refute the main result.
pub fn direct_search_n8(budget: u64) -> Result<DirectSearchOutcome> {
    let source = TopeSet::from_chirotope(&Chirotope::alternating(8, 4)?)?;
    let target = TopeSet::from_chirotope(&Chirotope::m2(8)?)?;
    let inst = crate::lemma6::SearchInstance::new(&source, &target, 3)?;
    let supports: Vec<Vec<usize>> = Combinations::new(8, 4)
        .map(|q| q.iter().map(|i| i + 1).collect())
        .collect();
    let cover = |t: &SignedVector| -> Vec<u16> {
        supports
            .iter()
            .map(|q| {
                let p = gather_bits(t.positive().bits(), q);
                (1u16 << p) | (1u16 << (0xF & !p))
            })
            .collect()
    };
    let mut base = vec![0u16; supports.len()];
    for t in inst.base.iter() {
        for (acc, m) in base.iter_mut().zip(cover(t)) {
            *acc |= m;
        }
    }
    let pool: Vec<Vec<u16>> = inst.pool.iter().map(cover).collect();
    // suffix[i] = coverage reachable from pool[i..]
    let mut suffix = vec![vec![0u16; supports.len()]; pool.len() + 1];
    for i in (0..pool.len()).rev() {
        for q in 0..supports.len() {
            suffix[i][q] = suffix[i + 1][q] | pool[i][q];
        }
    }
    debug_assert_eq!(
        binomial(inst.pool.len(), inst.choose),
        inst.combination_count()
    );

    struct Search<'a> {
        pool: &'a [Vec<u16>],
        suffix: &'a [Vec<u16>],
        budget: u64,
        nodes: u64,
        found: Option<Vec<usize>>,
    }

    impl Search<'_> {
        /// Returns false when the budget ran out.
        fn visit(
            &mut self,
            next: usize,
            need: usize,
            cover: &[u16],
            picked: &mut Vec<usize>,
        ) -> bool {
            if self.nodes >= self.budget {
                return false;
            }
            self.nodes += 1;
            if need == 0 {
                if cover.iter().all(|c| c.count_ones() == 14) {
                    self.found = Some(picked.clone());
                }
                return true;
            }
            if self.pool.len() - next < need {
                return true;
            }
            let reachable = cover
                .iter()
                .zip(&self.suffix[next])
                .all(|(c, s)| (c | s).count_ones() >= 14);
            if !reachable {
                return true;
            }
            let with: Vec<u16> = cover
                .iter()
                .zip(&self.pool[next])
                .map(|(c, m)| c | m)
                .collect();
            if with.iter().all(|&c| c != u16::MAX) {
                picked.push(next);
                let ok = self.visit(next + 1, need - 1, &with, picked);
                picked.pop();
                if !ok {
                    return false;
                }
                if self.found.is_some() {
                    return true;
                }
            }
            self.visit(next + 1, need, cover, picked)
        }
    }

    let mut search = Search {
        pool: &pool,
        suffix: &suffix,
        budget,
        nodes: 0,
        found: None,
    };
    let completed = search.visit(0, inst.choose, &base, &mut Vec::new());
    if let Some(picks) = search.found {
        let found = inst.candidate(&picks)?;
        return Err(OmError::Inconsistent(format!(
            "direct search found an intermediate tope set: {:?}",
            found.iter().map(|t| t.to_string()).collect::<Vec<_>>()
        )));
    }
    Ok(if completed {
        DirectSearchOutcome::NoneFound {
            nodes: search.nodes,
        }
    } else {
        DirectSearchOutcome::BudgetExhausted {
            nodes: search.nodes,
        }
    })
}
