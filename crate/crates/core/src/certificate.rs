//! Versioned JSON certificates and their re-validation.
//!
//! A certificate carries every fact the argument depends on in a form that can
//! be re-checked without repeating the search: chirotopes as sign strings,
//! tope lists, each survivor with its witnesses and circuits, both restriction
//! checks, and the final circuit conflict. Element subsets used as keys are
//! comma-joined ascending labels. Field order is fixed by the struct
//! definitions, maps are sorted, so output bytes depend only on content.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::axioms::SupportWitness;
use crate::chirotope::{phi, Chirotope};
use crate::combinatorics::{binomial, lex_rank};
use crate::lemma6::{
    excluded_topes, lemma_supports, verify_lemma6, Lemma6Certificate, SearchInstance,
    SurvivorRecord,
};
use crate::matroid::TopeSet;
use crate::n8::{
    check_restriction, circuits_conflict, conflict_support, Assumption, AssumptionKind,
    ContradictionCertificate, RestrictionCheck, Verdict, KEPT_SETS,
};
use crate::signed::{ElementSet, SignedVector};
use crate::strong_map::{is_strong_map_topes, StrongMapVerdict};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Alternating,
    M2,
}

impl Family {
    pub fn chirotope(self, n: usize, rank: usize) -> crate::Result<Chirotope> {
        match self {
            Family::Alternating => Chirotope::alternating(n, rank),
            Family::M2 => Chirotope::m2(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChirotopeDoc {
    pub family: Family,
    pub n: usize,
    pub rank: usize,
    /// Values on increasing tuples in lexicographic order, as `{+,-,0}`.
    pub values: String,
}

impl ChirotopeDoc {
    fn new(family: Family, chi: &Chirotope) -> Self {
        ChirotopeDoc {
            family,
            n: chi.n(),
            rank: chi.rank(),
            values: chi.to_string(),
        }
    }

    pub fn parse(&self) -> crate::Result<Chirotope> {
        Chirotope::from_sign_string(self.n, self.rank, &self.values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Lemma6,
    Nonfactorizability,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeInstanceDoc {
    pub source: ChirotopeDoc,
    pub target: ChirotopeDoc,
    pub source_topes: Vec<SignedVector>,
    pub target_topes: Vec<SignedVector>,
    pub premise: StrongMapVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub kind: CertificateKind,
    pub source: ChirotopeDoc,
    pub target: ChirotopeDoc,
    pub intermediate_rank: usize,
    pub base: Vec<SignedVector>,
    pub pool: Vec<SignedVector>,
    pub choose: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub large: Option<LargeInstanceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsDoc {
    pub source_topes: usize,
    pub target_topes: usize,
    pub pool_size: usize,
    pub choose: usize,
    pub combinations_checked: u64,
    pub survivor_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub large_source_topes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub large_target_topes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorDoc {
    pub combination_rank: u64,
    pub topes: Vec<SignedVector>,
    pub circuits: BTreeMap<String, Option<SignedVector>>,
    pub excluded: BTreeMap<String, bool>,
    pub vc_witnesses: BTreeMap<String, Option<SignedVector>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConclusionDoc {
    pub lemma_circuits: Option<BTreeMap<String, SignedVector>>,
    pub lemma_verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma_failure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit_a: Option<SignedVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit_b: Option<SignedVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contradiction: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<Assumption>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub version: u32,
    pub instance: InstanceDoc,
    pub counts: CountsDoc,
    pub survivors: Vec<SurvivorDoc>,
    pub restrictions: Vec<RestrictionCheck>,
    pub conclusion: ConclusionDoc,
}

fn survivor_doc(s: &SurvivorRecord) -> SurvivorDoc {
    let supports = lemma_supports();
    SurvivorDoc {
        combination_rank: s.combination_rank,
        topes: s.topes.clone(),
        circuits: supports
            .iter()
            .zip(s.circuits)
            .map(|(q, c)| (q.to_string(), c))
            .collect(),
        excluded: excluded_topes()
            .iter()
            .zip(s.excluded)
            .map(|(t, absent)| (t.to_string(), absent))
            .collect(),
        vc_witnesses: s
            .vc_witnesses
            .iter()
            .map(|w| (w.support.to_string(), w.pattern))
            .collect(),
    }
}

fn lemma_parts(
    lemma: &Lemma6Certificate,
    kind: CertificateKind,
) -> (InstanceDoc, CountsDoc, Vec<SurvivorDoc>, ConclusionDoc) {
    let inst = &lemma.instance;
    let source = Chirotope::alternating(inst.n(), inst.source.rank()).expect("six-element source");
    let target = Chirotope::m2(inst.n()).expect("six-element target");
    let failure = verify_lemma6(lemma).err().map(|e| e.to_string());
    let instance = InstanceDoc {
        kind,
        source: ChirotopeDoc::new(Family::Alternating, &source),
        target: ChirotopeDoc::new(Family::M2, &target),
        intermediate_rank: inst.rank,
        base: inst.base.iter().copied().collect(),
        pool: inst.pool.clone(),
        choose: inst.choose,
        large: None,
    };
    let counts = CountsDoc {
        source_topes: inst.source.len(),
        target_topes: inst.base.len(),
        pool_size: inst.pool.len(),
        choose: inst.choose,
        combinations_checked: lemma.combinations_checked,
        survivor_count: lemma.survivors.len(),
        large_source_topes: None,
        large_target_topes: None,
    };
    let conclusion = ConclusionDoc {
        lemma_circuits: lemma.conclusion_circuits.map(|cs| {
            lemma_supports()
                .iter()
                .zip(cs)
                .map(|(q, c)| (q.to_string(), c))
                .collect()
        }),
        lemma_verified: failure.is_none(),
        lemma_failure: failure,
        circuit_a: None,
        circuit_b: None,
        contradiction: None,
        assumptions: Vec::new(),
        verdict: None,
    };
    (
        instance,
        counts,
        lemma.survivors.iter().map(survivor_doc).collect(),
        conclusion,
    )
}

impl CertificateDocument {
    pub fn from_lemma6(lemma: &Lemma6Certificate) -> Self {
        let (instance, counts, survivors, conclusion) = lemma_parts(lemma, CertificateKind::Lemma6);
        CertificateDocument {
            version: CERTIFICATE_VERSION,
            instance,
            counts,
            survivors,
            restrictions: Vec::new(),
            conclusion,
        }
    }

    pub fn from_contradiction(cert: &ContradictionCertificate) -> crate::Result<Self> {
        let (mut instance, mut counts, survivors, mut conclusion) =
            lemma_parts(&cert.lemma6, CertificateKind::Nonfactorizability);
        let source = Chirotope::alternating(8, 4)?;
        let target = Chirotope::m2(8)?;
        let source_topes = TopeSet::from_chirotope(&source)?;
        let target_topes = TopeSet::from_chirotope(&target)?;
        counts.large_source_topes = Some(source_topes.len());
        counts.large_target_topes = Some(target_topes.len());
        instance.large = Some(LargeInstanceDoc {
            source: ChirotopeDoc::new(Family::Alternating, &source),
            target: ChirotopeDoc::new(Family::M2, &target),
            source_topes: source_topes.iter().copied().collect(),
            target_topes: target_topes.iter().copied().collect(),
            premise: cert.premise_strong_map.clone(),
        });
        conclusion.circuit_a = Some(cert.restriction_a.lifted_circuit);
        conclusion.circuit_b = Some(cert.restriction_b.lifted_circuit);
        conclusion.contradiction = Some(cert.circuits_conflict);
        conclusion.assumptions = cert.assumptions.clone();
        conclusion.verdict = Some(cert.verdict.clone());
        Ok(CertificateDocument {
            version: CERTIFICATE_VERSION,
            instance,
            counts,
            survivors,
            restrictions: vec![cert.restriction_a.clone(), cert.restriction_b.clone()],
            conclusion,
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn serialize_certificate(doc: &CertificateDocument) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(doc).expect("certificate serializes");
    bytes.push(b'\n');
    bytes
}

pub fn parse_certificate(bytes: &[u8]) -> serde_json::Result<CertificateDocument> {
    serde_json::from_slice(bytes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn survivor_from_doc(doc: &SurvivorDoc) -> Result<SurvivorRecord, String> {
    let supports = lemma_supports();
    let mut witnesses = doc
        .vc_witnesses
        .iter()
        .map(|(k, p)| {
            k.parse::<ElementSet>()
                .map(|support| SupportWitness {
                    support,
                    pattern: *p,
                })
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    witnesses.sort_by_key(|w| w.support.elements());
    let circuits = supports.map(|q| doc.circuits.get(&q.to_string()).copied().flatten());
    let excluded =
        excluded_topes().map(|t| doc.excluded.get(&t.to_string()).copied().unwrap_or(false));
    Ok(SurvivorRecord {
        combination_rank: doc.combination_rank,
        topes: doc.topes.clone(),
        vc_witnesses: witnesses,
        excluded,
        circuits,
    })
}

fn chirotope_matches(doc: &ChirotopeDoc, n: usize, rank: usize) -> Result<Chirotope, String> {
    let parsed = doc.parse().map_err(|e| e.to_string())?;
    let expected = doc.family.chirotope(n, rank).map_err(|e| e.to_string())?;
    if doc.n != n || doc.rank != rank || parsed != expected {
        return Err(format!(
            "{:?} does not match the {:?} construction",
            doc, doc.family
        ));
    }
    Ok(parsed)
}

/// Re-checks every closed-form claim of a certificate. The survivor count
/// itself is the only fact that needs the search to confirm; everything else
/// (counts, memberships, witnesses, circuits, chirotope equalities, the
/// conflict and the verdict) is recomputed here.
pub fn validate_certificate(doc: &CertificateDocument) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.check(
        "version",
        doc.version == CERTIFICATE_VERSION,
        format!("version {}", doc.version),
    );

    let inst = &doc.instance;
    let small = (|| -> Result<(Chirotope, Chirotope), String> {
        let src = chirotope_matches(&inst.source, 6, 4)?;
        let tgt = chirotope_matches(&inst.target, 6, 2)?;
        Ok((src, tgt))
    })();
    let (source_chi, target_chi) = match small {
        Ok(pair) => {
            report.check(
                "chirotopes",
                true,
                "six-element chirotopes match their constructions",
            );
            pair
        }
        Err(e) => {
            report.check("chirotopes", false, e);
            return report;
        }
    };

    let search = (|| -> crate::Result<SearchInstance> {
        let source = TopeSet::from_chirotope(&source_chi)?;
        let target = TopeSet::from_chirotope(&target_chi)?;
        SearchInstance::new(&source, &target, inst.intermediate_rank)
    })();
    let search = match search {
        Ok(s) => s,
        Err(e) => {
            report.check("instance", false, e.to_string());
            return report;
        }
    };
    let base: Vec<SignedVector> = search.base.iter().copied().collect();
    report.check(
        "instance",
        base == inst.base && search.pool == inst.pool && search.choose == inst.choose,
        "base, pool and subset size agree with the chirotopes",
    );

    let c = &doc.counts;
    let counts_ok = phi(3, 5).ok() == Some(c.source_topes as u64)
        && phi(1, 5).ok() == Some(c.target_topes as u64)
        && c.source_topes == inst.base.len() + inst.pool.len()
        && c.target_topes == inst.base.len()
        && c.pool_size == inst.pool.len()
        && c.choose == inst.choose
        && c.combinations_checked == binomial(c.pool_size, c.choose)
        && c.survivor_count == doc.survivors.len();
    report.check(
        "counts",
        counts_ok,
        format!(
            "{} source topes, {} target topes, {} combinations, {} survivors",
            c.source_topes, c.target_topes, c.combinations_checked, c.survivor_count
        ),
    );

    let survivors = doc
        .survivors
        .iter()
        .map(survivor_from_doc)
        .collect::<Result<Vec<_>, _>>();
    let lemma_ok = match survivors {
        Err(e) => report.check("survivors", false, e),
        Ok(survivors) => {
            let mut ranks_ok = true;
            for s in &survivors {
                let picks: Vec<usize> = s
                    .topes
                    .iter()
                    .filter_map(|t| inst.pool.iter().position(|p| p == t))
                    .collect();
                ranks_ok &= picks.len() == inst.choose
                    && lex_rank(&picks, inst.pool.len()) == s.combination_rank;
            }
            ranks_ok &= survivors
                .windows(2)
                .all(|w| w[0].combination_rank < w[1].combination_rank);
            report.check(
                "survivor-ranks",
                ranks_ok,
                "each survivor's rank matches its pool subset; ranks strictly increase",
            );
            let conclusion_circuits = doc.conclusion.lemma_circuits.as_ref().and_then(|m| {
                let supports = lemma_supports();
                match (
                    m.get(&supports[0].to_string()),
                    m.get(&supports[1].to_string()),
                ) {
                    (Some(a), Some(b)) => Some([*a, *b]),
                    _ => None,
                }
            });
            let lemma = Lemma6Certificate {
                instance: search.clone(),
                combinations_checked: c.combinations_checked,
                survivors,
                conclusion_circuits,
            };
            match verify_lemma6(&lemma) {
                Ok(()) => report.check(
                    "survivors",
                    doc.conclusion.lemma_verified,
                    "every survivor passes the axioms, excludes both topes and carries both circuits",
                ),
                Err(e) => report.check("survivors", false, e.to_string()),
            }
        }
    };

    if inst.kind == CertificateKind::Lemma6 {
        return report;
    }

    let Some(large) = &inst.large else {
        report.check("large-instance", false, "missing eight-element instance");
        return report;
    };
    let premise_ok = (|| -> Result<bool, String> {
        let src = chirotope_matches(&large.source, 8, 4)?;
        let tgt = chirotope_matches(&large.target, 8, 2)?;
        let st = TopeSet::from_chirotope(&src).map_err(|e| e.to_string())?;
        let tt = TopeSet::from_chirotope(&tgt).map_err(|e| e.to_string())?;
        let listed_s =
            TopeSet::new(8, 4, large.source_topes.iter().copied()).map_err(|e| e.to_string())?;
        let listed_t =
            TopeSet::new(8, 2, large.target_topes.iter().copied()).map_err(|e| e.to_string())?;
        let verdict = is_strong_map_topes(&listed_s, &listed_t).map_err(|e| e.to_string())?;
        Ok(listed_s == st
            && listed_t == tt
            && Some(st.len()) == c.large_source_topes
            && Some(tt.len()) == c.large_target_topes
            && phi(3, 7).ok() == Some(st.len() as u64)
            && phi(1, 7).ok() == Some(tt.len() as u64)
            && verdict.holds
            && verdict.corank == 2
            && verdict == large.premise)
    })();
    let premise_ok = match premise_ok {
        Ok(ok) => report.check("premise", ok, "eight-element tope inclusion with corank 2"),
        Err(e) => report.check("premise", false, e),
    };

    let mut restrictions_ok = doc.restrictions.len() == 2;
    for (recorded, kept) in doc.restrictions.iter().zip(KEPT_SETS) {
        let fresh = check_restriction(&kept);
        let ok = match fresh {
            Ok(fresh) => {
                fresh == *recorded
                    && fresh.passes()
                    && fresh.lifted_circuit.restrict(&kept).ok() == Some(fresh.lemma_circuit)
                    && doc
                        .conclusion
                        .lemma_circuits
                        .as_ref()
                        .and_then(|m| m.get(&fresh.lemma_support.to_string()))
                        == Some(&fresh.lemma_circuit)
            }
            Err(_) => false,
        };
        restrictions_ok &= ok;
        report.check(
            &format!("restriction {}", kept.map(|e| e.to_string()).join(",")),
            ok,
            "restricted chirotopes equal the six-element pair up to sign; lifted circuit is consistent",
        );
    }

    let conclusion = &doc.conclusion;
    let conflict_ok = match (conclusion.circuit_a, conclusion.circuit_b) {
        (Some(a), Some(b)) => {
            let recomputed = a.support() == conflict_support()
                && b.support() == conflict_support()
                && circuits_conflict(&a, &b);
            let matches_restrictions = doc.restrictions.len() == 2
                && doc.restrictions[0].lifted_circuit == a
                && doc.restrictions[1].lifted_circuit == b;
            recomputed && matches_restrictions && conclusion.contradiction == Some(true)
        }
        _ => false,
    };
    report.check(
        "conflict",
        conflict_ok,
        "lifted circuits share support 1,2,5,6 but differ",
    );

    let names = [
        "deletion-circuits",
        "unique-circuit-per-support",
        "restriction-preserves-strong-maps",
        "factorization-through-rank-3",
        "uniform-intermediate",
    ];
    let assumptions_ok = conclusion.assumptions.len() == names.len()
        && conclusion.assumptions.iter().zip(names).all(|(a, name)| {
            a.name == name
                && match a.kind {
                    AssumptionKind::Checked => a.check_passed == Some(true),
                    AssumptionKind::Cited => a.check_passed.is_none(),
                }
        });
    report.check(
        "assumptions",
        assumptions_ok,
        "checked assumptions passed; cited ones recorded",
    );

    let all_ok = premise_ok && lemma_ok && restrictions_ok && conflict_ok && assumptions_ok;
    let verdict_ok = (conclusion.verdict == Some(Verdict::Nonfactorizable)) == all_ok;
    report.check(
        "verdict",
        verdict_ok && all_ok,
        format!("recorded verdict {:?}", conclusion.verdict),
    );
    report
}
