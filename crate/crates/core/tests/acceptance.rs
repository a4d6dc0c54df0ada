//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use omcert::axioms::{check_covector_axioms, circuit_on_support};
use omcert::certificate::{serialize_certificate, CertificateDocument};
use omcert::combinatorics::Combinations;
use omcert::lemma6::{build_search_instance, enumerate_survivors, Lemma6Certificate};
use omcert::matroid::{alternating_topes_direct, cocircuits_from_chirotope, covectors_from_topes};
use omcert::n8::{
    build_contradiction_certificate, check_restriction, circuits_conflict, Verdict, KEPT_SETS,
};
use omcert::strong_map::{is_strong_map_covectors, is_strong_map_topes};
use omcert::{Chirotope, ElementSet, SignedVector, TopeSet};

fn sv(s: &str) -> SignedVector {
    s.parse().unwrap()
}

fn topes(chi: &Chirotope) -> TopeSet {
    TopeSet::from_chirotope(chi).unwrap()
}

fn survivor_topes(lemma: &Lemma6Certificate) -> Vec<TopeSet> {
    lemma
        .survivors
        .iter()
        .map(|s| TopeSet::new(6, 3, s.topes.iter().copied()).unwrap())
        .collect()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let counts = [
        topes(&Chirotope::alternating(6, 4).unwrap()).len(),
        topes(&Chirotope::m2(6).unwrap()).len(),
        topes(&Chirotope::alternating(8, 4).unwrap()).len(),
        topes(&Chirotope::m2(8).unwrap()).len(),
    ];
    let elapsed = start.elapsed();
    outcome(
        counts == [26, 6, 64, 8] && elapsed < Duration::from_secs(1),
        format!("counts {counts:?} in {elapsed:.2?}"),
    )
}

fn criterion_2(lemma: &Lemma6Certificate, elapsed: Duration) -> Outcome {
    outcome(
        lemma.combinations_checked == 184_756
            && lemma.survivors.len() == 20
            && elapsed < Duration::from_secs(60),
        format!(
            "{} combinations, {} survivors, single-threaded in {elapsed:.2?}",
            lemma.combinations_checked,
            lemma.survivors.len()
        ),
    )
}

fn criterion_3(lemma: &Lemma6Certificate) -> Outcome {
    let excluded = [sv("+-+---"), sv("+----+")];
    let q1 = ElementSet::from_elements(&[1, 2, 3, 4]).unwrap();
    let q2 = ElementSet::from_elements(&[1, 2, 5, 6]).unwrap();
    let mut bad = Vec::new();
    for (i, (s, t)) in lemma
        .survivors
        .iter()
        .zip(survivor_topes(lemma))
        .enumerate()
    {
        let absent = excluded.iter().all(|x| !t.contains(x));
        let c1 = circuit_on_support(&t, q1).ok();
        let c2 = circuit_on_support(&t, q2).ok();
        let recorded = s.circuits == [c1, c2] && s.excluded == [true, true];
        if !(absent && c1 == Some(sv("+-+-00")) && c2 == Some(sv("+-00-+")) && recorded) {
            bad.push(i);
        }
    }
    outcome(
        bad.is_empty() && !lemma.survivors.is_empty(),
        format!(
            "{} survivors checked, failing {bad:?}",
            lemma.survivors.len()
        ),
    )
}

fn criterion_4(lemma: &Lemma6Certificate) -> Outcome {
    let a6 = topes(&Chirotope::alternating(6, 4).unwrap());
    let m6 = topes(&Chirotope::m2(6).unwrap());
    let p6 = is_strong_map_topes(&a6, &m6).unwrap();
    let p8 = is_strong_map_topes(
        &topes(&Chirotope::alternating(8, 4).unwrap()),
        &topes(&Chirotope::m2(8).unwrap()),
    )
    .unwrap();
    let la = covectors_from_topes(&a6).unwrap();
    let lm = covectors_from_topes(&m6).unwrap();
    let c6 = is_strong_map_covectors(&la, &lm).unwrap();
    let mut agree = c6.holds == p6.holds && c6.corank == p6.corank;
    let mut maps = 0;
    for s in survivor_topes(lemma) {
        let ls = covectors_from_topes(&s).unwrap();
        let pairs = [
            (
                is_strong_map_topes(&a6, &s).unwrap(),
                is_strong_map_covectors(&la, &ls).unwrap(),
            ),
            (
                is_strong_map_topes(&s, &m6).unwrap(),
                is_strong_map_covectors(&ls, &lm).unwrap(),
            ),
        ];
        for (by_topes, by_covectors) in pairs {
            maps += 1;
            agree &= by_topes.holds && by_covectors.holds && by_topes.corank == by_covectors.corank;
            agree &= by_topes.corank == 1;
        }
    }
    let premise = p6.holds && p8.holds && p6.corank == 2 && p8.corank == 2;
    outcome(
        premise && agree && maps == 40,
        format!(
            "n=6 holds={} corank={}, n=8 holds={} corank={}, {maps} sandwich maps agree={agree}",
            p6.holds, p6.corank, p8.holds, p8.corank
        ),
    )
}

fn criterion_5(doc: &CertificateDocument, verdict: &Verdict) -> Outcome {
    let a = check_restriction(&KEPT_SETS[0]).unwrap();
    let b = check_restriction(&KEPT_SETS[1]).unwrap();
    let lifted = a.lifted_circuit == sv("+-00-+00") && b.lifted_circuit == sv("+-00+-00");
    let conflict = circuits_conflict(&a.lifted_circuit, &b.lifted_circuit);
    let recorded = doc.conclusion.circuit_a == Some(a.lifted_circuit)
        && doc.conclusion.circuit_b == Some(b.lifted_circuit)
        && doc.conclusion.contradiction == Some(true)
        && doc.conclusion.verdict.as_ref() == Some(verdict);
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_omcert"))
        .args(["all", "--threads", "2", "--output"])
        .arg(dir.path().join("certificate.json"))
        .status()
        .expect("binary runs");
    outcome(
        a.passes()
            && b.passes()
            && lifted
            && conflict
            && recorded
            && *verdict == Verdict::Nonfactorizable
            && status.code() == Some(0),
        format!(
            "lifted {} / {}, conflict={conflict}, verdict {verdict:?}, exit {:?}",
            a.lifted_circuit,
            b.lifted_circuit,
            status.code()
        ),
    )
}

fn criterion_6(lemma: &Lemma6Certificate) -> Outcome {
    let start = Instant::now();
    let mut failures: Vec<String> = Vec::new();

    for (n, r) in [(4, 2), (6, 4), (8, 4)] {
        let direct = alternating_topes_direct(n, r).unwrap();
        if direct != topes(&Chirotope::alternating(n, r).unwrap()) {
            failures.push(format!("dual generation ({n},{r})"));
        }
    }

    let mut instances: Vec<Chirotope> = Vec::new();
    for n in 1..=6 {
        for r in 1..=n {
            instances.push(Chirotope::alternating(n, r).unwrap());
        }
        if n % 2 == 0 {
            instances.push(Chirotope::m2(n).unwrap());
        }
    }
    let mut tope_sets: Vec<TopeSet> = instances.iter().map(topes).collect();
    tope_sets.extend(survivor_topes(lemma));

    for (i, t) in tope_sets.iter().enumerate() {
        let l = covectors_from_topes(t).unwrap();
        if !check_covector_axioms(&l).passes() {
            failures.push(format!("covector axioms #{i}"));
        }
        if let Some(chi) = instances.get(i) {
            let cc: BTreeSet<_> = cocircuits_from_chirotope(chi)
                .unwrap()
                .into_iter()
                .collect();
            if cc != l.minimal_nonzero() {
                failures.push(format!("cocircuits #{i}"));
            }
        }
        let (n, r) = (t.n(), t.rank());
        if r < n {
            for q in Combinations::new(n, r + 1) {
                let elems: Vec<usize> = q.iter().map(|e| e + 1).collect();
                let c = circuit_on_support(t, ElementSet::from_elements(&elems).unwrap()).unwrap();
                if !t.iter().all(|x| c.perpendicular(x).unwrap()) {
                    failures.push(format!("circuit {c} of #{i}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(120),
        format!(
            "{} tope sets, failures {failures:?}, {elapsed:.2?}",
            tope_sets.len()
        ),
    )
}

fn criterion_7(one: &[u8]) -> Outcome {
    let threads = std::thread::available_parallelism()
        .map_or(4, |n| n.get())
        .max(4);
    let many = build_contradiction_certificate(threads).unwrap();
    let bytes = serialize_certificate(&CertificateDocument::from_contradiction(&many).unwrap());
    outcome(
        bytes == one,
        format!(
            "1 vs {threads} threads, {} vs {} bytes",
            one.len(),
            bytes.len()
        ),
    )
}

#[test]
fn acceptance() {
    let inst = build_search_instance().unwrap();
    let start = Instant::now();
    let lemma = enumerate_survivors(&inst, 1).unwrap();
    let search_time = start.elapsed();

    let single = build_contradiction_certificate(1).unwrap();
    let doc = CertificateDocument::from_contradiction(&single).unwrap();
    let single_bytes = serialize_certificate(&doc);

    let results = [
        ("tope counts", criterion_1()),
        ("six-element enumeration", criterion_2(&lemma, search_time)),
        ("forced circuits", criterion_3(&lemma)),
        ("strong-map premise", criterion_4(&lemma)),
        ("restriction reduction", criterion_5(&doc, &single.verdict)),
        ("property suites", criterion_6(&lemma)),
        ("determinism", criterion_7(&single_bytes)),
    ];
    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {} {name}: {}", i + 1, o.detail);
        all &= o.passed;
    }
    assert!(all, "acceptance criteria failed");
}
