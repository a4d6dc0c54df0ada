//! Command-line front end.
//!
//! Exit codes: 0 when every check held, 1 when a mathematical check failed or
//! output could not be written, 2 for usage errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::axioms::{check_covector_axioms, check_uniform_tope_axioms};
use crate::certificate::{
    parse_certificate, serialize_certificate, validate_certificate, CertificateDocument, Family,
    CERTIFICATE_VERSION,
};
use crate::chirotope::Chirotope;
use crate::lemma6::{build_search_instance, enumerate_survivors, verify_lemma6};
use crate::matroid::{
    alternating_topes_direct, covectors_from_topes, TopeSet, MAX_ENUMERATION_GROUND,
};
use crate::n8::{build_contradiction_certificate, Verdict};
use crate::strong_map::{is_strong_map_covectors, is_strong_map_topes};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// List the canonical topes of one instance
    Topes,
    /// Check the covector and uniform-tope axioms on one instance
    Axioms,
    /// Check the strong map alternating(n, rank) -> m2(n)
    Strongmap,
    /// Run the six-element exhaustive search
    Lemma6,
    /// Build the eight-element nonfactorizability certificate
    VerifyN8,
    /// Run every stage and emit the full certificate
    All,
    /// Re-validate a certificate file without repeating the search
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Alternating,
    M2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "omcert",
    version,
    about = "Oriented-matroid strong-map certificates"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Ground set size
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Rank (defaults to 4 for alternating, fixed at 2 for m2)
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, value_enum, default_value_t = FamilyArg::Alternating)]
    pub family: FamilyArg,
    /// Worker threads for the search; output does not depend on it
    #[arg(long, default_value_t = default_threads(), value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
    /// Write to this file instead of standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Certificate to validate
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

fn default_threads() -> u16 {
    std::thread::available_parallelism()
        .map(|n| n.get().min(u16::MAX as usize) as u16)
        .unwrap_or(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub rank: usize,
    pub family: Family,
    pub threads: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub input_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        let family = match cli.family {
            FamilyArg::Alternating => Family::Alternating,
            FamilyArg::M2 => Family::M2,
        };
        let rank = match (family, cli.rank) {
            (Family::M2, None | Some(2)) => 2,
            (Family::M2, Some(r)) => return Err(format!("m2 has rank 2, not {r}")),
            (Family::Alternating, r) => r.unwrap_or(4),
        };
        if family == Family::M2 && (cli.n < 2 || !cli.n.is_multiple_of(2)) {
            return Err(format!("m2 needs an even n >= 2, got {}", cli.n));
        }
        if cli.n == 0 || cli.n > 16 {
            return Err(format!("n must lie in 1..=16, got {}", cli.n));
        }
        if rank == 0 || rank > cli.n {
            return Err(format!("rank must lie in 1..={}, got {rank}", cli.n));
        }
        if cli.command == Command::Validate && cli.input.is_none() {
            return Err("validate needs --input".into());
        }
        Ok(RunConfig {
            command: cli.command,
            n: cli.n,
            rank,
            family,
            threads: cli.threads as usize,
            output_path: cli.output,
            format: cli.format,
            input_path: cli.input,
        })
    }
}

/// What a stage produced: the bytes to emit and whether its checks held.
struct Outcome {
    body: Vec<u8>,
    verified: bool,
}

fn json_body(value: &impl Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable report");
    bytes.push(b'\n');
    bytes
}

fn instance_topes(cfg: &RunConfig) -> crate::Result<(Chirotope, TopeSet)> {
    let chi = cfg.family.chirotope(cfg.n, cfg.rank)?;
    let topes = TopeSet::from_chirotope(&chi)?;
    Ok((chi, topes))
}

fn run_topes(cfg: &RunConfig) -> crate::Result<Outcome> {
    let (chi, topes) = instance_topes(cfg)?;
    let body = match cfg.format {
        Format::Text => topes
            .iter()
            .map(|t| format!("{t}\n"))
            .collect::<String>()
            .into_bytes(),
        Format::Json => json_body(&json!({
            "version": CERTIFICATE_VERSION,
            "instance": {"family": cfg.family, "n": cfg.n, "rank": cfg.rank, "chirotope": chi.to_string()},
            "counts": {"topes": topes.len()},
            "topes": topes.iter().collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome {
        body,
        verified: true,
    })
}

fn run_axioms(cfg: &RunConfig) -> crate::Result<Outcome> {
    let (_, topes) = instance_topes(cfg)?;
    let uniform = check_uniform_tope_axioms(&topes);
    let covector = if cfg.n <= MAX_ENUMERATION_GROUND {
        Some(check_covector_axioms(&covectors_from_topes(&topes)?))
    } else {
        None
    };
    let dual = match cfg.family {
        Family::Alternating => Some(alternating_topes_direct(cfg.n, cfg.rank)? == topes),
        Family::M2 => None,
    };
    let verified =
        uniform.passes() && covector.as_ref().is_none_or(|r| r.passes()) && dual.unwrap_or(true);
    let body = match cfg.format {
        Format::Json => json_body(&json!({
            "version": CERTIFICATE_VERSION,
            "instance": {"family": cfg.family, "n": cfg.n, "rank": cfg.rank},
            "uniform_tope_axioms": uniform,
            "covector_axioms": covector,
            "direct_tope_rule_agrees": dual,
            "verified": verified,
        })),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "topes: {} (expected {})",
                uniform.count, uniform.expected_count
            );
            let _ = writeln!(s, "uniform tope axioms: {}", pass(uniform.passes()));
            if let Some(r) = &covector {
                let _ = writeln!(s, "covector axioms: {}", pass(r.passes()));
            }
            if let Some(d) = dual {
                let _ = writeln!(s, "sign-change rule agrees: {}", pass(d));
            }
            s.into_bytes()
        }
    };
    Ok(Outcome { body, verified })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn run_strongmap(cfg: &RunConfig) -> crate::Result<Outcome> {
    let rank = if cfg.family == Family::Alternating {
        cfg.rank
    } else {
        4
    };
    if !cfg.n.is_multiple_of(2) || rank > cfg.n {
        return Err(crate::OmError::OddGroundSet(cfg.n));
    }
    let source = TopeSet::from_chirotope(&Chirotope::alternating(cfg.n, rank)?)?;
    let target = TopeSet::from_chirotope(&Chirotope::m2(cfg.n)?)?;
    let by_topes = is_strong_map_topes(&source, &target)?;
    let by_covectors = if cfg.n <= MAX_ENUMERATION_GROUND {
        Some(is_strong_map_covectors(
            &covectors_from_topes(&source)?,
            &covectors_from_topes(&target)?,
        )?)
    } else {
        None
    };
    let agree = by_covectors
        .as_ref()
        .is_none_or(|v| v.holds == by_topes.holds);
    let verified = by_topes.holds && agree;
    let body = match cfg.format {
        Format::Json => json_body(&json!({
            "version": CERTIFICATE_VERSION,
            "instance": {"source": format!("alternating({}, {rank})", cfg.n), "target": format!("m2({})", cfg.n)},
            "tope_inclusion": by_topes,
            "covector_containment": by_covectors,
            "verified": verified,
        })),
        Format::Text => {
            let mut s = format!(
                "alternating({n}, {rank}) -> m2({n}): {} (corank {})\n",
                pass(by_topes.holds),
                by_topes.corank,
                n = cfg.n
            );
            if let Some(v) = &by_covectors {
                let _ = writeln!(
                    s,
                    "covector containment agrees: {}",
                    pass(v.holds == by_topes.holds)
                );
            }
            s.into_bytes()
        }
    };
    Ok(Outcome { body, verified })
}

fn certificate_text(doc: &CertificateDocument) -> String {
    let mut s = String::new();
    let c = &doc.counts;
    let _ = writeln!(s, "certificate version {}", doc.version);
    let _ = writeln!(
        s,
        "source topes: {}, target topes: {}",
        c.source_topes, c.target_topes
    );
    let _ = writeln!(s, "combinations checked: {}", c.combinations_checked);
    let _ = writeln!(s, "survivors: {}", c.survivor_count);
    if let Some(circuits) = &doc.conclusion.lemma_circuits {
        for (q, circuit) in circuits {
            let _ = writeln!(s, "forced circuit on {q}: {circuit}");
        }
    }
    let _ = writeln!(s, "lemma verified: {}", pass(doc.conclusion.lemma_verified));
    for r in &doc.restrictions {
        let kept: Vec<String> = r.kept.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(
            s,
            "restriction to {}: {} -> lifted circuit {}",
            kept.join(","),
            pass(r.passes()),
            r.lifted_circuit
        );
    }
    if let Some(conflict) = doc.conclusion.contradiction {
        let _ = writeln!(s, "circuit conflict: {conflict}");
    }
    if let Some(verdict) = &doc.conclusion.verdict {
        let _ = match verdict {
            Verdict::Nonfactorizable => writeln!(s, "verdict: nonfactorizable"),
            Verdict::Invalid(stage) => writeln!(s, "verdict: invalid at stage {stage}"),
        };
    }
    s
}

fn render(doc: &CertificateDocument, format: Format) -> Vec<u8> {
    match format {
        Format::Json => serialize_certificate(doc),
        Format::Text => certificate_text(doc).into_bytes(),
    }
}

fn run_lemma6(cfg: &RunConfig) -> crate::Result<Outcome> {
    let cert = enumerate_survivors(&build_search_instance()?, cfg.threads)?;
    let verified = verify_lemma6(&cert).is_ok();
    Ok(Outcome {
        body: render(&CertificateDocument::from_lemma6(&cert), cfg.format),
        verified,
    })
}

fn run_verify_n8(cfg: &RunConfig) -> crate::Result<Outcome> {
    let cert = build_contradiction_certificate(cfg.threads)?;
    let verified = cert.verdict == Verdict::Nonfactorizable;
    Ok(Outcome {
        body: render(&CertificateDocument::from_contradiction(&cert)?, cfg.format),
        verified,
    })
}

/// Sweeps the instance-level checks before building the certificate.
fn run_all(cfg: &RunConfig) -> crate::Result<Outcome> {
    let mut stages_ok = true;
    for (family, n, rank) in [
        (Family::Alternating, 6, 4),
        (Family::M2, 6, 2),
        (Family::Alternating, 8, 4),
        (Family::M2, 8, 2),
    ] {
        let sub = RunConfig {
            family,
            n,
            rank,
            ..cfg.clone()
        };
        if n <= 6 {
            stages_ok &= run_axioms(&sub)?.verified;
        }
        let (_, topes) = instance_topes(&sub)?;
        stages_ok &= check_uniform_tope_axioms(&topes).passes();
    }
    for n in [6, 8] {
        let sub = RunConfig {
            family: Family::Alternating,
            n,
            rank: 4,
            ..cfg.clone()
        };
        stages_ok &= run_strongmap(&sub)?.verified;
    }
    let certificate = run_verify_n8(cfg)?;
    Ok(Outcome {
        body: certificate.body,
        verified: stages_ok && certificate.verified,
    })
}

fn run_validate(cfg: &RunConfig) -> Result<Outcome, String> {
    let path = cfg.input_path.as_ref().ok_or("validate needs --input")?;
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = parse_certificate(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    let report = validate_certificate(&doc);
    let body = match cfg.format {
        Format::Json => json_body(&json!({"valid": report.passes(), "checks": report.checks})),
        Format::Text => report
            .checks
            .iter()
            .map(|c| format!("{} {}: {}\n", pass(c.passed), c.name, c.detail))
            .collect::<String>()
            .into_bytes(),
    };
    Ok(Outcome {
        body,
        verified: report.passes(),
    })
}

/// Executes one command, writing the result to the configured output (or
/// `stdout`) and diagnostics to `stderr`. Returns the process exit code.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = match cfg.command {
        Command::Topes => run_topes(cfg),
        Command::Axioms => run_axioms(cfg),
        Command::Strongmap => run_strongmap(cfg),
        Command::Lemma6 => run_lemma6(cfg),
        Command::VerifyN8 => run_verify_n8(cfg),
        Command::All => run_all(cfg),
        Command::Validate => match run_validate(cfg) {
            Ok(outcome) => Ok(outcome),
            Err(e) => {
                let _ = writeln!(stderr, "omcert: {e}");
                return EXIT_FAILED;
            }
        },
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e @ crate::OmError::Inconsistent(_)) => {
            let _ = writeln!(stderr, "omcert: {e}");
            return EXIT_FAILED;
        }
        Err(e) => {
            let _ = writeln!(stderr, "omcert: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cfg.output_path {
        Some(path) => {
            std::fs::write(path, &outcome.body).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => stdout.write_all(&outcome.body).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "omcert: cannot write output: {e}");
        return EXIT_FAILED;
    }
    if outcome.verified {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "omcert: verification failed");
        EXIT_FAILED
    }
}
