//! Batch verification tool: load structure files, run the exact
//! classifiers, lifts and evolution checks, and emit human-readable or
//! JSON reports.
//!
//! Exit codes: 0 all expectations hold, 1 an expectation failed, 2 parse
//! error or unusable input, 3 frame inconsistency (d² ≠ 0, incompatible
//! relations).

mod format;

use clap::{Parser, Subcommand, ValueEnum};
use format::{family_of, load, Kind, LoadError, LoadedFile, StructureFile};
use hypoform::lifts::{
    cone_cy, evolution_residual, g2_lift, product_lift, sin_cone_g2, sin_cone_nk, EvolutionKind,
};
use hypoform::structures::{
    check_nearly_parallel_g2, check_su2_compatibility, classify_su2, classify_su3, CheckReport,
};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hypoform",
    version,
    about = "exact verification of SU(2)/SU(3)/G2 structure equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run compatibility and classification checks on a structure file.
    Check {
        file: PathBuf,
        /// Emit a stable JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Apply a lift construction and write the resulting structure file.
    Lift {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: LiftKind,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the residuals of an evolution system for a family file.
    EvolveVerify {
        file: PathBuf,
        #[arg(long, value_enum)]
        equations: Equations,
        #[arg(long)]
        json: bool,
    },
    /// List the built-in examples, verify them, or export one.
    Catalog {
        /// Restrict to one entry.
        #[arg(long)]
        name: Option<String>,
        /// Write the entry as a structure file (requires --name).
        #[arg(long)]
        export: Option<PathBuf>,
        /// Re-run every entry's expected classification
        /// (HYPOFORM_THREADS controls the worker count).
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum LiftKind {
    Product,
    Cone,
    SinConeNk,
    G2,
    SinConeG2,
}

#[derive(Copy, Clone, ValueEnum)]
enum Equations {
    Cs,
    NearlyHypo,
    Nhf,
    Hitchin,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            match e {
                LoadError::Parse(_) => ExitCode::from(2),
                LoadError::Inconsistent(_) => ExitCode::from(3),
            }
        }
    }
}

fn read_file(path: &Path) -> Result<LoadedFile, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Parse(format!("{}: {e}", path.display())))?;
    let doc: StructureFile =
        serde_json::from_str(&text).map_err(|e| LoadError::Parse(e.to_string()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "file".into());
    load(doc, &name)
}

fn report_json(report: &CheckReport) -> serde_json::Value {
    serde_json::json!({
        "title": report.title,
        "checks": report
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "condition": e.name,
                    "residual": e.residual.to_string(),
                    "expect_zero": e.expect_zero,
                    "verdict": e.passed(),
                    "vacuous": e.verdict.vacuous,
                })
            })
            .collect::<Vec<_>>(),
        "flags": report.flags,
    })
}

fn run_checks(loaded: &LoadedFile) -> Result<Vec<CheckReport>, LoadError> {
    let err = |e: hypoform::Error| LoadError::Parse(e.to_string());
    let mut reports = Vec::new();
    match &loaded.kind {
        Kind::Su2(s) => {
            reports.push(check_su2_compatibility(s).map_err(err)?);
            reports.push(classify_su2(s).map_err(err)?);
        }
        Kind::Su3(s) => {
            reports.push(classify_su3(s).map_err(err)?);
        }
        Kind::G2(s) => {
            reports.push(check_nearly_parallel_g2(s).map_err(err)?);
        }
    }
    Ok(reports)
}

fn collect_flags(reports: &[CheckReport]) -> BTreeMap<String, bool> {
    let mut flags = BTreeMap::new();
    for r in reports {
        flags.extend(r.flags.clone());
    }
    flags
}

fn expectation_failures(
    expect: &Option<BTreeMap<String, bool>>,
    flags: &BTreeMap<String, bool>,
) -> Vec<String> {
    let mut failures = Vec::new();
    if let Some(expect) = expect {
        for (name, expected) in expect {
            let got = flags.get(name).copied();
            if got != Some(*expected) {
                failures.push(format!(
                    "expected {name} = {expected}, got {}",
                    got.map_or("absent".to_string(), |b| b.to_string())
                ));
            }
        }
    }
    failures
}

fn run(cli: Cli) -> Result<ExitCode, LoadError> {
    match cli.command {
        Command::Check { file, json } => {
            let loaded = read_file(&file)?;
            let reports = run_checks(&loaded)?;
            let flags = collect_flags(&reports);
            let failures = expectation_failures(&loaded.expect, &flags);
            if json {
                let doc = serde_json::json!({
                    "file": file.display().to_string(),
                    "kind": loaded.kind.name(),
                    "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
                    "flags": flags,
                    "expectation_failures": failures,
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("{}: {} structure", file.display(), loaded.kind.name());
                for r in &reports {
                    print!("{r}");
                }
                for f in &failures {
                    println!("EXPECTATION FAILED: {f}");
                }
            }
            Ok(if failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Lift { file, kind, out } => {
            let loaded = read_file(&file)?;
            let err = |e: hypoform::Error| LoadError::Parse(e.to_string());
            let lifted: Kind = match (&loaded.kind, kind) {
                (Kind::Su2(s), LiftKind::Product) => Kind::Su3(product_lift(s).map_err(err)?),
                (Kind::Su2(s), LiftKind::Cone) => Kind::Su3(cone_cy(s).map_err(err)?),
                (Kind::Su2(s), LiftKind::SinConeNk) => Kind::Su3(sin_cone_nk(s).map_err(err)?),
                (Kind::Su3(s), LiftKind::G2) => Kind::G2(g2_lift(s).map_err(err)?),
                (Kind::Su3(s), LiftKind::SinConeG2) => Kind::G2(sin_cone_g2(s).map_err(err)?),
                _ => {
                    return Err(LoadError::Parse(format!(
                        "lift kind does not apply to a {} structure",
                        loaded.kind.name()
                    )))
                }
            };
            let frame = match &lifted {
                Kind::Su2(s) => s.frame().clone(),
                Kind::Su3(s) => s.frame().clone(),
                Kind::G2(s) => s.frame().clone(),
            };
            let doc = format::export(&frame, &lifted, None);
            let text = serde_json::to_string_pretty(&doc).unwrap();
            match out {
                Some(path) => std::fs::write(&path, text + "\n")
                    .map_err(|e| LoadError::Parse(format!("{}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::EvolveVerify {
            file,
            equations,
            json,
        } => {
            let loaded = read_file(&file)?;
            let fam = family_of(&loaded)?;
            let kind = match equations {
                Equations::Cs => EvolutionKind::ContiSalamon,
                Equations::NearlyHypo => EvolutionKind::NearlyHypo,
                Equations::Nhf => EvolutionKind::NearlyHalfFlat,
                Equations::Hitchin => EvolutionKind::Hitchin,
            };
            let report =
                evolution_residual(&fam, kind).map_err(|e| LoadError::Parse(e.to_string()))?;
            let compat = match &fam.forms {
                hypoform::lifts::FamilyForms::Su2(s) => {
                    Some(check_su2_compatibility(s).map_err(|e| LoadError::Parse(e.to_string()))?)
                }
                _ => None,
            };
            let ok = report.all_passed();
            if json {
                let doc = serde_json::json!({
                    "file": file.display().to_string(),
                    "report": report_json(&report),
                    "compatibility": compat.as_ref().map(report_json),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                print!("{report}");
                if let Some(c) = &compat {
                    if !c.all_passed() {
                        println!("warning: the family leaves the compatible locus");
                        print!("{c}");
                    }
                }
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Catalog {
            name,
            export,
            verify,
        } => {
            let entries =
                hypoform::catalog::entries().map_err(|e| LoadError::Inconsistent(e.to_string()))?;
            if let Some(path) = export {
                let name =
                    name.ok_or_else(|| LoadError::Parse("--export requires --name".into()))?;
                let entry = entries
                    .iter()
                    .find(|e| e.name == name)
                    .ok_or_else(|| LoadError::Parse(format!("unknown catalog entry `{name}`")))?;
                let (frame, kind, time) = entry_kind(entry);
                let doc = format::export(&frame, &kind, time.as_deref());
                std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap() + "\n")
                    .map_err(|e| LoadError::Parse(format!("{}: {e}", path.display())))?;
                println!("wrote {} as {}", entry.name, path.display());
                return Ok(ExitCode::SUCCESS);
            }
            if verify {
                return catalog_verify(name.as_deref());
            }
            let mut found = name.is_none();
            for e in &entries {
                if let Some(n) = &name {
                    if e.name != n {
                        continue;
                    }
                    found = true;
                }
                let expected: Vec<String> = e
                    .expected_flags
                    .iter()
                    .map(|(f, v)| format!("{f}={v}"))
                    .collect();
                println!("{} [{}] {}", e.name, e.kind(), e.summary);
                println!("    expected: {}", expected.join(", "));
            }
            if !found {
                return Err(LoadError::Parse(format!(
                    "unknown catalog entry `{}`",
                    name.unwrap()
                )));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn entry_kind(
    entry: &hypoform::catalog::CatalogEntry,
) -> (hypoform::exterior::DifferentialFrame, Kind, Option<String>) {
    use hypoform::catalog::EntryPayload;
    match &entry.payload {
        EntryPayload::Su2(s) => (s.frame().clone(), Kind::Su2(s.clone()), None),
        EntryPayload::Su3(s) => (s.frame().clone(), Kind::Su3(s.clone()), None),
        EntryPayload::G2(s) => (s.frame().clone(), Kind::G2(s.clone()), None),
        EntryPayload::Family(f) => {
            let kind = match &f.forms {
                hypoform::lifts::FamilyForms::Su2(s) => Kind::Su2(s.clone()),
                hypoform::lifts::FamilyForms::Su3(s) => Kind::Su3(s.clone()),
            };
            (f.frame().clone(), kind, Some(f.time.clone()))
        }
    }
}

/// Entries are rebuilt inside each worker (frames are not shareable across
/// threads); output order is deterministic regardless of the worker count.
fn catalog_verify(only: Option<&str>) -> Result<ExitCode, LoadError> {
    let names: Vec<&'static str> = hypoform::catalog::entries()
        .map_err(|e| LoadError::Inconsistent(e.to_string()))?
        .iter()
        .map(|e| e.name)
        .filter(|n| only.is_none_or(|o| *n == o))
        .collect();
    if names.is_empty() {
        return Err(LoadError::Parse("unknown catalog entry".into()));
    }
    let threads: usize = std::env::var("HYPOFORM_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1)
        .clamp(1, 16);
    let mut results: Vec<Option<(String, bool)>> = vec![None; names.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<Vec<usize>> = (0..threads)
            .map(|t| (0..names.len()).filter(|i| i % threads == t).collect())
            .collect();
        let mut handles = Vec::new();
        for chunk in chunks {
            let names = names.clone();
            handles.push(scope.spawn(move || {
                let mut out = Vec::new();
                let entries = hypoform::catalog::entries().expect("catalog builds");
                for i in chunk {
                    let entry = entries.iter().find(|e| e.name == names[i]).unwrap();
                    let rows = entry.verify().expect("classifiers run");
                    let ok = rows.iter().all(|(_, expected, got)| expected == got);
                    let detail = rows
                        .iter()
                        .map(|(f, e, g)| {
                            if e == g {
                                format!("{f}={g}")
                            } else {
                                format!("{f}={g} (expected {e})")
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(", ");
                    out.push((i, (detail, ok)));
                }
                out
            }));
        }
        for h in handles {
            for (i, r) in h.join().expect("worker") {
                results[i] = Some(r);
            }
        }
    });
    let mut all_ok = true;
    for (name, result) in names.iter().zip(results) {
        let (detail, ok) = result.expect("all entries processed");
        println!("[{}] {name}: {detail}", if ok { "ok" } else { "FAIL" });
        all_ok &= ok;
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
