//! The `ptorsion` command line. Every run prints one JSON document
//! `{"manifest": .., "result": ..}` on stdout (CSV for `corpus`) and a short
//! summary on stderr.
//!
//! Exit codes: 0 success, 1 search budget exhausted or verification
//! failed, 2 usage or precondition error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cartier::{self, BranchLocus};
use crate::cover::{CoverSpec, CoverSpecJson};
use crate::ff::{Fe, Field};
use crate::search::{self, ConstructionResult, SearchBudget, DEFAULT_DRAWS, DEFAULT_SEED, DEFAULT_TOWER_CAP};
use crate::zeta::{self, VerificationStatus, DEFAULT_GENUS_CAP};
use crate::{Error, Result};

pub const SEED_ENV: &str = "PTF_SEED";

#[derive(Parser, Debug)]
#[command(name = "ptorsion", version, about = "p-torsion invariants of hyperelliptic curves and (Z/2)^n covers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// RNG seed (default: $PTF_SEED, else 42)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Maximum number of random draws per search
    #[arg(long, global = true, default_value_t = DEFAULT_DRAWS)]
    pub budget: usize,
    /// Largest k of F_{p^k} used for draws and root finding
    #[arg(long = "tower-cap", global = true, default_value_t = DEFAULT_TOWER_CAP)]
    pub tower_cap: usize,
    /// Write the JSON document here instead of stdout (a directory for corpus)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CurveArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Comma-separated points: integers, "c0:c1:.." in the power basis, or "inf"
    #[arg(long)]
    pub branch: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GenusArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub g: usize,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Genus, p-rank, a-number and p-torsion label of a hyperelliptic curve
    Invariants(CurveArgs),
    /// Det_g(λ; t) for the given λ values
    Detg(CurveArgs),
    /// Roots t of Det_g(λ; t): the non-ordinary one-point extensions
    Roots(CurveArgs),
    /// Supersingular Legendre values
    Igusa {
        #[arg(long)]
        p: u64,
    },
    #[command(subcommand)]
    Construct(Construct),
    /// Grow a curve C into a (Z/2)^2 cover of genus 2g'-1+s with C as quotient
    Extend {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        s: usize,
    },
    #[command(subcommand)]
    Probe(Probe),
    /// Check L(X) = prod L(C_S) by point counting for a saved cover
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a list of commands, one JSON file each, with a CSV summary
    Corpus {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construct {
    A2(GenusArgs),
    A3(GenusArgs),
    A4(GenusArgs),
    MToN {
        #[command(flatten)]
        genus: GenusArgs,
        #[arg(long)]
        n: usize,
    },
    WithN(GenusArgs),
    WithQ(GenusArgs),
    /// Hyperelliptic curve with p-rank f (and a-number a if given)
    Prank {
        #[command(flatten)]
        genus: GenusArgs,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        a: Option<usize>,
    },
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Probe {
    /// Ordinary curves branched at {λ, μ, ∞}
    OrdinaryCompletion(CurveArgs),
    /// Genus-2 curves branched at 0, 1, ∞ and three supersingular values
    Rexact {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments that reproduce this run, seed included.
    pub argv: Vec<String>,
    pub params: Value,
    pub seed: u64,
    pub budget: SearchBudget,
    pub version: String,
    /// sha256 of the compact JSON of `result`.
    pub result_digest: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub manifest: RunManifest,
    pub result: Value,
}

/// Either a finished value or a search that ran out of budget.
struct Outcome {
    result: Value,
    ok: bool,
    summary: String,
}

fn field(p: u64, k: usize) -> Result<Field> {
    Field::extension(p, k)
}

fn finite_values(f: &Field, branch: &str) -> Result<Vec<Fe>> {
    let locus = BranchLocus::parse(f, branch)?;
    if locus.has_infinity() {
        return Err(Error::Precondition("λ values must be finite".into()));
    }
    Ok(locus.finite_points())
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))
}

fn construction(r: ConstructionResult) -> Result<Outcome> {
    let summary = match (&r.report, r.success) {
        (Some(rep), true) => format!(
            "{}: genus {}, p-rank {}, a-number {}, labels [{}], {} draws",
            r.construction,
            rep.genus,
            rep.p_rank,
            rep.a_number,
            rep.labels.join("; "),
            r.draws
        ),
        _ => format!("{}: failed after {} draws: {}", r.construction, r.draws, r.failure.clone().unwrap_or_default()),
    };
    Ok(Outcome {
        ok: r.success,
        result: to_value(&r)?,
        summary,
    })
}

fn execute(cmd: &Command, budget: &SearchBudget) -> Result<Outcome> {
    match cmd {
        Command::Invariants(c) => {
            let f = field(c.p, c.k)?;
            let locus = BranchLocus::parse(&f, &c.branch)?;
            let model = cartier::normalize_model(&locus)?;
            let inv = cartier::invariants(&model)?;
            let m = cartier::cartier_matrix(&model);
            let entries: Vec<Vec<String>> = m.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            let summary = format!("genus {}, p-rank {}, a-number {}, {}", inv.genus, inv.p_rank, inv.a_number, inv.label);
            let mut v = to_value(&inv)?;
            v["cartier_manin"] = json!(entries);
            v["model"] = to_value(&model.descriptor())?;
            Ok(Outcome { result: v, ok: true, summary })
        }
        Command::Detg(c) => {
            let f = field(c.p, c.k)?;
            let lambdas = finite_values(&f, &c.branch)?;
            let d = cartier::detg_marked(&f, &lambdas)?;
            let degree = d.degree();
            let summary = format!("Det_{}: degree {:?} in t", lambdas.len() / 2, degree);
            Ok(Outcome {
                result: json!({"g": lambdas.len() / 2, "degree": degree, "polynomial": d.to_json()}),
                ok: true,
                summary,
            })
        }
        Command::Roots(c) => {
            let f = field(c.p, c.k)?;
            let lambdas = finite_values(&f, &c.branch)?;
            let r = search::nonordinary_extensions(&f, &lambdas, budget)?;
            let summary = format!("{} distinct non-ordinary values, degenerate: {}", r.distinct_count, r.degenerate);
            Ok(Outcome { result: to_value(&r)?, ok: true, summary })
        }
        Command::Igusa { p } => {
            let r = search::igusa_count(*p)?;
            let summary = format!("{} supersingular Legendre values, squarefree: {}", r.count, r.squarefree);
            Ok(Outcome { result: to_value(&r)?, ok: true, summary })
        }
        Command::Construct(c) => construction(match c {
            Construct::A2(a) => search::construct_hyperelliptic_a2(a.p, a.g, budget)?,
            Construct::A3(a) => search::construct_hyperelliptic_a3(a.p, a.g, budget)?,
            Construct::A4(a) => search::construct_a4(a.p, a.g, budget)?,
            Construct::MToN { genus, n } => search::construct_m_to_n(genus.p, genus.g, *n, budget)?,
            Construct::WithN(a) => search::construct_with_n(a.p, a.g, budget)?,
            Construct::WithQ(a) => search::construct_with_q(a.p, a.g, budget)?,
            Construct::Prank { genus, f, a: Some(a) } => search::find_curve_with(genus.p, genus.g, *f, *a, budget)?,
            Construct::Prank { genus, f, a: None } => search::find_prank_f(genus.p, genus.g, *f, budget)?,
        }),
        Command::Extend { curve, s } => {
            let f = field(curve.p, curve.k)?;
            let locus = BranchLocus::parse(&f, &curve.branch)?;
            construction(search::extend_with_group_scheme(&locus, *s, budget)?)
        }
        Command::Probe(Probe::OrdinaryCompletion(c)) => {
            let f = field(c.p, c.k)?;
            let lambdas = finite_values(&f, &c.branch)?;
            let r = search::probe_ordinary_completion(&f, &lambdas, budget)?;
            let summary = match &r.mu {
                Some(mu) => format!("experiment: ordinary at mu = {mu} after {} tries", r.tried),
                None => format!("experiment: none found within budget ({} tries)", r.tried),
            };
            Ok(Outcome { result: to_value(&r)?, ok: true, summary })
        }
        Command::Probe(Probe::Rexact { p }) => {
            let r = search::probe_rexact(*p, budget)?;
            let summary = format!("experiment: {} triples, {} ordinary", r.tested, r.ordinary_hits);
            Ok(Outcome { result: to_value(&r)?, ok: true, summary })
        }
        Command::Verify { input } => {
            let spec = load_cover(input)?;
            let r = zeta::verify_decomposition(&spec, DEFAULT_GENUS_CAP)?;
            let summary = format!("verification {:?}: p-rank zeta {:?}, sum {:?}", r.status, r.p_rank_zeta, r.p_rank_sum);
            Ok(Outcome {
                ok: r.status != VerificationStatus::Fail,
                result: to_value(&r)?,
                summary,
            })
        }
        Command::Corpus { .. } => Err(Error::Internal("corpus is dispatched separately".into())),
    }
}

/// A cover from a saved document, construction result or bare cover spec.
pub fn load_cover(path: &Path) -> Result<CoverSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let v = v.get("result").cloned().unwrap_or(v);
    let spec = v.get("spec").cloned().unwrap_or(v);
    if spec.is_null() {
        return Err(Error::Precondition("input holds no cover (failed construction?)".into()));
    }
    let j: CoverSpecJson = serde_json::from_value(spec).map_err(|e| Error::Parse(e.to_string()))?;
    CoverSpec::from_json(&j)
}

fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted(_) => 1,
        _ => 2,
    }
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Invariants(_) => "invariants".into(),
        Command::Detg(_) => "detg".into(),
        Command::Roots(_) => "roots".into(),
        Command::Igusa { .. } => "igusa".into(),
        Command::Construct(c) => {
            let sub = match c {
                Construct::A2(_) => "a2",
                Construct::A3(_) => "a3",
                Construct::A4(_) => "a4",
                Construct::MToN { .. } => "m-to-n",
                Construct::WithN(_) => "with-n",
                Construct::WithQ(_) => "with-q",
                Construct::Prank { .. } => "prank",
            };
            format!("construct {sub}")
        }
        Command::Extend { .. } => "extend".into(),
        Command::Probe(Probe::OrdinaryCompletion(_)) => "probe ordinary-completion".into(),
        Command::Probe(Probe::Rexact { .. }) => "probe rexact".into(),
        Command::Verify { .. } => "verify".into(),
        Command::Corpus { .. } => "corpus".into(),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn default_seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Runs one command line (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    let started = Instant::now();
    let seed = cli.seed.unwrap_or_else(default_seed);
    let budget = SearchBudget::new(cli.budget, seed).with_tower_cap(cli.tower_cap);
    if let Command::Corpus { input } = &cli.command {
        return run_corpus(input, cli.out.as_deref(), stdout, stderr);
    }
    let name = command_name(&cli.command);
    let outcome = match execute(&cli.command, &budget) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let mut replay: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    if cli.seed.is_none() {
        replay.push("--seed".into());
        replay.push(seed.to_string());
    }
    let params = serde_json::to_value(&cli.command).unwrap_or(Value::Null);
    let doc = Document {
        manifest: RunManifest {
            command: name.clone(),
            argv: replay,
            params,
            seed,
            budget,
            version: env!("CARGO_PKG_VERSION").to_string(),
            result_digest: digest(&outcome.result),
        },
        result: outcome.result,
    };
    let text = serde_json::to_string_pretty(&doc).expect("serializable document") + "\n";
    let written = match &cli.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return 2;
    }
    let _ = writeln!(stderr, "{name}: {}", outcome.summary);
    let _ = writeln!(stderr, "wall-clock: {:.3}s", started.elapsed().as_secs_f64());
    if outcome.ok {
        0
    } else {
        1
    }
}

/// One corpus line: a name and the arguments after the program name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub args: Vec<String>,
}

fn run_corpus(input: &Path, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let entries: Vec<CorpusEntry> = match fs::read_to_string(input)
        .map_err(|e| e.to_string())
        .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
    {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: corpus {}: {e}", input.display());
            return 2;
        }
    };
    let Some(dir) = out else {
        let _ = writeln!(stderr, "error: corpus needs --out <directory>");
        return 2;
    };
    if let Err(e) = fs::create_dir_all(dir) {
        let _ = writeln!(stderr, "error: {}: {e}", dir.display());
        return 2;
    }
    let rows: Vec<(String, i32, String)> = entries
        .par_iter()
        .map(|entry| {
            let mut buf = Vec::new();
            let mut err = Vec::new();
            let argv = std::iter::once("ptorsion".to_string()).chain(entry.args.iter().cloned());
            let code = run(argv, &mut buf, &mut err);
            let digest = serde_json::from_slice::<Document>(&buf)
                .map(|d| d.manifest.result_digest)
                .unwrap_or_default();
            let path = dir.join(format!("{}.json", entry.name));
            let code = match write_atomic(&path, &buf) {
                Ok(()) => code,
                Err(_) => 2,
            };
            (entry.name.clone(), code, digest)
        })
        .collect();
    let mut csv = String::from("name,exit_code,result_digest\n");
    for (name, code, digest) in &rows {
        csv.push_str(&format!("{name},{code},{digest}\n"));
    }
    if stdout.write_all(csv.as_bytes()).is_err() || write_atomic(&dir.join("summary.csv"), csv.as_bytes()).is_err() {
        return 2;
    }
    let failed = rows.iter().filter(|r| r.1 != 0).count();
    let _ = writeln!(stderr, "corpus: {} entries, {failed} nonzero exits", rows.len());
    if rows.iter().any(|r| r.1 == 2) {
        2
    } else if failed > 0 {
        1
    } else {
        0
    }
}
