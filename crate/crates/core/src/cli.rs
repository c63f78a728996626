//! The `novikov` command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::chain::ChainComplex;
use crate::characters::Character;
use crate::fibring::catalog::{grid_rays, sample_rays};
use crate::fibring::{character_scan, fibred_check, Combined, CutoffPolicy, FibringError};
use crate::groups::abelian::free_abelianization;
use crate::groups::parse::parse_relators;
use crate::groups::{GroupContext, GroupError};
use crate::suites::{self, SuiteResult};
use crate::value::{parse_rational, Rational, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Failure = 1,
    Parse = 2,
    Engine = 3,
    NotFibred = 10,
    Inconclusive = 11,
}

impl Exit {
    pub fn of_verdict(v: Combined) -> Exit {
        match v {
            Combined::Fibred => Exit::Ok,
            Combined::NotFibredByRank => Exit::NotFibred,
            Combined::Inconclusive => Exit::Inconclusive,
        }
    }

    fn of_group_error(e: &GroupError) -> Exit {
        match e {
            GroupError::Syntax { .. } | GroupError::UndeclaredGenerator { .. } | GroupError::MalformedGraph(_) => Exit::Parse,
            _ => Exit::Engine,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "novikov", version, about = "Certify fibred characters of finitely presented groups")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Novikov cutoff (a rational); disables adaptive retries.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub cutoff: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Timing and progress on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Free abelianization of a presentation.
    Abelianize { presentation: PathBuf },
    /// Two-sided certificate for one character.
    Certify {
        presentation: PathBuf,
        /// Character file (JSON).
        #[arg(long, conflicts_with = "phi")]
        character: Option<PathBuf>,
        /// Comma-separated rational values on the free abelianization basis.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
    },
    /// Fibring verdicts on sampled primitive rays, or on a grid.
    Scan {
        presentation: PathBuf,
        /// Every primitive ray with coordinates in [-N, N] instead of samples.
        #[arg(long, value_name = "N", conflicts_with = "samples")]
        grid: Option<u32>,
    },
    /// Property suites at small scale.
    Selftest {
        /// Run the structure-function suite on sections moved out of
        /// their cosets; the suite must then fail.
        #[arg(long)]
        corrupt_fixture: bool,
    },
}

/// A finished command: report text and exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: String,
    pub exit: Exit,
}

#[derive(Debug)]
struct Failure {
    exit: Exit,
    message: String,
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure { exit: Exit::of_group_error(&e), message: e.to_string() }
    }
}

impl From<FibringError> for Failure {
    fn from(e: FibringError) -> Self {
        let exit = match &e {
            FibringError::Group(g) => Exit::of_group_error(g),
            FibringError::InvalidCutoff(_) | FibringError::NotRational(_) => Exit::Parse,
            _ => Exit::Engine,
        };
        Failure { exit, message: e.to_string() }
    }
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure { exit: Exit::Parse, message: message.into() }
}

struct Input {
    ctx: GroupContext,
    digest: String,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<(String, String), Failure> {
    let bytes = std::fs::read(path).map_err(|e| parse_failure(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|_| parse_failure(format!("{}: not UTF-8", path.display())))?;
    let d = digest(text.as_bytes());
    Ok((text, d))
}

fn load(path: &Path) -> Result<Input, Failure> {
    let (text, digest) = read(path)?;
    let ctx = GroupContext::parse(&text).map_err(|e| {
        let exit = Exit::of_group_error(&e);
        Failure { exit, message: format!("{}: {e}", path.display()) }
    })?;
    Ok(Input { ctx, digest })
}

fn cutoff_policy(common: &Common) -> Result<CutoffPolicy, Failure> {
    match &common.cutoff {
        None => Ok(CutoffPolicy::default()),
        Some(s) => {
            let q = parse_rational(s.trim()).map_err(|e| parse_failure(format!("--cutoff: {e}")))?;
            Ok(CutoffPolicy::fixed(Value::rational(q)))
        }
    }
}

fn parse_phi(s: &str) -> Result<Character, Failure> {
    let coeffs: Vec<Rational> = s
        .split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| parse_failure(format!("--phi: {e}"))))
        .collect::<Result<_, _>>()?;
    Ok(Character::rational(&coeffs))
}

fn header(command: &str, common: &Common, inputs: &[(&Path, &str)]) -> serde_json::Value {
    let inputs: Vec<serde_json::Value> =
        inputs.iter().map(|(p, d)| json!({ "path": p.display().to_string(), "sha256": d })).collect();
    json!({
        "schema": 1,
        "tool": "novikov",
        "version": VERSION,
        "command": command,
        "inputs": inputs,
        "cutoff": common.cutoff,
        "seed": common.seed,
    })
}

fn merge(mut head: serde_json::Value, body: serde_json::Value) -> serde_json::Value {
    if let (Some(h), serde_json::Value::Object(b)) = (head.as_object_mut(), body) {
        h.extend(b);
    }
    head
}

fn abelianize(common: &Common, path: &Path) -> Result<Outcome, Failure> {
    let (text, digest) = read(path)?;
    let (names, relators) = parse_relators(&text).map_err(|e| Failure {
        exit: Exit::of_group_error(&e),
        message: format!("{}: {e}", path.display()),
    })?;
    let ab = free_abelianization(names.len(), &relators);
    let report = merge(
        header("abelianize", common, &[(path, &digest)]),
        json!({
            "generators": names,
            "rank": ab.rank,
            "torsion": ab.torsion,
            "projection": ab.projection,
        }),
    );
    let text = format!(
        "rank {}\ntorsion {:?}\nprojection {}\n",
        ab.rank,
        ab.torsion,
        names.iter().zip(&ab.projection).map(|(g, row)| format!("{g}↦{row:?}")).collect::<Vec<_>>().join(" ")
    );
    Ok(Outcome { report: render(common.format, &report, &text), exit: Exit::Ok })
}

fn certify(common: &Common, path: &Path, character: Option<&Path>, phi: Option<&str>) -> Result<Outcome, Failure> {
    let input = load(path)?;
    let mut inputs = vec![(path, input.digest.clone())];
    let chi = match (character, phi) {
        (Some(file), _) => {
            let (text, d) = read(file)?;
            inputs.push((file, d));
            Character::from_json(&text).map_err(|e| parse_failure(format!("{}: {e}", file.display())))?
        }
        (None, Some(s)) => parse_phi(s)?,
        (None, None) => return Err(parse_failure("certify needs --character or --phi")),
    };
    let policy = cutoff_policy(common)?;
    let cc = ChainComplex::build(&input.ctx).map_err(|e| Failure { exit: Exit::Engine, message: e.to_string() })?;
    let verdict = fibred_check(&cc, &chi, &policy)?;
    let refs: Vec<(&Path, &str)> = inputs.iter().map(|(p, d)| (*p, d.as_str())).collect();
    let report = merge(header("certify", common, &refs), verdict.to_json());
    let mut text = format!("character {}\n", verdict.character);
    for (side, o) in [("+", &verdict.plus), ("-", &verdict.minus)] {
        let _ = write!(text, "{side}φ {}", o.status().name());
        if let Some(c) = o.certificate() {
            let _ = write!(text, " at cutoff {} margin {}", c.cutoff, c.margin);
        }
        text.push('\n');
    }
    let _ = writeln!(text, "verdict {}", verdict.verdict.name());
    Ok(Outcome { report: render(common.format, &report, &text), exit: Exit::of_verdict(verdict.verdict) })
}

fn scan(common: &Common, path: &Path, grid: Option<u32>) -> Result<Outcome, Failure> {
    let input = load(path)?;
    let policy = cutoff_policy(common)?;
    let cc = ChainComplex::build(&input.ctx).map_err(|e| Failure { exit: Exit::Engine, message: e.to_string() })?;
    let rank = input.ctx.abelianization().rank;
    let samples = match grid {
        Some(n) => grid_rays(rank, n),
        None => sample_rays(rank, common.samples.unwrap_or(16), common.seed),
    };
    if common.verbose > 0 {
        eprintln!("scanning {} rays", samples.len());
    }
    let result = character_scan(&cc, &samples, &policy);
    let report = merge(header("scan", common, &[(path, &input.digest)]), result.to_json());
    let mut text = String::new();
    for e in &result.entries {
        match &e.result {
            Ok(v) => {
                let _ = writeln!(text, "{:>3} {:<24} {}", e.index, v.character.to_string(), v.verdict.name());
            }
            Err(err) => {
                let _ = writeln!(text, "{:>3} error: {err}", e.index);
            }
        }
    }
    let _ = writeln!(
        text,
        "fibred {} / not fibred by rank {} / inconclusive {}",
        result.count(Combined::Fibred),
        result.count(Combined::NotFibredByRank),
        result.count(Combined::Inconclusive)
    );
    Ok(Outcome { report: render(common.format, &report, &text), exit: Exit::Ok })
}

/// Suite sizes used by `selftest`.
pub fn selftest_suites(seed: u64, cutoff: Option<&Value>, corrupt: bool) -> Vec<SuiteResult> {
    let max_q = crate::groups::quotient::max_quotient_order().min(12);
    vec![
        suites::structure_functions(20, max_q, seed, corrupt),
        suites::s_isomorphism(50, seed),
        suites::valuation_laws(100, seed),
        suites::inequalities(60, max_q.min(8), seed),
        suites::restricted_qvalues(20, max_q, seed),
        suites::fox_identity(100, seed),
        suites::novikov_inversion(30, seed, 20, cutoff),
        suites::sum_inversion(10, 5, seed),
        suites::certificates(4, seed, cutoff),
    ]
}

fn selftest(common: &Common, corrupt: bool) -> Result<Outcome, Failure> {
    let cutoff = match &common.cutoff {
        None => None,
        Some(s) => Some(Value::rational(parse_rational(s.trim()).map_err(|e| parse_failure(format!("--cutoff: {e}")))?)),
    };
    let results = selftest_suites(common.seed, cutoff.as_ref(), corrupt);
    let ok = results.iter().all(SuiteResult::ok);
    let report = merge(
        header("selftest", common, &[]),
        json!({ "pass": ok, "suites": results.iter().map(SuiteResult::to_json).collect::<Vec<_>>() }),
    );
    let mut text = String::new();
    for r in &results {
        let _ = write!(text, "{:<36} {:>4} passed {:>3} failed", r.name, r.passed, r.failed);
        if r.inconclusive > 0 {
            let _ = write!(text, " {:>3} inconclusive", r.inconclusive);
        }
        text.push('\n');
        if let Some(c) = &r.counterexample {
            let _ = writeln!(text, "    counterexample: {c}");
        }
    }
    let _ = writeln!(text, "{}", if ok { "all suites pass" } else { "FAILED" });
    Ok(Outcome { report: render(common.format, &report, &text), exit: if ok { Exit::Ok } else { Exit::Failure } })
}

fn render(format: Format, report: &serde_json::Value, text: &str) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
        Format::Text => text.to_string(),
    }
}

/// Runs a parsed command; the report goes to `--out` when given.
pub fn run(cli: &Cli) -> Outcome {
    let common = &cli.common;
    let start = std::time::Instant::now();
    let result = match &cli.command {
        Command::Abelianize { presentation } => abelianize(common, presentation),
        Command::Certify { presentation, character, phi } => certify(common, presentation, character.as_deref(), phi.as_deref()),
        Command::Scan { presentation, grid } => scan(common, presentation, *grid),
        Command::Selftest { corrupt_fixture } => selftest(common, *corrupt_fixture),
    };
    if common.verbose > 0 {
        eprintln!("finished in {:.2?}", start.elapsed());
    }
    let outcome = match result {
        Ok(o) => o,
        Err(f) => return Outcome { report: format!("error: {}\n", f.message), exit: f.exit },
    };
    if let Some(path) = &common.out {
        if let Err(e) = std::fs::write(path, &outcome.report) {
            return Outcome { report: format!("error: {}: {e}\n", path.display()), exit: Exit::Failure };
        }
        return Outcome { report: String::new(), exit: outcome.exit };
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str, body: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("novikov-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn go(args: &[&str]) -> Outcome {
        let mut full = vec!["novikov"];
        full.extend_from_slice(args);
        run(&Cli::parse_from(full))
    }

    #[test]
    fn abelianize_reports() {
        let f2 = tmp("f2.pres", "raag { a, b; }");
        let out = go(&["abelianize", f2.to_str().unwrap()]);
        assert_eq!(out.exit, Exit::Ok);
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["rank"], 2);
        assert_eq!(v["schema"], 1);
        let klein = tmp("k.pres", "pres { a, b | a b a b }");
        let out = go(&["abelianize", klein.to_str().unwrap()]);
        assert_eq!(out.exit, Exit::Ok, "{}", out.report);
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!((v["rank"].clone(), v["torsion"].clone()), (json!(1), json!([2])));
        let bad = tmp("bad.pres", "raag { a, b;\n a-c }");
        assert_eq!(go(&["abelianize", bad.to_str().unwrap()]).exit, Exit::Parse);
    }

    #[test]
    fn certify_exit_codes() {
        let z = tmp("z.pres", "raag { t; }");
        assert_eq!(go(&["certify", z.to_str().unwrap(), "--phi", "1"]).exit, Exit::Ok);
        let f2 = tmp("f2b.pres", "raag { a, b; }");
        assert_eq!(go(&["certify", f2.to_str().unwrap(), "--phi", "1,-2"]).exit, Exit::NotFibred);
        let bs = tmp("bs.pres", crate::fibring::catalog::BS12);
        let out = go(&["certify", bs.to_str().unwrap(), "--phi", "1"]);
        assert!(matches!(out.exit, Exit::NotFibred | Exit::Inconclusive));
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["minus"]["status"], "Certified");
        assert_eq!(go(&["certify", z.to_str().unwrap(), "--phi", "1", "--cutoff", "-1"]).exit, Exit::Parse);
    }

    #[test]
    fn scans_are_deterministic() {
        let z2 = tmp("z2.pres", "raag { a, b; a-b }");
        let a = go(&["scan", z2.to_str().unwrap(), "--samples", "8", "--seed", "3"]);
        let b = go(&["scan", z2.to_str().unwrap(), "--samples", "8", "--seed", "3"]);
        assert_eq!(a.report, b.report);
        let v: serde_json::Value = serde_json::from_str(&a.report).unwrap();
        assert_eq!(v["fibred"], 8);
        for args in [["--samples", "0"], ["--grid", "0"]] {
            let empty = go(&["scan", z2.to_str().unwrap(), args[0], args[1]]);
            let v: serde_json::Value = serde_json::from_str(&empty.report).unwrap();
            assert_eq!(v["samples"], 0);
        }
        let grid = go(&["scan", z2.to_str().unwrap(), "--grid", "1"]);
        let v: serde_json::Value = serde_json::from_str(&grid.report).unwrap();
        assert_eq!((v["samples"].clone(), v["fibred"].clone()), (json!(8), json!(8)));
    }
}
