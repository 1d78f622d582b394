//! Command-line interface: `count`, `gen`, `bench` and `verify`.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 DNF parse error,
//! 3 parameter or domain error (including malformed flags), 4 exact-oracle cap
//! exceeded, 5 a verification assertion failed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::baselines::{exact_count, DEFAULT_MAX_VARS};
use crate::engine::DEFAULT_BETA;
use crate::error::{invalid, Error, Result};
use crate::estimate::{estimate, Algorithm, Estimate, RunParams};
use crate::formula::{generate_benchmark, parse_dnf, serialize_dnf, BenchmarkParams, Formula};
use crate::stats::{
    accuracy_suite, lemma_suite, pac_runs, permutation_rates, scaling_sweep, write_csv, Harness, PacReport, Recipe,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PARAM: i32 = 3;
pub const EXIT_ORACLE_CAP: i32 = 4;
pub const EXIT_ASSERTION: i32 = 5;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        Error::InvalidParameter(_) | Error::InvalidFormula(_) | Error::Infeasible(_) | Error::ZeroWeights => EXIT_PARAM,
        Error::OracleCap { .. } => EXIT_ORACLE_CAP,
        Error::Io(_) => EXIT_OTHER,
    }
}

#[derive(Debug, Parser)]
#[command(name = "dnfcount", version, about = "Approximate weighted model counting for DNF formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate (or count exactly) the weighted model ratio of a DNF file.
    Count(CountArgs),
    /// Generate a synthetic benchmark formula.
    Gen(GenArgs),
    /// Run estimators over generated formulas of increasing size.
    Bench(BenchArgs),
    /// Check accuracy or per-order trial success rates against the exact oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Accuracy {
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct CountArgs {
    file: PathBuf,
    #[arg(long, default_value = "main")]
    algo: Algorithm,
    #[command(flatten)]
    acc: Accuracy,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Emit one JSON object.
    #[arg(long)]
    json: bool,
    /// Variable cap for `--algo exact`.
    #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
    max_n: usize,
    /// Report `wall_ms` as 0 so output is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
    /// Also write a run record (estimate, input digest, version, timestamp) as JSON.
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Parallel {
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    no_timing: bool,
}

impl Parallel {
    fn harness(&self) -> Harness {
        Harness { workers: self.workers, timing: !self.no_timing }
    }
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Sizes: `2^10..2^14` (doubling), or a comma list such as `1024,4096`.
    #[arg(long, default_value = "2^10..2^14")]
    sizes: String,
    #[arg(long, value_delimiter = ',', default_value = "main,lklm,klm")]
    algo: Vec<Algorithm>,
    #[arg(long, default_value = "scaling")]
    recipe: Recipe,
    #[arg(long, default_value_t = 1)]
    runs: u32,
    #[command(flatten)]
    acc: Accuracy,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Per-run CSV; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Per-(size, algorithm) means as CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    par: Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Suite {
    Pac,
    Lemma2,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "pac")]
    suite: Suite,
    /// Estimator runs per formula (`pac`).
    #[arg(long, default_value_t = 400)]
    runs: u32,
    /// Trials per clause order (`lemma2`).
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Clause orders per formula (`lemma2`).
    #[arg(long, default_value_t = 5)]
    perms: usize,
    #[arg(long, value_delimiter = ',', default_value = "main,lklm,klm")]
    algo: Vec<Algorithm>,
    #[command(flatten)]
    acc: Accuracy,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Result table as CSV; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    par: Parallel,
}

/// Output of `count --json`. KLM variants report `beta` as null; the exact
/// oracle reports null for the sampling counters and adds `model_count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountOutput {
    pub mu_hat: f64,
    pub p_hat: f64,
    pub rho_phi: f64,
    #[serde(rename = "T")]
    pub target: Option<u64>,
    #[serde(rename = "N")]
    pub trials: Option<u64>,
    #[serde(rename = "Y")]
    pub successes: Option<u64>,
    pub steps: Option<u64>,
    pub bits: Option<u64>,
    pub seed: u64,
    pub algo: Algorithm,
    pub eps: f64,
    pub delta: f64,
    pub beta: Option<f64>,
    pub wall_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_count: Option<u64>,
}

impl CountOutput {
    fn from_estimate(e: &Estimate, wall_ms: f64) -> Self {
        CountOutput {
            mu_hat: e.mu_hat,
            p_hat: e.p_hat,
            rho_phi: e.rho_phi,
            target: Some(e.target),
            trials: Some(e.trials),
            successes: Some(e.successes),
            steps: Some(e.steps),
            bits: Some(e.bits),
            seed: e.seed,
            algo: e.algo,
            eps: e.eps,
            delta: e.delta,
            beta: e.beta,
            wall_ms,
            model_count: None,
        }
    }
}

/// A persisted run: the estimate with provenance of its input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub estimate: Option<Estimate>,
    pub output: CountOutput,
    /// SHA-256 of the input file, lowercase hex.
    pub input_sha256: String,
    pub algorithm: Algorithm,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses a size list: `2^a..2^b` (every power of two in between), `x..y`
/// (doubling from `x`), or comma-separated values, each `2^k` or decimal.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let one = |t: &str| -> Result<usize> {
        let t = t.trim();
        let bad = || invalid(format!("bad size `{t}`"));
        match t.strip_prefix("2^") {
            Some(k) => {
                let k: u32 = k.parse().map_err(|_| bad())?;
                1usize.checked_shl(k).filter(|_| k < usize::BITS).ok_or_else(bad)
            }
            None => t.parse().map_err(|_| bad()),
        }
    };
    if let Some((a, b)) = s.split_once("..") {
        let (mut x, y) = (one(a)?, one(b)?);
        if x == 0 || x > y {
            return Err(invalid(format!("empty size range `{s}`")));
        }
        let mut out = Vec::new();
        while x <= y {
            out.push(x);
            x = match x.checked_mul(2) {
                Some(v) => v,
                None => break,
            };
        }
        return Ok(out);
    }
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(one).collect()
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAM } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Count(a) => cmd_count(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read_formula(path: &Path) -> Result<(Formula, Vec<u8>)> {
    let bytes = fs::read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    Ok((parse_dnf(&text)?, bytes))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, body: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body)?,
        None => out.write_all(body)?,
    }
    Ok(())
}

fn cmd_count(a: &CountArgs, out: &mut dyn Write) -> Result<i32> {
    let (f, bytes) = read_formula(&a.file)?;
    let start = Instant::now();
    let (output, est) = if a.algo == Algorithm::Exact {
        let r = exact_count(&f, a.max_n)?;
        let output = CountOutput {
            mu_hat: r.mu,
            p_hat: r.p,
            rho_phi: r.rho_phi,
            target: None,
            trials: None,
            successes: None,
            steps: None,
            bits: None,
            seed: a.acc.seed,
            algo: Algorithm::Exact,
            eps: a.acc.eps,
            delta: a.acc.delta,
            beta: None,
            wall_ms: 0.0,
            model_count: Some(r.model_count),
        };
        (output, None)
    } else {
        let params = RunParams { epsilon: a.acc.eps, delta: a.acc.delta, beta: a.beta, seed: a.acc.seed };
        let est = estimate(&f, a.algo, &params)?;
        (CountOutput::from_estimate(&est, 0.0), Some(est))
    };
    let output = CountOutput {
        wall_ms: if a.no_timing { 0.0 } else { start.elapsed().as_secs_f64() * 1e3 },
        ..output
    };

    if a.json {
        serde_json::to_writer(&mut *out, &output).map_err(std::io::Error::from)?;
        writeln!(out)?;
    } else {
        let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        writeln!(out, "algo     {}", output.algo)?;
        writeln!(out, "mu_hat   {}", output.mu_hat)?;
        writeln!(out, "p_hat    {}", output.p_hat)?;
        writeln!(out, "rho_phi  {}", output.rho_phi)?;
        if let Some(c) = output.model_count {
            writeln!(out, "models   {c}")?;
        }
        writeln!(out, "T        {}", opt(output.target))?;
        writeln!(out, "N        {}", opt(output.trials))?;
        writeln!(out, "Y        {}", opt(output.successes))?;
        writeln!(out, "steps    {}", opt(output.steps))?;
        writeln!(out, "bits     {}", opt(output.bits))?;
        writeln!(out, "wall_ms  {:.3}", output.wall_ms)?;
    }

    if let Some(path) = &a.record {
        let record = RunRecord {
            estimate: est,
            output,
            input_sha256: sha256_hex(&bytes),
            algorithm: a.algo,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        };
        let json = serde_json::to_vec_pretty(&record).map_err(std::io::Error::from)?;
        fs::write(path, json)?;
    }
    Ok(EXIT_OK)
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let mut p = BenchmarkParams::scaling(a.n);
    if let Some(m) = a.m {
        p.m = m;
    }
    p.alpha = a.alpha.unwrap_or(p.alpha);
    p.gamma = a.gamma.unwrap_or(p.gamma);
    p.lambda = a.lambda.unwrap_or(p.lambda);
    let f = generate_benchmark(&p, a.seed)?;
    emit(out, a.out.as_deref(), serialize_dnf(&f).as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let sizes = parse_sizes(&a.sizes)?;
    if a.algo.contains(&Algorithm::Exact) {
        return Err(invalid("bench runs estimators only"));
    }
    let params = RunParams { epsilon: a.acc.eps, delta: a.acc.delta, beta: a.beta, seed: a.acc.seed };
    let (summary, runs) = scaling_sweep(&sizes, a.recipe, &a.algo, &params, a.runs, &a.par.harness())?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &runs)?;
    emit(out, a.csv.as_deref(), &buf)?;
    if let Some(path) = &a.summary {
        let mut buf = Vec::new();
        write_csv(&mut buf, &summary)?;
        fs::write(path, buf)?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let harness = a.par.harness();
    let params = RunParams { epsilon: a.acc.eps, delta: a.acc.delta, beta: a.beta, seed: a.acc.seed };
    let mut ok = true;
    let mut buf = Vec::new();
    match a.suite {
        Suite::Pac => {
            if a.algo.contains(&Algorithm::Exact) {
                return Err(invalid("verify runs estimators only"));
            }
            if a.runs == 0 {
                return Err(invalid("runs must be at least 1"));
            }
            let suite = accuracy_suite(a.acc.seed)?;
            let mut table = Vec::new();
            for &algo in &a.algo {
                let records = pac_runs(&suite, algo, &params, a.runs, &harness)?;
                let rep = PacReport::from_records(&suite, algo, a.acc.eps, a.acc.delta, &records)?;
                writeln!(
                    err,
                    "{algo}: {} of {} runs failed ({:.4}), bound {:.4}: {}",
                    rep.pooled_failures,
                    rep.pooled_runs,
                    rep.pooled_fraction(),
                    rep.bound,
                    if rep.passed() { "pass" } else { "FAIL" }
                )?;
                ok &= rep.passed();
                table.extend(rep.table());
            }
            write_csv(&mut buf, &table)?;
        }
        Suite::Lemma2 => {
            if a.trials == 0 || a.perms == 0 {
                return Err(invalid("trials and perms must be at least 1"));
            }
            let mut rows = Vec::new();
            for sf in lemma_suite(a.acc.seed)? {
                let rates = permutation_rates(&sf.name, &sf.formula, sf.exact.p, a.perms, a.trials, a.acc.seed, &harness)?;
                for r in &rates {
                    if !r.within(5.0) {
                        ok = false;
                        writeln!(err, "{} order {}: rate {} vs p {} (z = {:.2})", r.formula, r.perm, r.rate, r.p, r.z)?;
                    }
                }
                rows.extend(rates);
            }
            writeln!(err, "{} orders checked: {}", rows.len(), if ok { "pass" } else { "FAIL" })?;
            write_csv(&mut buf, &rows)?;
        }
    }
    emit(out, a.csv.as_deref(), &buf)?;
    Ok(if ok { EXIT_OK } else { EXIT_ASSERTION })
}
