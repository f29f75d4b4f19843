//! Command-line front end. Every command emits one report:
//!
//! ```text
//! {"command": ..., "version": ..., "params": {...}, "seed": s,
//!  "status": ..., "result": {...}, "elapsed_ms": t}
//! ```
//!
//! Exit codes: 0 success, 1 verification failure or nothing found, 2 usage
//! error, 3 a refuting witness was found, 4 I/O or cache failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::density::{delta_star_refute, density_lower_bound};
use crate::diffstats::{gap_analysis, kronecker_set, representation_count};
use crate::error::{Error, Result};
use crate::linforms::{
    admissible_witness, beta_infinity_mc, complexity, gtz_empirical_count, kronecker_coefficients,
    local_factor, search_m_prime, singular_product, size_norm, verify_product_representation,
    AffineSystem,
};
use crate::primes::{self, PrimeTable, DEFAULT_SEGMENT_SIZE};
use crate::ramsey::{dilation_blocks_with, finite_sums, fs_of, sub_ip_search, verify_blocks, DilationStrategy};
use crate::ratios::represent_rational;
use crate::sets::{Evens, Everything, NumberSet, Nothing};

pub const CACHE_DIR_ENV: &str = "KRONECKER_CACHE_DIR";
const DEFAULT_CACHE_DIR: &str = ".kronecker-cache";
const DECIMAL_DIGITS: usize = 12;

#[derive(Parser, Debug, Clone)]
#[command(name = "kronecker", version, about = "Prime differences, Kronecker numbers and linear forms in primes")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Directory for sieve caches
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,

    /// Rebuild sieves instead of reading cached tables
    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Cap on worker threads
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Build (or load) a prime table and count its primes
    Sieve(SieveArgs),
    /// Count prime pairs at one gap
    DiffCount(DiffCountArgs),
    /// Difference profile and empirical Kronecker set
    Kronecker(ProfileArgs),
    /// Gap statistics of the empirical Kronecker set
    Gaps(ProfileArgs),
    /// Exact density lower bound for a given r
    DensityBound(DensityArgs),
    /// Search for an r-set whose differences avoid a set
    DeltaRefute(DeltaRefuteArgs),
    /// Monochromatic sub-IP certificate search
    Hindman(HindmanArgs),
    /// Blocks with sums divisible by m
    Dilate(DilateArgs),
    /// Complexity of a system of affine-linear forms
    Complexity(SystemArgs),
    /// Local factors beta_p for p up to pmax
    LocalFactors(PrimeBoundArgs),
    /// Product of local factors up to pmax
    SingularProduct(SingularArgs),
    /// Monte Carlo estimate of the archimedean factor
    BetaInf(BetaInfArgs),
    /// Search for m' and the constants k and D
    KronSystem(KronSystemArgs),
    /// Check k b = (a_j m') (j b) with j b in the set, for all b <= bmax
    VerifyKd(VerifyKdArgs),
    /// Write num/den as a ratio of two set members
    Represent(RepresentArgs),
    /// Exact prime-valued lattice count against the predicted main term
    GtzCount(GtzArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SieveArgs {
    #[arg(long)]
    pub limit: u64,
    #[arg(long, default_value_t = DEFAULT_SEGMENT_SIZE)]
    pub segment_size: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DiffCountArgs {
    #[arg(long)]
    pub limit: u64,
    #[arg(long)]
    pub d: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ProfileArgs {
    #[arg(long)]
    pub limit: u64,
    #[arg(long)]
    pub dmax: u64,
    #[arg(long, default_value_t = 3)]
    pub threshold: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DensityArgs {
    #[arg(long)]
    pub r: u64,
}

/// Where a membership set comes from: `kronecker` (empirical, from
/// `--limit`/`--threshold`), `evens`, `all`, `empty`, or a path to a JSON
/// array of integers.
#[derive(Args, Debug, Clone, Serialize)]
pub struct SetArgs {
    #[arg(long = "set", default_value = "kronecker")]
    pub set: String,
    #[arg(long, default_value_t = 10_000_000)]
    pub limit: u64,
    #[arg(long, default_value_t = 3)]
    pub threshold: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DeltaRefuteArgs {
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HindmanArgs {
    #[arg(long, value_delimiter = ',')]
    pub gens: Vec<u64>,
    /// JSON object mapping finite sums (as strings) to color ids
    #[arg(long)]
    pub coloring: PathBuf,
    #[arg(long)]
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    Prefix,
    Residue,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DilateArgs {
    #[arg(long, value_delimiter = ',')]
    pub xs: Vec<u64>,
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Prefix)]
    pub strategy: StrategyArg,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SystemArgs {
    #[arg(long)]
    pub system: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PrimeBoundArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub pmax: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SingularArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub pmax: u64,
    /// Include the exact fraction (can be very long)
    #[arg(long)]
    pub exact: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BetaInfArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct KronSystemArgs {
    #[arg(long)]
    pub r: u64,
    #[arg(long, default_value_t = 10)]
    pub mmax: u64,
    #[arg(long, default_value_t = 1000)]
    pub xmax: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyKdArgs {
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub bmax: u64,
    #[arg(long, default_value_t = 10)]
    pub mmax: u64,
    /// Prime bound for the m' search (defaults to --limit)
    #[arg(long)]
    pub xmax: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RepresentArgs {
    #[arg(long)]
    pub num: u64,
    #[arg(long)]
    pub den: u64,
    #[arg(long, default_value_t = 100)]
    pub tmax: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub set: SetArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GtzArgs {
    #[arg(long)]
    pub system: PathBuf,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 10_000)]
    pub pmax: u64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sieve(_) => "sieve",
            Command::DiffCount(_) => "diff-count",
            Command::Kronecker(_) => "kronecker",
            Command::Gaps(_) => "gaps",
            Command::DensityBound(_) => "density-bound",
            Command::DeltaRefute(_) => "delta-refute",
            Command::Hindman(_) => "hindman",
            Command::Dilate(_) => "dilate",
            Command::Complexity(_) => "complexity",
            Command::LocalFactors(_) => "local-factors",
            Command::SingularProduct(_) => "singular-product",
            Command::BetaInf(_) => "beta-inf",
            Command::KronSystem(_) => "kron-system",
            Command::VerifyKd(_) => "verify-kd",
            Command::Represent(_) => "represent",
            Command::GtzCount(_) => "gtz-count",
        }
    }

    fn seed(&self) -> u64 {
        match self {
            Command::DeltaRefute(a) => a.seed,
            Command::BetaInf(a) => a.seed,
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailed,
    NotFound,
    WitnessFound,
}

impl Status {
    fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed | Status::NotFound => 1,
            Status::WitnessFound => 3,
        }
    }
}

/// What a run produced: the rendered report and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: u8,
    pub output: String,
    pub error: Option<String>,
    /// The JSON report (absent on errors).
    pub report: Option<Value>,
}

impl Outcome {
    fn failure(err: &Error) -> Outcome {
        let exit_code = match err {
            Error::Io(_) | Error::CorruptCache(_) => 4,
            _ => 2,
        };
        Outcome { exit_code, output: String::new(), error: Some(err.to_string()), report: None }
    }
}

/// Result payload plus optional CSV rendering.
struct Payload {
    status: Status,
    result: Value,
    csv: Option<String>,
}

impl Payload {
    fn ok(result: Value) -> Payload {
        Payload { status: Status::Ok, result, csv: None }
    }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    let run = || execute(cli);
    let res = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Error::InvalidArgument(format!("thread pool: {e}"))),
        },
        None => run(),
    };
    match res {
        Ok(o) => o,
        Err(e) => Outcome::failure(&e),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    let payload = run_command(cli)?;
    let report = json!({
        "command": cli.command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "params": serde_json::to_value(&cli.command).expect("params serialize"),
        "seed": cli.command.seed(),
        "status": payload.status,
        "result": payload.result,
        "elapsed_ms": start.elapsed().as_millis() as u64,
    });
    let output = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
        Format::Plain => render_plain(&report),
        Format::Csv => payload.csv.ok_or_else(|| {
            Error::InvalidArgument(format!("csv output is not available for {}", cli.command.name()))
        })?,
    };
    Ok(Outcome { exit_code: payload.status.exit_code(), output, error: None, report: Some(report) })
}

fn render_plain(report: &Value) -> String {
    let mut out = format!(
        "{} (v{}) status={}\n",
        report["command"].as_str().unwrap_or(""),
        report["version"].as_str().unwrap_or(""),
        report["status"].as_str().unwrap_or("")
    );
    if let Some(obj) = report["result"].as_object() {
        for (k, v) in obj {
            match v {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
    }
    out.trim_end().to_string()
}

fn cache_dir(cli: &Cli) -> PathBuf {
    cli.cache_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("sieve-{limit}.krn"))
}

/// Loads the cached table for `limit` or builds and stores it.
fn prime_table(cli: &Cli, limit: u64) -> Result<(PrimeTable, Option<PathBuf>)> {
    if cli.no_cache {
        return Ok((primes::sieve(limit)?, None));
    }
    let dir = cache_dir(cli);
    let path = cache_path(&dir, limit);
    if path.exists() {
        match PrimeTable::load_cache(&path) {
            Ok(t) if t.limit() == limit => return Ok((t, Some(path))),
            Ok(_) | Err(Error::CorruptCache(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let table = primes::sieve(limit)?;
    fs::create_dir_all(&dir)?;
    table.save_cache(&path)?;
    Ok((table, Some(path)))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn read_system(path: &Path) -> Result<AffineSystem> {
    AffineSystem::from_json(&fs::read_to_string(path)?)
}

/// Resolves a `--set` argument; `needed` is the largest value that will be probed.
fn resolve_set(cli: &Cli, args: &SetArgs, needed: u64) -> Result<Box<dyn NumberSet>> {
    Ok(match args.set.as_str() {
        "evens" => Box::new(Evens),
        "all" => Box::new(Everything),
        "empty" => Box::new(Nothing),
        "kronecker" => {
            if needed >= args.limit {
                return Err(Error::InvalidArgument(format!(
                    "values up to {needed} need --limit above {needed}, got {}",
                    args.limit
                )));
            }
            let (table, _) = prime_table(cli, args.limit)?;
            Box::new(kronecker_set(&table, needed, args.threshold)?)
        }
        path => {
            let v = read_json(Path::new(path))?;
            let members: std::collections::BTreeSet<u64> = serde_json::from_value(v)
                .map_err(|e| Error::InvalidArgument(format!("{path}: expected an array of integers: {e}")))?;
            Box::new(members)
        }
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable result")
}

fn run_command(cli: &Cli) -> Result<Payload> {
    match &cli.command {
        Command::Sieve(a) => {
            let table = primes::sieve_with_segment(a.limit, a.segment_size)?;
            let mut path = None;
            if !cli.no_cache {
                let dir = cache_dir(cli);
                fs::create_dir_all(&dir)?;
                let p = cache_path(&dir, a.limit);
                table.save_cache(&p)?;
                path = Some(p.display().to_string());
            }
            Ok(Payload::ok(json!({
                "limit": a.limit,
                "prime_count": table.prime_count(a.limit)?,
                "cache": path,
            })))
        }
        Command::DiffCount(a) => {
            let (table, _) = prime_table(cli, a.limit)?;
            let count = representation_count(&table, a.d)?;
            Ok(Payload::ok(json!({ "d": a.d, "count": count })))
        }
        Command::Kronecker(a) => {
            let (table, _) = prime_table(cli, a.limit)?;
            let profile = kronecker_set(&table, a.dmax, a.threshold)?;
            let mut buf = Vec::new();
            profile.write_csv(&mut buf)?;
            Ok(Payload {
                status: Status::Ok,
                result: profile.to_json(),
                csv: Some(String::from_utf8(buf).expect("csv is utf-8")),
            })
        }
        Command::Gaps(a) => {
            let (table, _) = prime_table(cli, a.limit)?;
            let profile = kronecker_set(&table, a.dmax, a.threshold)?;
            let gaps = gap_analysis(profile.members())?;
            let mut csv = String::from("gap,count\n");
            for (g, c) in &gaps.histogram {
                csv.push_str(&format!("{g},{c}\n"));
            }
            Ok(Payload {
                status: Status::Ok,
                result: json!({
                    "members": profile.members().len(),
                    "max_gap": gaps.max_gap,
                    "histogram": gaps.histogram,
                }),
                csv: Some(csv),
            })
        }
        Command::DensityBound(a) => {
            let b = density_lower_bound(a.r)?;
            Ok(Payload::ok(json!({
                "r": a.r,
                "per_integer": b.per_integer,
                "per_integer_decimal": b.per_integer.to_decimal(DECIMAL_DIGITS),
                "per_even": b.per_even,
                "per_even_decimal": b.per_even.to_decimal(DECIMAL_DIGITS),
            })))
        }
        Command::DeltaRefute(a) => {
            let set = resolve_set(cli, &a.set, a.m)?;
            let out = delta_star_refute(set.as_ref(), a.r, a.m, a.budget, a.seed)?;
            let status = if out.witness.is_some() { Status::WitnessFound } else { Status::Ok };
            Ok(Payload { status, result: to_value(&out), csv: None })
        }
        Command::Hindman(a) => {
            let family = finite_sums(&a.gens)?;
            let raw: BTreeMap<String, u32> = serde_json::from_value(read_json(&a.coloring)?)
                .map_err(|e| Error::InvalidArgument(format!("coloring file: {e}")))?;
            let coloring = raw
                .into_iter()
                .map(|(k, v)| {
                    k.parse::<u64>()
                        .map(|k| (k, v))
                        .map_err(|_| Error::InvalidArgument(format!("coloring key {k:?} is not an integer")))
                })
                .collect::<Result<BTreeMap<u64, u32>>>()?;
            let found = sub_ip_search(&family, &coloring, a.depth)?;
            let verified = found
                .as_ref()
                .is_some_and(|bf| verify_blocks(&family, bf.blocks(), &coloring, a.depth));
            let status = if found.is_some() { Status::Ok } else { Status::NotFound };
            Ok(Payload {
                status,
                result: json!({
                    "finite_sums": family.sums().len(),
                    "certificate": found,
                    "verified": verified,
                }),
                csv: None,
            })
        }
        Command::Dilate(a) => {
            let strategy = match a.strategy {
                StrategyArg::Prefix => DilationStrategy::PrefixPigeonhole,
                StrategyArg::Residue => DilationStrategy::ResidueGrouping,
            };
            let bf = dilation_blocks_with(&a.xs, a.m, a.count, strategy)?;
            let y = bf.quotients(a.m).expect("block sums divisible by m");
            let dilated_fs: Vec<u64> = fs_of(&y).into_iter().map(|v| v * a.m).collect();
            Ok(Payload::ok(json!({
                "blocks": bf.blocks(),
                "block_sums": bf.sums(),
                "y": y,
                "dilated_finite_sums": dilated_fs,
            })))
        }
        Command::Complexity(a) => {
            let s = read_system(&a.system)?;
            Ok(Payload::ok(json!({
                "t": s.len(),
                "d": s.dimension(),
                "complexity": complexity(&s)?,
                "size_norm_at_1": size_norm(&s, 1)?,
            })))
        }
        Command::LocalFactors(a) => {
            let s = read_system(&a.system)?;
            let mut rows = Vec::new();
            let mut admissible = true;
            for p in primes::small_primes(a.pmax) {
                let beta = local_factor(&s, p)?;
                let witness = admissible_witness(&s, p)?;
                admissible &= witness.is_some();
                rows.push(json!({
                    "p": p,
                    "beta": beta,
                    "decimal": beta.to_decimal(DECIMAL_DIGITS),
                    "witness": witness,
                }));
            }
            Ok(Payload::ok(json!({ "admissible": admissible, "factors": rows })))
        }
        Command::SingularProduct(a) => {
            let s = read_system(&a.system)?;
            let v = singular_product(&s, a.pmax)?;
            let mut result = json!({
                "pmax": a.pmax,
                "value": v.to_f64(),
                "decimal": v.to_decimal(DECIMAL_DIGITS),
                "numerator_digits": v.numerator().to_string().trim_start_matches('-').len(),
            });
            if a.exact {
                result["exact"] = json!(v.to_string());
            }
            Ok(Payload::ok(result))
        }
        Command::BetaInf(a) => {
            let s = read_system(&a.system)?;
            Ok(Payload::ok(to_value(&beta_infinity_mc(&s, a.n, a.samples, a.seed)?)))
        }
        Command::KronSystem(a) => {
            let (table, _) = prime_table(cli, a.xmax.max(2))?;
            let coeffs: Vec<String> = kronecker_coefficients(a.r).iter().map(|c| c.to_string()).collect();
            let found = search_m_prime(a.r, a.mmax, a.xmax, &table)?;
            let status = if found.is_some() { Status::Ok } else { Status::NotFound };
            Ok(Payload {
                status,
                result: json!({ "a": coeffs, "search": found }),
                csv: None,
            })
        }
        Command::VerifyKd(a) => {
            let xmax = a.xmax.unwrap_or(a.set.limit);
            let (table, _) = prime_table(cli, xmax.max(2))?;
            let Some(found) = search_m_prime(a.r, a.mmax, xmax, &table)? else {
                return Ok(Payload {
                    status: Status::NotFound,
                    result: json!({ "search": Value::Null }),
                    csv: None,
                });
            };
            let set = resolve_set(cli, &a.set, a.r * a.bmax)?;
            let report = verify_product_representation(&found, set.as_ref(), a.bmax);
            let mut csv = String::from("b,j\n");
            for (i, j) in report.choices.iter().enumerate() {
                csv.push_str(&format!("{},{}\n", i + 1, j.map_or(String::new(), |j| j.to_string())));
            }
            let status = if report.pass { Status::Ok } else { Status::VerificationFailed };
            Ok(Payload {
                status,
                result: json!({
                    "search": found,
                    "pass": report.pass,
                    "failures": report.failures,
                    "j_histogram": report.j_histogram,
                }),
                csv: Some(csv),
            })
        }
        Command::Represent(a) => {
            if a.num == 0 || a.den == 0 {
                return Err(Error::InvalidArgument("--num and --den must be positive".into()));
            }
            let needed = a.num.max(a.den).saturating_mul(a.tmax);
            let set = resolve_set(cli, &a.set, needed)?;
            let cert = represent_rational(set.as_ref(), a.num, a.den, a.tmax)?;
            let status = if cert.is_some() { Status::Ok } else { Status::NotFound };
            Ok(Payload { status, result: json!({ "certificate": cert }), csv: None })
        }
        Command::GtzCount(a) => {
            let s = read_system(&a.system)?;
            let limit = crate::linforms::box_max_value(&s, a.n)?.max(2);
            let (table, _) = prime_table(cli, limit)?;
            Ok(Payload::ok(to_value(&gtz_empirical_count(&s, a.n, &table, a.pmax)?)))
        }
    }
}
