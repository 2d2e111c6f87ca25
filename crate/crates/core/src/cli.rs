//! Command-line front end.
//!
//! Exit codes: 0 success, 1 violation or failed identity, 2 usage or
//! parameter error, 3 triangle capacity exceeded, 4 I/O or serialization
//! failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::TheoremId;
use crate::error::{Error, Result};
use crate::exactmath::{checked_power, ord_p};
use crate::filtered_sums::{self, FleckVariant};
use crate::identities::{self, IdentityId, IdentityRanges};
use crate::report::{
    self, IdentityReport, IdentityRunInfo, IdentitySummary, RunInfo, VerifyReport,
};
use crate::verifier::{run_grid, GridSpec, ResiduePolicy, RunOptions};
use crate::{ExactInt, ExactTables, Family, Poly, ResidueClass, Tables, Triangle};

pub const CACHE_ENV: &str = "CONGRUENCE_LAB_CACHE";

/// Default triangle row limit for `verify` and `sum`.
pub const DEFAULT_ROW_LIMIT: u64 = 1000;

/// Largest list a range flag may expand to.
const RANGE_LIMIT: usize = 1_000_000;

pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CAPACITY: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(
    name = "congruence-lab",
    version,
    about = "Exact Stirling/Eulerian sums and congruence verification"
)]
pub struct Cli {
    /// Directory for triangle cache files (also read from CONGRUENCE_LAB_CACHE).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write rows 0..=n_max of a triangle in the cache file format.
    Triangle {
        /// stirling1, stirling2 or eulerian.
        family: Family,
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one filtered sum and its p-adic order.
    Sum(SumArgs),
    /// Check a theorem over a parameter grid.
    Verify(VerifyArgs),
    /// Check supporting identities over ranges.
    Identity(IdentityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SumKind {
    /// sum over k = r (mod p^alpha) of (-1)^k C(n,k) C((k-r)/p^alpha, l)
    Fleck,
    /// sum over k = r (mod p^alpha) of C(n,k) (-a)^k
    BinomPower,
    /// sum over k = r (mod p^alpha) of <n,k> C((k-r)/p^alpha, l)
    EulerianWan,
    /// sum over k = r (mod p^alpha) of <n,k> a^k
    EulerianPower,
    /// sum over k = r (mod d) of s(n,k) S(k,m) a^k
    #[value(alias = "stirling-product")]
    Cdr,
    /// sum over k = r (mod d) of s(n,k) f(k) a^k
    StirlingPoly,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    pub kind: SumKind,
    #[arg(long)]
    pub n: u64,
    /// Prime for the order line; required by the binomial and Eulerian sums.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub alpha: u64,
    /// Filter modulo p^beta with floor weights (fleck only).
    #[arg(long)]
    pub beta: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub l: u64,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    /// Modulus for the Stirling sums.
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub r: i64,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub a: String,
    /// Coefficients low to high, e.g. "0,0,1" for x^2.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub f: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Report path; stdout when absent or "-".
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Leave the timestamp out so reruns are byte-identical.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Claim id or alias: fleck, weisman, wan13, sun, wan15, ds16, ds17, ec1, ec2, sc1, sc2, sc3.
    pub theorem: TheoremId,
    /// Ranges are "a..b" (inclusive), "x,y,z" or a single value.
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, default_value = "1")]
    pub n: String,
    #[arg(long, default_value = "1")]
    pub alpha: String,
    #[arg(long, default_value = "0")]
    pub beta: String,
    #[arg(long, default_value = "0")]
    pub l: String,
    #[arg(long, default_value = "1")]
    pub m: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub a: String,
    /// "all" for one full period of the modulus, or a range.
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    pub r: String,
    /// Polynomial coefficient list; repeat for several polynomials.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Vec<String>,
    /// Skip tuples with m > n.
    #[arg(long)]
    pub m_le_n: bool,
    /// Also evaluate tuples outside the hypotheses.
    #[arg(long)]
    pub evaluate_outside: bool,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Stop at the first violation.
    #[arg(long)]
    pub fail_fast: bool,
    /// Triangle row limit.
    #[arg(long, default_value_t = DEFAULT_ROW_LIMIT)]
    pub max_n: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    /// E1, E2, S3, SS3, S4, SCL3E, L31, L32 or all.
    pub identity: String,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    /// Random tuples for L31.
    #[arg(long, default_value_t = 200)]
    pub samples: u64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parse "a..b" (inclusive), "x,y,z" or a single integer.
pub fn parse_range(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    let bad = || Error::param(format!("bad range {s:?}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(Error::param(format!("empty range {s:?}")));
        }
        if hi.abs_diff(lo) >= RANGE_LIMIT as u64 {
            return Err(Error::param(format!("range {s:?} is too long")));
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect()
}

pub fn parse_natural_range(s: &str) -> Result<Vec<u64>> {
    parse_range(s)?
        .into_iter()
        .map(|v| u64::try_from(v).map_err(|_| Error::param(format!("negative value {v} in {s:?}"))))
        .collect()
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPrime(_) | Error::Parameter(_) => exit::USAGE,
        Error::Capacity { .. } => exit::CAPACITY,
        Error::Io { .. } | Error::Cache { .. } | Error::Json(_) | Error::Csv(_) => exit::IO,
    }
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, out: Option<&Path>, contents: &str) -> Result<()> {
        match out {
            Some(path) if path.as_os_str() != "-" => {
                std::fs::write(path, contents).map_err(|e| Error::io(path, e))
            }
            _ => self
                .stdout
                .write_all(contents.as_bytes())
                .map_err(|e| Error::io("<stdout>", e)),
        }
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run_from<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { stdout, stderr };
    match execute(cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}

fn load_tables(max_n: u64, dir: Option<&Path>, io: &mut Io<'_>) -> Result<ExactTables> {
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let (tables, outcomes) = Tables::load_or_build(max_n, dir)?;
    for (family, outcome) in outcomes {
        if let crate::triangles::CacheOutcome::Rebuilt { reason } = outcome {
            let _ = writeln!(io.stderr, "warning: rebuilt {family} cache: {reason}");
        }
    }
    Ok(tables)
}

fn execute(cli: Cli, io: &mut Io<'_>) -> Result<i32> {
    let cache = cache_dir(cli.cache_dir);
    match cli.command {
        Command::Triangle { family, n_max, out } => {
            let tri: Triangle<ExactInt> = Triangle::build(family, n_max);
            io.emit(out.as_deref(), &tri.to_cache_string())?;
            Ok(exit::OK)
        }
        Command::Sum(args) => cmd_sum(args, cache.as_deref(), io),
        Command::Verify(args) => cmd_verify(args, cache.as_deref(), io),
        Command::Identity(args) => cmd_identity(args, cache.as_deref(), io),
    }
}

fn require_p(p: Option<u64>, kind: SumKind) -> Result<u64> {
    p.ok_or_else(|| Error::param(format!("{kind:?} sum needs --p")))
}

fn cmd_sum(args: SumArgs, cache: Option<&Path>, io: &mut Io<'_>) -> Result<i32> {
    let a: ExactInt = args
        .a
        .trim()
        .parse()
        .map_err(|_| Error::param(format!("bad integer {:?}", args.a)))?;
    let needs_tables = matches!(
        args.kind,
        SumKind::EulerianWan | SumKind::EulerianPower | SumKind::Cdr | SumKind::StirlingPoly
    );
    let tables = if needs_tables {
        if args.n > DEFAULT_ROW_LIMIT {
            return Err(Error::Capacity {
                requested: args.n,
                limit: DEFAULT_ROW_LIMIT,
            });
        }
        Some(load_tables(args.n, cache, io)?)
    } else {
        None
    };
    let p_alpha_class = |p: u64, e: u64| -> Result<ResidueClass> {
        ResidueClass::new(checked_power(p, e)?, args.r)
    };
    let (n, kind) = (args.n, args.kind);
    let value: ExactInt = match kind {
        SumKind::Fleck => {
            let p = require_p(args.p, kind)?;
            match args.beta {
                Some(beta) => filtered_sums::fleck_sum(
                    n,
                    p,
                    args.alpha,
                    &p_alpha_class(p, beta)?,
                    args.l,
                    FleckVariant::Floor { beta },
                )?,
                None => filtered_sums::fleck_sum(
                    n,
                    p,
                    args.alpha,
                    &p_alpha_class(p, args.alpha)?,
                    args.l,
                    FleckVariant::Exact,
                )?,
            }
        }
        SumKind::BinomPower => {
            let p = require_p(args.p, kind)?;
            filtered_sums::binom_power_sum(n, p, args.alpha, &p_alpha_class(p, args.alpha)?, &a)?
        }
        SumKind::EulerianWan | SumKind::EulerianPower => {
            let p = require_p(args.p, kind)?;
            let tables = tables.as_ref().expect("tables loaded");
            let cls = p_alpha_class(p, args.alpha)?;
            if kind == SumKind::EulerianWan {
                filtered_sums::eulerian_wan_sum(tables, n, p, args.alpha, &cls, args.l)?
            } else {
                filtered_sums::eulerian_power_sum(tables, n, p, args.alpha, &cls, &a)?
            }
        }
        SumKind::Cdr | SumKind::StirlingPoly => {
            let d = args
                .d
                .ok_or_else(|| Error::param("Stirling sums need --d"))?;
            let cls = ResidueClass::new(d, args.r)?;
            let tables = tables.as_ref().expect("tables loaded");
            if kind == SumKind::Cdr {
                filtered_sums::stirling_product_sum(tables, n, args.m, &cls, &a)?
            } else {
                let f = Poly::parse_coeff_list(&args.f)?;
                filtered_sums::stirling_poly_sum(tables, n, &f, &cls, &a)?
            }
        }
    };
    let mut text = format!("{value}\n");
    if let Some(p) = args.p {
        text.push_str(&format!("ord_{p} = {}\n", ord_p(&value, p)?));
    }
    io.emit(None, &text)?;
    Ok(exit::OK)
}

fn build_grid(args: &VerifyArgs) -> Result<GridSpec> {
    let mut grid = GridSpec::new(args.theorem);
    grid.p = parse_natural_range(&args.p)?;
    grid.n = parse_natural_range(&args.n)?;
    grid.alpha = parse_natural_range(&args.alpha)?;
    grid.beta = parse_natural_range(&args.beta)?;
    grid.l = parse_natural_range(&args.l)?;
    grid.m = parse_natural_range(&args.m)?;
    grid.a = parse_range(&args.a)?;
    grid.r = match args.r.trim() {
        "all" => ResiduePolicy::All,
        s => ResiduePolicy::List(parse_range(s)?),
    };
    if !args.f.is_empty() {
        grid.f = args.f.clone();
    }
    grid.m_at_most_n = args.m_le_n;
    grid.evaluate_outside = args.evaluate_outside;
    grid.validate()?;
    Ok(grid)
}

fn cmd_verify(args: VerifyArgs, cache: Option<&Path>, io: &mut Io<'_>) -> Result<i32> {
    let grid = build_grid(&args)?;
    if grid.max_n() > args.max_n {
        return Err(Error::Capacity {
            requested: grid.max_n(),
            limit: args.max_n,
        });
    }
    let tables = load_tables(grid.max_n(), cache, io)?;
    let outcome = run_grid(
        &tables,
        &grid,
        RunOptions {
            workers: args.workers,
            fail_fast: args.fail_fast,
        },
    )?;
    let violations = outcome.summary.violations();
    let report = VerifyReport {
        run: RunInfo {
            theorem_id: grid.theorem_id,
            grid,
            timestamp: report::timestamp(!args.output.no_timestamp),
            tool_version: crate::TOOL_VERSION.to_string(),
        },
        records: outcome.records,
        summary: outcome.summary,
    };
    let text = match args.output.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    io.emit(args.output.out.as_deref(), &text)?;
    if args.output.out.is_some() {
        let _ = writeln!(
            io.stderr,
            "{}: {} records, {} violations",
            report.run.theorem_id, report.summary.total, violations
        );
    }
    Ok(if violations == 0 {
        exit::OK
    } else {
        exit::VIOLATION
    })
}

fn cmd_identity(args: IdentityArgs, cache: Option<&Path>, io: &mut Io<'_>) -> Result<i32> {
    let ids: Vec<IdentityId> = if args.identity.eq_ignore_ascii_case("all") {
        IdentityId::ALL.to_vec()
    } else {
        vec![args.identity.parse()?]
    };
    let opt_range = |s: &Option<String>| s.as_deref().map(parse_natural_range).transpose();
    let ranges = IdentityRanges {
        n: opt_range(&args.n)?,
        l: opt_range(&args.l)?,
        p: opt_range(&args.p)?,
        alpha: opt_range(&args.alpha)?,
        samples: args.samples,
        seed: args.seed,
    };
    let rows = identities::required_rows(&ids, &ranges)?;
    if rows > DEFAULT_ROW_LIMIT {
        return Err(Error::Capacity {
            requested: rows,
            limit: DEFAULT_ROW_LIMIT,
        });
    }
    let tables = load_tables(rows, cache, io)?;
    let mut results = Vec::new();
    for &id in &ids {
        results.extend(identities::run_identity(&tables, id, &ranges)?);
    }
    let summary = IdentitySummary::from_results(&results);
    let failed = summary.failed;
    let report = IdentityReport {
        run: IdentityRunInfo {
            identity_id: if ids.len() == 1 {
                ids[0].name().to_string()
            } else {
                "all".to_string()
            },
            ranges,
            timestamp: report::timestamp(!args.output.no_timestamp),
            tool_version: crate::TOOL_VERSION.to_string(),
        },
        results,
        summary,
    };
    let text = match args.output.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    io.emit(args.output.out.as_deref(), &text)?;
    Ok(if failed == 0 {
        exit::OK
    } else {
        exit::VIOLATION
    })
}
