//! Argument grammar and the subcommand implementations.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cube_constants_core::hermite::{limit_constant, normalized_limit_constant};
use cube_constants_core::projection::{lambda_level_exact, prime_singleton_report, LevelMode, McEstimate};
use cube_constants_core::rational::{binomial_prefix, to_f64};
use cube_constants_core::sidon::{kappa_estimate, DEFAULT_MAX_ORTHANTS};
use cube_constants_core::{make_family, FamilySpec, SupportFamily};
use rayon::prelude::*;
use rayon::ThreadPool;
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use crate::family::{parse_family, FamilyFile};
use crate::output::{bounds_report, family_summary, lambda_value, rational, render_csv, render_json};
use crate::parallel;
use crate::suites::{self, Suite, SuiteConfig};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_KAPPA_TOL: f64 = 1e-6;
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 42;
/// Published values of `d^{1/4}` times the normalized limit constant, to three
/// decimals.
pub const TABLE_REFERENCE: [(usize, f64); 5] = [(2, 0.814), (3, 0.811), (4, 0.808), (5, 0.807), (6, 0.806)];

#[derive(Debug, Parser)]
#[command(name = "cube-constants", version, about = "Projection, Sidon and Hermite-limit constants of Boolean cube function spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// `homog:N:d`, `upto:N:d`, `primes:N`, `sqfree:N`, `file:<path>` or a path.
    #[arg(long, global = true)]
    pub family: Option<String>,
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub d: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads; defaults to `CUBE_CONSTANTS_THREADS`, then the core count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[value(alias = "homog", alias = "exact")]
    Homogeneous,
    #[value(alias = "up-to")]
    Upto,
}

impl From<Mode> for LevelMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Homogeneous => LevelMode::ExactDegree,
            Mode::Upto => LevelMode::UpToDegree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact projection constant of a family.
    Exact,
    /// Monte Carlo projection constant with a 95% interval.
    Mc,
    /// Hermite limit constant of degree d and the series λ(N)/N^{d/2}.
    Limit {
        /// Comma-separated dimensions of the series.
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 100, 1000, 4000])]
        ns: Vec<usize>,
    },
    /// Limit constants for d = 2..6 next to the published values.
    Table,
    /// Sidon constant by orbit enumeration.
    Sidon {
        #[arg(long, default_value_t = DEFAULT_MAX_ORTHANTS)]
        max_orthants: u64,
    },
    /// The prime-product constant κ.
    Kappa,
    /// Runs verification suites; exit code 3 if any check fails.
    Verify {
        #[arg(value_enum)]
        positional: Option<Suite>,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        /// Largest N of the exhaustive sweeps.
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
    /// Writes a family in the JSON family format.
    Families,
    /// Prime singletons and square-free families up to N.
    Primes,
}

struct Report {
    json: Value,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    failed: Option<String>,
}

impl Report {
    fn new(json: Value, columns: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Report { json, columns, rows, failed: None }
    }
}

fn f(x: f64) -> String {
    format!("{x:?}")
}

impl Common {
    fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::Usage("--N is required".into()))
    }

    fn require_d(&self) -> Result<usize, CliError> {
        self.d.ok_or_else(|| CliError::Usage("--d is required".into()))
    }

    /// `(N, d, mode)` when the family is a level family given by
    /// `--N`/`--d`/`--mode` or a `homog:`/`upto:` shorthand; such families
    /// need not fit the set-list representation.
    fn level(&self) -> Result<Option<(usize, usize, Mode)>, CliError> {
        match &self.family {
            Some(arg) => {
                let mode = match arg.split(':').next() {
                    Some("homog") => Mode::Homogeneous,
                    Some("upto") => Mode::Upto,
                    _ => return Ok(None),
                };
                let parts: Vec<&str> = arg.split(':').collect();
                let [_, n, d] = parts.as_slice() else {
                    return Err(CliError::Usage(format!("malformed family shorthand {arg:?}")));
                };
                match (n.parse(), d.parse()) {
                    (Ok(n), Ok(d)) => Ok(Some((n, d, mode))),
                    _ => Err(CliError::Usage(format!("malformed family shorthand {arg:?}"))),
                }
            }
            None => Ok(Some((self.require_n()?, self.require_d()?, self.mode.unwrap_or(Mode::Homogeneous)))),
        }
    }

    /// `--family`, else the level family given by `--N`, `--d`, `--mode`.
    fn family(&self) -> Result<SupportFamily, CliError> {
        if let Some(arg) = &self.family {
            if self.n.is_some() || self.d.is_some() || self.mode.is_some() {
                return Err(CliError::Usage("--family excludes --N, --d and --mode".into()));
            }
            return parse_family(arg);
        }
        let (n, d) = (self.require_n()?, self.require_d()?);
        let spec = match self.mode.unwrap_or(Mode::Homogeneous) {
            Mode::Homogeneous => FamilySpec::Homogeneous { n, d },
            Mode::Upto => FamilySpec::UpTo { n, d },
        };
        Ok(make_family(&spec)?)
    }
}

fn level_summary(n: usize, d: usize, mode: Mode) -> Value {
    let sizes = binomial_prefix(n as u64, d as u64);
    let size = match mode {
        Mode::Homogeneous => sizes[d].clone(),
        Mode::Upto => sizes.into_iter().sum(),
    };
    let kind = match mode {
        Mode::Homogeneous => "homogeneous",
        Mode::Upto => "upto",
    };
    let size = u64::try_from(&size).map_or_else(|_| json!(size.to_string()), |s| json!(s));
    json!({ "kind": kind, "N": n, "d": d, "size": size })
}

fn exact(c: &Common, pool: &ThreadPool) -> Result<Report, CliError> {
    if c.family.is_some() && (c.n.is_some() || c.d.is_some() || c.mode.is_some()) {
        return Err(CliError::Usage("--family excludes --N, --d and --mode".into()));
    }
    let (method, summary, lambda) = match c.level()? {
        Some((n, d, mode)) => (
            "level-sums",
            level_summary(n, d, mode),
            lambda_level_exact(n, d, mode.into())?,
        ),
        _ => {
            let family = c.family()?;
            let lambda = parallel::lambda_exact(&family, pool)?;
            ("gray-sweep", family_summary(&family), lambda)
        }
    };
    let (exact, approx) = lambda_value(&lambda);
    let row = vec![
        summary["N"].to_string(),
        summary["size"].to_string().trim_matches('"').to_string(),
        method.to_string(),
        lambda.numer().to_string(),
        lambda.denom().to_string(),
        f(approx),
    ];
    let json = json!({
        "command": "exact",
        "method": method,
        "family": summary,
        "parameters": { "seed": c.seed() },
        "lambda": exact,
        "lambda_f64": approx,
    });
    Ok(Report::new(json, vec!["N", "size", "method", "lambda_num", "lambda_den", "lambda"], vec![row]))
}

fn estimate_json(e: &McEstimate) -> Value {
    json!({
        "mean": e.mean,
        "stderr": e.stderr,
        "ci95": [e.ci95.0, e.ci95.1],
        "samples": e.samples,
        "seed": e.seed,
    })
}

fn mc(c: &Common, pool: &ThreadPool) -> Result<Report, CliError> {
    let family = c.family()?;
    let samples = c.samples.unwrap_or(DEFAULT_SAMPLES);
    let e = parallel::lambda_mc(&family, samples, c.seed(), pool)?;
    let json = json!({
        "command": "mc",
        "method": "monte-carlo",
        "family": family_summary(&family),
        "parameters": { "samples": samples, "seed": c.seed() },
        "estimate": estimate_json(&e),
    });
    let row = vec![
        family.dim().to_string(),
        family.len().to_string(),
        samples.to_string(),
        c.seed().to_string(),
        f(e.mean),
        f(e.stderr),
        f(e.ci95.0),
        f(e.ci95.1),
    ];
    let columns = vec!["N", "size", "samples", "seed", "mean", "stderr", "ci95_low", "ci95_high"];
    Ok(Report::new(json, columns, vec![row]))
}

fn limit(c: &Common, ns: &[usize], pool: &ThreadPool) -> Result<Report, CliError> {
    let d = c.require_d()?;
    let mode = c.mode.unwrap_or(Mode::Homogeneous);
    let constant = limit_constant(d)?;
    let normalized = normalized_limit_constant(d)?;
    let series = pool.install(|| {
        ns.par_iter()
            .map(|&n| {
                let lambda = lambda_level_exact(n, d, mode.into())?;
                let ratio = to_f64(&lambda) / (n as f64).powf(d as f64 / 2.0);
                Ok((n, lambda, ratio))
            })
            .collect::<Result<Vec<_>, cube_constants_core::Error>>()
    })?;
    let mode_name = match mode {
        Mode::Homogeneous => "homogeneous",
        Mode::Upto => "upto",
    };
    let json = json!({
        "command": "limit",
        "method": "hermite-quadrature",
        "parameters": { "d": d, "mode": mode_name, "seed": c.seed() },
        "limit_constant": constant,
        "normalized": normalized,
        "series": series.iter().map(|(n, lambda, ratio)| json!({
            "N": n,
            "lambda": rational(lambda),
            "ratio": ratio,
            "difference": ratio - constant,
        })).collect::<Vec<_>>(),
    });
    let rows = series
        .iter()
        .map(|(n, lambda, ratio)| vec![d.to_string(), n.to_string(), f(to_f64(lambda)), f(*ratio), f(constant)])
        .collect();
    Ok(Report::new(json, vec!["d", "N", "lambda", "ratio", "limit_constant"], rows))
}

fn table(c: &Common, pool: &ThreadPool) -> Result<Report, CliError> {
    let rows = pool.install(|| {
        TABLE_REFERENCE
            .par_iter()
            .map(|&(d, published)| {
                let reference = published / (d as f64).powf(0.25);
                Ok((d, limit_constant(d)?, normalized_limit_constant(d)?, reference))
            })
            .collect::<Result<Vec<_>, cube_constants_core::Error>>()
    })?;
    let json = json!({
        "command": "table",
        "method": "hermite-quadrature",
        "parameters": { "seed": c.seed() },
        "rows": rows.iter().map(|(d, l, n, r)| json!({
            "d": d, "limit_constant": l, "normalized": n, "paper_reference_value": r,
        })).collect::<Vec<_>>(),
    });
    let csv = rows.iter().map(|(d, l, n, r)| vec![d.to_string(), f(*l), f(*n), f(*r)]).collect();
    Ok(Report::new(json, vec!["d", "limit_constant", "normalized", "paper_reference_value"], csv))
}

fn sidon(c: &Common, max_orthants: u64, pool: &ThreadPool) -> Result<Report, CliError> {
    let family = c.family()?;
    let tol = c.tol();
    let (result, problem) = parallel::sidon(&family, tol, max_orthants, pool)?;
    let lists = family.index_lists();
    let witness: Vec<Value> = lists
        .iter()
        .zip(result.witness.coeffs())
        .enumerate()
        .map(|(k, (set, &a))| {
            let mut entry = json!({ "set": set, "coeff": a });
            if let Some(exact) = &result.exact_witness {
                entry["coeff_exact"] = rational(&exact[k]);
            }
            entry
        })
        .collect();
    let json = json!({
        "command": "sidon",
        "method": "orbit-enumeration-lp",
        "family": family_summary(&family),
        "parameters": { "tol": tol, "max_orthants": max_orthants, "seed": c.seed() },
        "value": result.value,
        "value_exact": result.exact_value.as_ref().map(rational),
        "witness": witness,
        "witness_sup": result.witness_sup,
        "orthants_solved": result.orthants_solved,
        "sign_patterns": problem.candidate_count(),
        "automorphisms": problem.automorphism_count(),
    });
    let rows = lists
        .iter()
        .zip(result.witness.coeffs())
        .map(|(set, &a)| {
            let set: Vec<String> = set.iter().map(usize::to_string).collect();
            vec![set.join(" "), f(a)]
        })
        .collect();
    Ok(Report::new(json, vec!["set", "coeff"], rows))
}

fn kappa(c: &Common) -> Result<Report, CliError> {
    let tol = c.tol.unwrap_or(DEFAULT_KAPPA_TOL);
    let k = kappa_estimate(tol)?;
    let json = json!({
        "command": "kappa",
        "method": "partial-product",
        "parameters": { "tol": tol, "seed": c.seed() },
        "value": k.value,
        "error_bound": k.error_bound,
        "cutoff": k.cutoff,
    });
    let row = vec![f(tol), f(k.value), f(k.error_bound), k.cutoff.to_string()];
    Ok(Report::new(json, vec!["tol", "value", "error_bound", "cutoff"], vec![row]))
}

fn verify(c: &Common, suite: Suite, max_n: usize, pool: &ThreadPool) -> Result<Report, CliError> {
    let cfg = SuiteConfig {
        max_n,
        seed: c.seed(),
        ..SuiteConfig::default()
    };
    let (json, reports) = if suite == Suite::Combinatorics {
        let (mut object, reports) = suites::combinatorics(&cfg, pool)?;
        object["reports"] = Value::Array(reports.iter().map(bounds_report).collect());
        (object, reports)
    } else {
        let reports = suites::run(suite, &cfg, pool)?;
        (Value::Array(reports.iter().map(bounds_report).collect()), reports)
    };
    let rows = reports
        .iter()
        .map(|r| vec![format!("{:?}", r.name), f(r.lhs), f(r.rhs), r.pass.to_string()])
        .collect();
    let failing: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    let mut report = Report::new(json, vec!["name", "lhs", "rhs", "pass"], rows);
    if !failing.is_empty() {
        report.failed = Some(failing.join("; "));
    }
    Ok(report)
}

fn families(c: &Common) -> Result<Report, CliError> {
    let family = c.family()?;
    let file = FamilyFile::from_family(&family);
    let rows = family
        .index_lists()
        .iter()
        .map(|set| vec![set.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")])
        .collect();
    Ok(Report::new(serde_json::to_value(file)?, vec!["set"], rows))
}

fn primes(c: &Common, pool: &ThreadPool) -> Result<Report, CliError> {
    let n = c.require_n()?;
    let singles = prime_singleton_report(n)?;
    let mut json = json!({
        "command": "primes",
        "method": "haagerup-closed-form",
        "parameters": { "N": n, "seed": c.seed() },
        "prime_singletons": {
            "prime_count": singles.prime_count,
            "lambda": rational(&singles.lambda),
            "lambda_f64": to_f64(&singles.lambda),
            "ratio": singles.ratio,
        },
    });
    let mut row = vec![n.to_string(), singles.prime_count.to_string(), f(to_f64(&singles.lambda)), f(singles.ratio)];
    if n >= cube_constants_core::projection::MIN_SQUAREFREE_N {
        let samples = c.samples.unwrap_or(DEFAULT_SAMPLES);
        let r = parallel::squarefree_mc(n, samples, c.seed(), pool)?;
        json["parameters"]["samples"] = json!(samples);
        json["squarefree"] = json!({
            "method": "monte-carlo",
            "family_size": r.family_size,
            "estimate": estimate_json(&r.estimate),
            "ratio": r.ratio,
            "exact": r.exact.as_ref().map(rational),
            "within_4se": r.within_4se,
        });
        row.extend([r.family_size.to_string(), f(r.estimate.mean), f(r.estimate.stderr), f(r.ratio)]);
    } else {
        row.extend(["".into(), "".into(), "".into(), "".into()]);
    }
    let columns = vec![
        "N",
        "prime_count",
        "prime_lambda",
        "prime_ratio",
        "squarefree_size",
        "squarefree_mean",
        "squarefree_stderr",
        "squarefree_ratio",
    ];
    Ok(Report::new(json, columns, vec![row]))
}

/// Runs a parsed command; returns the rendered output and the exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let c = &cli.common;
    let pool = parallel::pool(parallel::thread_count(c.threads)?)?;
    let report = match &cli.command {
        Command::Exact => exact(c, &pool)?,
        Command::Mc => mc(c, &pool)?,
        Command::Limit { ns } => limit(c, ns, &pool)?,
        Command::Table => table(c, &pool)?,
        Command::Sidon { max_orthants } => sidon(c, *max_orthants, &pool)?,
        Command::Kappa => kappa(c)?,
        Command::Verify { positional, suite, max_n } => {
            let suite = match (positional, suite) {
                (Some(a), Some(b)) if a != b => {
                    return Err(CliError::Usage("conflicting suites".into()));
                }
                (a, b) => a.or(*b).unwrap_or(Suite::All),
            };
            verify(c, suite, *max_n, &pool)?
        }
        Command::Families => families(c)?,
        Command::Primes => primes(c, &pool)?,
    };
    let default_format = if matches!(cli.command, Command::Table) { Format::Csv } else { Format::Json };
    let text = match c.format.unwrap_or(default_format) {
        Format::Json => render_json(&report.json),
        Format::Csv => render_csv(&report.columns, &report.rows),
    };
    let code = if report.failed.is_some() { EXIT_FAILED } else { EXIT_OK };
    Ok((text, code))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = execute(&cli).and_then(|(text, code)| {
        emit(&text, cli.common.out.as_ref())?;
        Ok(code)
    });
    match result {
        Ok(code) => {
            if code == EXIT_FAILED {
                eprintln!("cube-constants: some checks failed");
            }
            code
        }
        Err(e) => {
            eprintln!("cube-constants: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}
