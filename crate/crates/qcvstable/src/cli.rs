//! The `qcvstable` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcvstable_core::estimators::{DEFAULT_NU_RANGE, DEFAULT_RATIO_RANGE, DEFAULT_TABLE_STEP};
use qcvstable_core::evaluation::{bootstrap_ci, MonteCarloConfig};
use qcvstable_core::stable::sample;
use qcvstable_core::{IntegrationConfig, Method, RatioSpec, StableParams};
use serde::Serialize;
use serde_json::json;

use crate::cache::{render_table, sha256_hex, write_atomic, TableCache, TableRequest};
use crate::data::DataFile;
use crate::error::{Error, Result};
use crate::parallel::{run_bias_grid, run_rmse_experiment, with_threads};
use crate::prepare::{prepare, PrepareOptions};
use crate::report::{rmse_rows, robustness_rows, to_csv, to_json, ReportRow, RunManifest, TableDigest};

/// Replications behind `--full`.
pub const FULL_REPLICATIONS: usize = 100_000;
/// Replications of `evaluate` and `robustness` when `-k` is not given.
pub const DEFAULT_REPLICATIONS: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "qcvstable", version, about = "Stability-index estimation for symmetric stable laws")]
pub struct Cli {
    /// Worker threads for table building and experiments.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Table cache directory (default: $QCVSTABLE_CACHE_DIR, else a temp dir).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a ratio or McCulloch table.
    Table(TableArgs),
    /// Estimate α from a data file.
    Estimate(EstimateArgs),
    /// Draw a stable sample into a file.
    Simulate(SimulateArgs),
    /// Monte Carlo RMSE over symmetric samples.
    Evaluate(EvaluateArgs),
    /// Mean estimates over a (α, β) grid and their distance from β = 0.
    Robustness(RobustnessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    N1,
    N2,
    Mcculloch,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum, default_value = "n1", conflicts_with = "split")]
    pub spec: TableName,
    /// Custom split `a,b,d`.
    #[arg(long, value_parser = parse_split)]
    pub split: Option<[f64; 3]>,
    /// Name recorded for a custom split.
    #[arg(long, default_value = "custom")]
    pub name: String,
    #[arg(long)]
    pub alpha_lo: Option<f64>,
    #[arg(long)]
    pub alpha_hi: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TABLE_STEP)]
    pub step: f64,
    /// Write here instead of the cache.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    pub input: PathBuf,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    /// CSV column name (default: first numeric column).
    #[arg(long)]
    pub column: Option<String>,
    /// Number of bootstrap resamples.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Bootstrap seed; generated and reported when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Median/IQR standardization before the likelihood fit; the other
    /// methods are affine invariant.
    #[arg(long)]
    pub standardize: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 0.0)]
    pub location: f64,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "n1,n2,mch,reg,mle")]
    pub methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_value = "1.0,1.1,1.2,1.3,1.4,1.5,1.6,1.7,1.8,1.9,2.0")]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "250,500,1000")]
    pub ns: Vec<usize>,
    /// Replications per cell.
    #[arg(short, long, conflicts_with = "full")]
    pub k: Option<usize>,
    /// Use 100000 replications per cell.
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RobustnessArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "n1,n2")]
    pub methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_value = "1.1,1.2,1.3,1.4,1.5,1.6,1.7,1.8,1.9,2.0")]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")]
    pub betas: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(short, long, default_value_t = DEFAULT_REPLICATIONS)]
    pub k: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    match s.parse::<Method>() {
        Ok(Method::Qcv) | Err(_) => Err(format!("unknown method {s:?}; expected one of n1, n2, mch, reg, mle, m1, m2")),
        Ok(m) => Ok(m),
    }
}

fn parse_split(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    <[f64; 3]>::try_from(parts).map_err(|_| "expected three numbers a,b,d".to_owned())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn resolve_seed(seed: Option<u64>, err: &mut dyn Write) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        let _ = writeln!(err, "seed {s}");
        s
    })
}

/// Writes `text` to `out` when given (with its manifest beside it),
/// otherwise to `stdout` with the manifest on `stderr`.
fn emit(
    text: &str,
    out: Option<&Path>,
    manifest: &RunManifest,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let io = |e| Error::io("<stdout>", e);
    match out {
        Some(path) => {
            write_atomic(path, text)?;
            let m = manifest.write_beside(path)?;
            writeln!(
                stdout,
                "{}",
                json!({ "output": path.display().to_string(), "manifest": m.display().to_string() })
            )
            .map_err(io)?;
        }
        None => {
            stdout.write_all(text.as_bytes()).map_err(io)?;
            writeln!(stderr, "{}", manifest.to_json()?).map_err(io)?;
        }
    }
    Ok(())
}

fn render_rows(rows: &[ReportRow], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => Ok(to_json(rows)? + "\n"),
    }
}

fn global_args(cli: &Cli) -> Vec<String> {
    let mut v = vec!["qcvstable".to_owned()];
    if let Some(t) = cli.threads {
        v.extend(["--threads".to_owned(), t.to_string()]);
    }
    if let Some(d) = &cli.cache_dir {
        v.extend(["--cache-dir".to_owned(), d.display().to_string()]);
    }
    v
}

/// Parses `args` (program name first) and runs the command. Help and
/// version requests come back as [`Error::Usage`] too.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string()))?;
    execute(&cli, stdout, stderr)
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let cache = cli
        .cache_dir
        .clone()
        .map_or_else(TableCache::from_env, TableCache::new);
    let argv = global_args(&cli);
    // buffered so the command can run on a worker pool
    let mut out = Vec::new();
    let mut err = Vec::new();
    let result = with_threads(cli.threads, || {
        let (o, e): (&mut dyn Write, &mut dyn Write) = (&mut out, &mut err);
        match &cli.command {
            Command::Table(a) => cmd_table(a, &cache, argv, o),
            Command::Estimate(a) => cmd_estimate(a, &cache, o, e),
            Command::Simulate(a) => cmd_simulate(a, argv, o, e),
            Command::Evaluate(a) => cmd_evaluate(a, &cache, argv, o, e),
            Command::Robustness(a) => cmd_robustness(a, &cache, argv, o, e),
        }
    })?;
    stderr.write_all(&err).map_err(|e| Error::io("<stderr>", e))?;
    stdout.write_all(&out).map_err(|e| Error::io("<stdout>", e))?;
    result
}

fn cmd_table(a: &TableArgs, cache: &TableCache, mut argv: Vec<String>, stdout: &mut dyn Write) -> Result<()> {
    let cfg = IntegrationConfig::default();
    let (spec, range) = match (&a.split, a.spec) {
        (Some(s), _) => (Some(RatioSpec::new(s[0], s[1], s[2], a.name.clone())?), DEFAULT_RATIO_RANGE),
        (None, TableName::N1) => (Some(RatioSpec::n1()), DEFAULT_RATIO_RANGE),
        (None, TableName::N2) => (Some(RatioSpec::n2()), DEFAULT_RATIO_RANGE),
        (None, TableName::Mcculloch) => (None, DEFAULT_NU_RANGE),
    };
    let lo = a.alpha_lo.unwrap_or(range.0);
    let hi = a.alpha_hi.unwrap_or(range.1);
    let req = match spec {
        Some(spec) => TableRequest::ratio(spec, lo, hi, a.step, cfg),
        None => TableRequest::nu(lo, hi, a.step, cfg),
    };
    let (path, digest, rows, direction) = match &a.out {
        Some(out) => {
            let table = req.compute()?;
            let text = render_table(&req, &table);
            write_atomic(out, &text)?;
            argv.push("table".into());
            match &a.split {
                Some(s) => argv.extend(["--split".into(), join(s), "--name".into(), a.name.clone()]),
                None => argv.extend([
                    "--spec".into(),
                    a.spec.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default(),
                ]),
            }
            argv.extend([
                "--alpha-lo".into(),
                lo.to_string(),
                "--alpha-hi".into(),
                hi.to_string(),
                "--step".into(),
                a.step.to_string(),
                "--out".into(),
                out.display().to_string(),
            ]);
            let digest = sha256_hex(text.as_bytes());
            let mut manifest = RunManifest::new(
                "table",
                argv,
                json!({ "alpha_lo": lo, "alpha_hi": hi, "step": a.step, "file_name": req.file_name() }),
                None,
            );
            manifest.table_digests.push(TableDigest {
                name: req.file_name(),
                path: out.display().to_string(),
                sha256: digest.clone(),
            });
            manifest.write_beside(out)?;
            (out.clone(), digest, table.alphas().len(), table.direction())
        }
        None => {
            let cached = cache.load_or_build(&req)?;
            let rows = cached.table.alphas().len();
            let dir = cached.table.direction();
            (cached.path, cached.digest, rows, dir)
        }
    };
    writeln!(
        stdout,
        "{}",
        json!({
            "path": path.display().to_string(),
            "sha256": digest,
            "rows": rows,
            "direction": direction.name(),
        })
    )
    .map_err(|e| Error::io("<stdout>", e))
}

#[derive(Debug, Serialize)]
struct CiJson {
    low: f64,
    high: f64,
    level: f64,
    #[serde(rename = "B")]
    resamples: usize,
}

#[derive(Debug, Serialize)]
struct EstimateJson {
    method: String,
    alpha_hat: f64,
    clamped: bool,
    n: usize,
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ci: Option<CiJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failures: Option<usize>,
}

fn cmd_estimate(a: &EstimateArgs, cache: &TableCache, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let file = DataFile::read(&a.input, a.column.as_deref())?;
    let opts = PrepareOptions {
        mle_standardize: a.standardize,
        ..PrepareOptions::default()
    };
    let prepared = prepare(&[a.method], &opts, cache)?;
    let est = &prepared.estimators;
    let out = match a.bootstrap {
        None => {
            let r = est.estimate(a.method, &file.values)?;
            EstimateJson {
                method: r.method.name().to_owned(),
                alpha_hat: r.alpha_hat,
                clamped: r.clamped,
                n: file.values.len(),
                seed: None,
                ci: None,
                failures: None,
            }
        }
        Some(b) => {
            let seed = resolve_seed(a.seed, stderr);
            let r = bootstrap_ci(&file.values, a.method, b, a.level, seed, est)?;
            EstimateJson {
                method: r.point.method.name().to_owned(),
                alpha_hat: r.point.alpha_hat,
                clamped: r.point.clamped,
                n: file.values.len(),
                seed: Some(seed),
                ci: Some(CiJson {
                    low: r.ci_low,
                    high: r.ci_high,
                    level: r.level,
                    resamples: r.resamples,
                }),
                failures: Some(r.failures),
            }
        }
    };
    let text = serde_json::to_string(&out).map_err(|e| Error::Data(e.to_string()))?;
    writeln!(stdout, "{text}").map_err(|e| Error::io("<stdout>", e))
}

fn cmd_simulate(a: &SimulateArgs, mut argv: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let params = StableParams::new(a.alpha, a.beta, a.scale, a.location)?;
    if a.n == 0 {
        return Err(Error::Usage("--n must be positive".into()));
    }
    let seed = resolve_seed(a.seed, stderr);
    let mut text = String::with_capacity(a.n * 24);
    for x in sample(&params, a.n, seed) {
        text.push_str(&x.to_string());
        text.push('\n');
    }
    argv.extend([
        "simulate".into(),
        "--alpha".into(),
        a.alpha.to_string(),
        "--beta".into(),
        a.beta.to_string(),
        "--scale".into(),
        a.scale.to_string(),
        "--location".into(),
        a.location.to_string(),
        "--n".into(),
        a.n.to_string(),
        "--seed".into(),
        seed.to_string(),
        "--out".into(),
        a.out.display().to_string(),
    ]);
    let manifest = RunManifest::new(
        "simulate",
        argv,
        json!({
            "alpha": a.alpha,
            "beta": a.beta,
            "scale": a.scale,
            "location": a.location,
            "n": a.n,
            "parametrization": params.parametrization(),
        }),
        Some(seed),
    );
    emit(&text, Some(&a.out), &manifest, stdout, stderr)
}

fn monte_carlo_manifest(command: &str, argv: Vec<String>, cfg: &MonteCarloConfig, format: Format) -> RunManifest {
    let methods: Vec<&str> = cfg.methods.iter().map(|m| m.name()).collect();
    RunManifest::new(
        command,
        argv,
        json!({
            "replications": cfg.replications,
            "sample_sizes": cfg.sample_sizes,
            "alphas": cfg.alphas,
            "betas": cfg.betas,
            "methods": methods,
            "reg": { "fit_intercept": false, "standardize": false },
            "format": format,
        }),
        Some(cfg.master_seed),
    )
}

fn cmd_evaluate(
    a: &EvaluateArgs,
    cache: &TableCache,
    mut argv: Vec<String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let k = if a.full {
        FULL_REPLICATIONS
    } else {
        a.k.unwrap_or(DEFAULT_REPLICATIONS)
    };
    let cfg = MonteCarloConfig {
        replications: k,
        sample_sizes: a.ns.clone(),
        alphas: a.alphas.clone(),
        betas: vec![0.0],
        methods: a.methods.clone(),
        master_seed: a.seed.unwrap_or(0),
    };
    cfg.validate()?;
    let cfg = MonteCarloConfig {
        master_seed: resolve_seed(a.seed, stderr),
        ..cfg
    };
    let prepared = prepare(&cfg.methods, &PrepareOptions::simulation(), cache)?;
    let report = run_rmse_experiment(&cfg, &prepared.estimators)?;
    let text = render_rows(&rmse_rows(&report), a.format)?;
    argv.extend([
        "evaluate".into(),
        "--methods".into(),
        join(&cfg.methods),
        "--alphas".into(),
        join(&cfg.alphas),
        "--ns".into(),
        join(&cfg.sample_sizes),
        "-k".into(),
        k.to_string(),
        "--seed".into(),
        cfg.master_seed.to_string(),
        "--format".into(),
        format_name(a.format).into(),
    ]);
    if let Some(out) = &a.out {
        argv.extend(["--out".into(), out.display().to_string()]);
    }
    let mut manifest = monte_carlo_manifest("evaluate", argv, &cfg, a.format);
    manifest.table_digests = prepared.digests;
    emit(&text, a.out.as_deref(), &manifest, stdout, stderr)
}

fn cmd_robustness(
    a: &RobustnessArgs,
    cache: &TableCache,
    mut argv: Vec<String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    if !a.betas.contains(&0.0) {
        return Err(Error::Usage("--betas must include 0".into()));
    }
    let cfg = MonteCarloConfig {
        replications: a.k,
        sample_sizes: vec![a.n],
        alphas: a.alphas.clone(),
        betas: a.betas.clone(),
        methods: a.methods.clone(),
        master_seed: a.seed.unwrap_or(0),
    };
    cfg.validate()?;
    let cfg = MonteCarloConfig {
        master_seed: resolve_seed(a.seed, stderr),
        ..cfg
    };
    let prepared = prepare(&cfg.methods, &PrepareOptions::simulation(), cache)?;
    let grid = run_bias_grid(&cfg, &prepared.estimators)?;
    let text = render_rows(&robustness_rows(&grid)?, a.format)?;
    argv.extend([
        "robustness".into(),
        "--methods".into(),
        join(&cfg.methods),
        "--alphas".into(),
        join(&cfg.alphas),
        "--betas".into(),
        join(&cfg.betas),
        "--n".into(),
        a.n.to_string(),
        "-k".into(),
        a.k.to_string(),
        "--seed".into(),
        cfg.master_seed.to_string(),
        "--format".into(),
        format_name(a.format).into(),
    ]);
    if let Some(out) = &a.out {
        argv.extend(["--out".into(), out.display().to_string()]);
    }
    let mut manifest = monte_carlo_manifest("robustness", argv, &cfg, a.format);
    manifest.table_digests = prepared.digests;
    emit(&text, a.out.as_deref(), &manifest, stdout, stderr)
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Runs the process and returns its exit code. Errors go to stderr as one
/// JSON object `{"error": kind, "code": n, "message": text}`.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => Ok(cli),
        Err(e) if !e.use_stderr() => {
            // --help, --version
            let _ = e.print();
            return 0;
        }
        Err(e) => Err(Error::Usage(e.to_string())),
    };
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    match cli.and_then(|cli| execute(&cli, &mut stdout, &mut stderr)) {
        Ok(()) => 0,
        Err(e) => {
            let code = e.exit_code();
            let _ = writeln!(
                stderr,
                "{}",
                json!({ "error": e.kind(), "code": code, "message": e.to_string() })
            );
            code
        }
    }
}
