//! Command-line front end: `run`, `list`, `describe`, `validate`, `checks`
//! and `bench`.
//!
//! Exit codes: 0 success, 1 validation or data failure, 2 usage, 3 I/O.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::EvaluationError;
use crate::facade::{blocks, EvaluateOptions};
use crate::inputs::Inputs;
use crate::io::{read_image, read_labels, read_mask, read_matrix, read_reals};
use crate::registry::{registry, MetricDescriptor, ParamValue, RawParams, ResolvedParams};
use crate::segmentation::percentile_linear;
use crate::types::Task;
use crate::validation::{validate_all, Severity, ValidationConfig, ValidationReport, CHECKS};
use crate::value::{MetricValue, WarningRecord};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Failure = 1,
    Usage = 2,
    Io = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Io(String),
    /// Validation stopped the run; the report has already been printed.
    Blocked,
    /// The reader of stdout went away, e.g. `metricus list | head -1`.
    Closed,
}

impl From<EvaluationError> for CliError {
    fn from(err: EvaluationError) -> Self {
        match err {
            EvaluationError::IoError(m) => Self::Io(m),
            EvaluationError::InvalidParameter(_) | EvaluationError::LabelError(_) => Self::Usage(err.to_string()),
            other => Self::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            return Self::Closed;
        }
        Self::Io(err.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "metricus", version, about = "Evaluate ML metrics on CSV and NPY files")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Skip the first row of every CSV input.
    #[arg(long, global = true)]
    header: bool,
    /// Compute without running the validators.
    #[arg(long, global = true, help_heading = "Validation")]
    no_validate: bool,
    /// Treat validation warnings as failures.
    #[arg(long, global = true, help_heading = "Validation")]
    strict: bool,
    /// Seed for validation subsampling.
    #[arg(long, global = true, help_heading = "Validation", default_value_t = 0)]
    seed: u64,
    /// Comma-separated check ids to run; all checks by default.
    #[arg(long, global = true, help_heading = "Validation", value_delimiter = ',')]
    checks: Option<Vec<String>>,
    /// |z| above which a value is reported as an outlier [default: 3].
    #[arg(long, global = true, help_heading = "Validation", value_name = "Z")]
    outlier_z: Option<f64>,
    /// Minority/majority class ratio below which imbalance is reported [default: 0.1].
    #[arg(long, global = true, help_heading = "Validation", value_name = "RATIO")]
    imbalance_ratio: Option<f64>,
    /// |correlation| at which two features count as collinear [default: 0.95].
    #[arg(long, global = true, help_heading = "Validation", value_name = "R")]
    corr_threshold: Option<f64>,
    /// Element count above which validation subsamples [default: 1000000].
    #[arg(long, global = true, help_heading = "Validation", value_name = "N")]
    sample_threshold: Option<usize>,
    /// Subsample size once sampling engages [default: 100000].
    #[arg(long, global = true, help_heading = "Validation", value_name = "N")]
    sample_size: Option<usize>,
    /// Disable ANSI styling (also via METRICUS_NO_COLOR).
    #[arg(long, global = true)]
    no_color: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute one metric.
    Run(RunArgs),
    /// List registered metrics.
    List {
        /// Only metrics of this task.
        #[arg(long)]
        task: Option<String>,
    },
    /// Show a metric's parameters, inputs and documentation.
    Describe { metric: String },
    /// Run the validators on a set of inputs.
    Validate(ValidateArgs),
    /// List validation check ids.
    Checks,
    /// Time repeated evaluations of one metric.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    metric: String,
    /// Expected task; must match the metric's.
    #[arg(long)]
    task: Option<String>,
    /// Input file for a role, e.g. `-i y_true=truth.csv`.
    #[arg(short = 'i', long = "input", value_name = "ROLE=PATH", value_parser = parse_input)]
    inputs: Vec<(String, PathBuf)>,
    #[command(flatten)]
    params: ParamFlags,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Timed evaluations.
    #[arg(long, default_value_t = 100)]
    repeat: usize,
    /// Untimed evaluations before timing starts; at most `--repeat`.
    #[arg(long, default_value_t = 10)]
    warmup: usize,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    task: String,
    /// Input file for a role, e.g. `-i y_true=truth.csv`.
    #[arg(short = 'i', long = "input", value_name = "ROLE=PATH", value_parser = parse_input)]
    inputs: Vec<(String, PathBuf)>,
    /// Metric the inputs are meant for; enables metric-specific checks.
    #[arg(long)]
    metric: Option<String>,
    /// Declared pixel range for image checks.
    #[arg(long)]
    data_range: Option<f64>,
}

#[derive(Debug, Default, Args)]
#[command(next_help_heading = "Metric parameters (see `metricus describe METRIC`)")]
struct ParamFlags {
    /// none, macro, micro or weighted.
    #[arg(long)]
    average: Option<String>,
    /// F-beta weight of recall.
    #[arg(long)]
    beta: Option<String>,
    /// 0 or 1, used when a rate's denominator is zero.
    #[arg(long)]
    zero_division: Option<String>,
    /// Comma-separated ascending label set covering every observed label.
    #[arg(long, allow_hyphen_values = true)]
    labels: Option<String>,
    /// Top-k cutoff.
    #[arg(long)]
    k: Option<String>,
    /// Log-loss probability clip.
    #[arg(long)]
    eps: Option<String>,
    /// Huber threshold.
    #[arg(long)]
    delta: Option<String>,
    /// Tweedie power.
    #[arg(long, allow_hyphen_values = true)]
    power: Option<String>,
    /// Pinball quantile in (0, 1).
    #[arg(long)]
    quantile: Option<String>,
    /// Adjusted R² (needs --n-features).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    adjusted: Option<String>,
    /// Predictor count for adjusted R².
    #[arg(long)]
    n_features: Option<String>,
    /// Hausdorff percentile in (0, 100], e.g. 95.
    #[arg(long)]
    percentile: Option<String>,
    /// Comma-separated voxel spacing per axis.
    #[arg(long)]
    spacing: Option<String>,
    /// Odd SSIM window side [default: 7].
    #[arg(long)]
    window_size: Option<String>,
    /// Pixel value range L.
    #[arg(long)]
    data_range: Option<String>,
    /// Silhouette distance: euclidean or manhattan.
    #[arg(long)]
    distance: Option<String>,
    /// SSIM K1 constant.
    #[arg(long)]
    k1: Option<String>,
    /// SSIM K2 constant.
    #[arg(long)]
    k2: Option<String>,
    /// Any parameter as `name=value`.
    #[arg(short = 'p', long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    extra: Vec<(String, String)>,
}

fn split_pair(s: &str, what: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() && !v.is_empty() => Ok((k.trim().to_string(), v.to_string())),
        _ => Err(format!("expected {what}, got {s:?}")),
    }
}

fn parse_input(s: &str) -> Result<(String, PathBuf), String> {
    split_pair(s, "ROLE=PATH").map(|(k, v)| (k, PathBuf::from(v)))
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    split_pair(s, "NAME=VALUE")
}

impl ParamFlags {
    fn to_raw(&self) -> CliResult<RawParams> {
        let named = [
            ("average", &self.average),
            ("beta", &self.beta),
            ("zero_division", &self.zero_division),
            ("labels", &self.labels),
            ("k", &self.k),
            ("eps", &self.eps),
            ("delta", &self.delta),
            ("power", &self.power),
            ("quantile", &self.quantile),
            ("adjusted", &self.adjusted),
            ("n_features", &self.n_features),
            ("percentile", &self.percentile),
            ("spacing", &self.spacing),
            ("window_size", &self.window_size),
            ("data_range", &self.data_range),
            ("distance", &self.distance),
            ("k1", &self.k1),
            ("k2", &self.k2),
        ];
        let mut raw: RawParams = named
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        for (k, v) in &self.extra {
            let key = k.replace('-', "_");
            if let Some(prev) = raw.get(&key) {
                if prev != v {
                    return Err(CliError::Usage(format!("parameter `{key}` given twice ({prev} and {v})")));
                }
            }
            raw.insert(key, v.clone());
        }
        Ok(raw)
    }
}

struct Style {
    color: bool,
}

impl Style {
    fn severity(&self, s: Severity) -> String {
        if !self.color {
            return s.as_str().to_string();
        }
        let code = match s {
            Severity::Error => "31;1",
            Severity::Warning => "33",
            Severity::Info => "2",
        };
        format!("\x1b[{code}m{}\x1b[0m", s.as_str())
    }

    fn bold(&self, text: &str) -> String {
        if self.color {
            format!("\x1b[1m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

/// JSON document printed by `run --format json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub metric: String,
    pub task: Task,
    pub params: BTreeMap<String, ParamValue>,
    pub value: MetricValue,
    pub warnings: Vec<WarningRecord>,
    pub validation: ValidationReport,
    pub elapsed_ms: f64,
}

/// Order statistics of a `bench` run, in milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub min: f64,
    pub mean: f64,
    pub p50: f64,
    pub p95: f64,
}

impl Timing {
    /// Panics on an empty slice.
    pub fn from_samples(samples: &[f64]) -> Self {
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self {
            min: sorted[0],
            mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
            p50: percentile_linear(&sorted, 50.0),
            p95: percentile_linear(&sorted, 95.0),
        }
    }
}

#[derive(Debug, Serialize)]
struct BenchResult<'a> {
    metric: &'a str,
    task: Task,
    params: &'a BTreeMap<String, ParamValue>,
    value: &'a MetricValue,
    warnings: &'a [WarningRecord],
    validation: &'a ValidationReport,
    repeat: usize,
    warmup: usize,
    timing_ms: Timing,
}

#[derive(Debug, Serialize)]
struct BlockedResult<'a> {
    metric: &'a str,
    task: Task,
    error: &'a str,
    validation: &'a ValidationReport,
}

fn roles_for(task: Task) -> &'static [&'static str] {
    match task {
        Task::Regression => &["y_true", "y_pred", "x"],
        Task::Classification => &["y_true", "y_pred", "scores"],
        Task::Clustering => &["labels_true", "labels_pred", "labels", "x"],
        Task::Segmentation => &["y_true", "y_pred"],
        Task::Image => &["reference", "test"],
    }
}

fn collect_roles(task: Task, given: &[(String, PathBuf)]) -> CliResult<BTreeMap<String, PathBuf>> {
    let allowed = roles_for(task);
    let mut files = BTreeMap::new();
    for (role, path) in given {
        let role = if task == Task::Clustering && role == "labels" { "labels_pred" } else { role.as_str() };
        if !allowed.contains(&role) {
            return Err(CliError::Usage(format!(
                "unknown input role `{role}` for {task} (accepted: {})",
                allowed.join(", ")
            )));
        }
        if files.insert(role.to_string(), path.clone()).is_some() {
            return Err(CliError::Usage(format!("input role `{role}` given twice")));
        }
    }
    Ok(files)
}

fn require<'a>(files: &'a BTreeMap<String, PathBuf>, role: &str) -> CliResult<&'a PathBuf> {
    files
        .get(role)
        .ok_or_else(|| CliError::Usage(format!("missing input `{role}` (pass -i {role}=PATH)")))
}

fn load_inputs(task: Task, files: &BTreeMap<String, PathBuf>, header: bool) -> CliResult<Inputs> {
    let opt = |role: &str| files.get(role);
    Ok(match task {
        Task::Regression => Inputs::Regression {
            y_true: read_reals(require(files, "y_true")?, header)?,
            y_pred: read_reals(require(files, "y_pred")?, header)?,
            features: opt("x").map(|p| read_matrix(p, header)).transpose()?,
        },
        Task::Classification => {
            let y_true = read_labels(require(files, "y_true")?, header)?;
            let y_pred = opt("y_pred").map(|p| read_labels(p, header)).transpose()?;
            let scores = opt("scores").map(|p| read_matrix(p, header)).transpose()?;
            if y_pred.is_none() && scores.is_none() {
                return Err(CliError::Usage("classification needs `y_pred` or `scores`".into()));
            }
            Inputs::Classification { y_true, y_pred, scores }
        }
        Task::Clustering => Inputs::Clustering {
            labels_true: opt("labels_true").map(|p| read_labels(p, header)).transpose()?,
            labels_pred: read_labels(require(files, "labels_pred")?, header)?,
            features: opt("x").map(|p| read_matrix(p, header)).transpose()?,
        },
        Task::Segmentation => Inputs::segmentation(
            read_mask(require(files, "y_true")?, header)?,
            read_mask(require(files, "y_pred")?, header)?,
        ),
        Task::Image => Inputs::image(
            read_image(require(files, "reference")?, header)?,
            read_image(require(files, "test")?, header)?,
        ),
    })
}

fn parse_task(s: &str) -> CliResult<Task> {
    s.parse::<Task>().map_err(CliError::from)
}

fn config_from(cli: &Cli) -> CliResult<ValidationConfig> {
    let mut config = ValidationConfig {
        strict: cli.strict,
        seed: cli.seed,
        ..Default::default()
    };
    if let Some(ids) = &cli.checks {
        config = config.with_checks(ids.iter().map(|s| s.trim().to_string()));
    }
    if let Some(z) = cli.outlier_z {
        config.outlier_z = z;
    }
    if let Some(r) = cli.imbalance_ratio {
        config.imbalance_ratio = r;
    }
    if let Some(r) = cli.corr_threshold {
        config.corr_threshold = r;
    }
    if let Some(n) = cli.sample_threshold {
        config.sample_threshold = n;
    }
    if let Some(n) = cli.sample_size {
        config.sample_size = n;
    }
    config.check()?;
    Ok(config)
}

fn declared_range(params: &ResolvedParams) -> Option<f64> {
    match params.values().get("data_range")? {
        ParamValue::Real(r) => Some(*r),
        ParamValue::Int(i) => Some(*i as f64),
        _ => None,
    }
}

/// Everything `run` and `bench` need before the metric is called.
struct Prepared<'a> {
    descriptor: &'a MetricDescriptor,
    params: ResolvedParams,
    inputs: Inputs,
    report: ValidationReport,
}

struct Ctx<'w> {
    out: &'w mut dyn Write,
    style: Style,
    format: Format,
}

fn prepare(cli: &Cli, args: &RunArgs, ctx: &mut Ctx<'_>) -> CliResult<Prepared<'static>> {
    let reg = registry();
    let descriptor = reg.describe(&args.metric)?;
    if let Some(task) = &args.task {
        let task = parse_task(task)?;
        if task != descriptor.task {
            return Err(CliError::Usage(format!(
                "metric `{}` belongs to {}, not {task}",
                descriptor.name, descriptor.task
            )));
        }
    }
    let params = ResolvedParams::resolve(descriptor, &args.params.to_raw()?)?;
    let files = collect_roles(descriptor.task, &args.inputs)?;
    for role in &descriptor.inputs {
        let role = if role == "labels" { "labels_pred" } else { role.as_str() };
        require(&files, role)?;
    }
    let config = config_from(cli)?;
    let inputs = load_inputs(descriptor.task, &files, cli.header)?;
    let options = EvaluateOptions {
        no_validate: cli.no_validate,
        allow_errors: false,
        config: ValidationConfig {
            target_metric: Some(descriptor.name.clone()),
            data_range: declared_range(&params),
            ..config
        },
    };
    let report = if options.no_validate {
        ValidationReport::skipped()
    } else {
        let report = validate_all(descriptor.task, &inputs, &options.config)?;
        if blocks(&report, &options) {
            print_blocked(ctx, descriptor, &report)?;
            return Err(CliError::Blocked);
        }
        report
    };
    Ok(Prepared { descriptor, params, inputs, report })
}

fn print_blocked(ctx: &mut Ctx<'_>, descriptor: &MetricDescriptor, report: &ValidationReport) -> CliResult<()> {
    let error = "validation failed";
    match ctx.format {
        Format::Json => {
            let doc = BlockedResult { metric: &descriptor.name, task: descriptor.task, error, validation: report };
            writeln!(ctx.out, "{}", to_json(&doc))?;
        }
        Format::Text => {
            writeln!(ctx.out, "{}: {error}", ctx.style.bold(&descriptor.name))?;
            print_findings(ctx, report)?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("CLI documents always serialize")
}

fn print_findings(ctx: &mut Ctx<'_>, report: &ValidationReport) -> CliResult<()> {
    for f in &report.findings {
        writeln!(ctx.out, "  {:<7} {:<18} {}", ctx.style.severity(f.severity), f.check_id, f.message)?;
    }
    Ok(())
}

fn summary_line(report: &ValidationReport) -> String {
    if report.skipped {
        return "skipped".to_string();
    }
    format!(
        "{} ({} error(s), {} warning(s), {} info){}",
        if report.passed { "passed" } else { "failed" },
        report.count(Severity::Error),
        report.count(Severity::Warning),
        report.count(Severity::Info),
        if report.sampled { ", sampled" } else { "" }
    )
}

fn print_warnings(ctx: &mut Ctx<'_>, warnings: &[WarningRecord]) -> CliResult<()> {
    for w in warnings {
        writeln!(ctx.out, "{} [{}] {}", ctx.style.severity(Severity::Warning), w.code, w.message)?;
    }
    Ok(())
}

fn cmd_run(cli: &Cli, args: &RunArgs, ctx: &mut Ctx<'_>) -> CliResult<()> {
    let p = prepare(cli, args, ctx)?;
    let start = Instant::now();
    let evaluation = registry().evaluate_resolved(&p.descriptor.name, &p.inputs, &p.params)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let result = RunResult {
        metric: p.descriptor.name.clone(),
        task: p.descriptor.task,
        params: p.params.values().clone(),
        value: evaluation.value,
        warnings: evaluation.warnings,
        validation: p.report,
        elapsed_ms,
    };
    match ctx.format {
        Format::Json => writeln!(ctx.out, "{}", to_json(&result))?,
        Format::Text => {
            writeln!(ctx.out, "{} = {}", ctx.style.bold(&result.metric), result.value)?;
            print_warnings(ctx, &result.warnings)?;
            writeln!(ctx.out, "validation: {}", summary_line(&result.validation))?;
            print_findings(ctx, &result.validation)?;
            writeln!(ctx.out, "elapsed: {:.3} ms", result.elapsed_ms)?;
        }
    }
    Ok(())
}

fn cmd_bench(cli: &Cli, args: &BenchArgs, ctx: &mut Ctx<'_>) -> CliResult<()> {
    if args.repeat == 0 {
        return Err(CliError::Usage("--repeat must be at least 1".into()));
    }
    if args.warmup > args.repeat {
        return Err(CliError::Usage(format!(
            "--warmup ({}) exceeds --repeat ({})",
            args.warmup, args.repeat
        )));
    }
    let p = prepare(cli, &args.run, ctx)?;
    let reg = registry();
    let name = &p.descriptor.name;
    for _ in 0..args.warmup {
        reg.evaluate_resolved(name, &p.inputs, &p.params)?;
    }
    let mut samples = Vec::with_capacity(args.repeat);
    let mut first = None;
    for _ in 0..args.repeat {
        let start = Instant::now();
        let evaluation = reg.evaluate_resolved(name, &p.inputs, &p.params)?;
        samples.push(start.elapsed().as_secs_f64() * 1e3);
        first.get_or_insert(evaluation);
    }
    let evaluation = first.expect("repeat is at least 1");
    let timing = Timing::from_samples(&samples);
    match ctx.format {
        Format::Json => {
            let doc = BenchResult {
                metric: name,
                task: p.descriptor.task,
                params: p.params.values(),
                value: &evaluation.value,
                warnings: &evaluation.warnings,
                validation: &p.report,
                repeat: args.repeat,
                warmup: args.warmup,
                timing_ms: timing,
            };
            writeln!(ctx.out, "{}", to_json(&doc))?;
        }
        Format::Text => {
            writeln!(ctx.out, "{} = {}", ctx.style.bold(name), evaluation.value)?;
            print_warnings(ctx, &evaluation.warnings)?;
            writeln!(ctx.out, "repeat {}, warmup {}", args.repeat, args.warmup)?;
            writeln!(
                ctx.out,
                "min {:.4} ms  mean {:.4} ms  p50 {:.4} ms  p95 {:.4} ms",
                timing.min, timing.mean, timing.p50, timing.p95
            )?;
        }
    }
    Ok(())
}

fn cmd_list(task: Option<&str>, ctx: &mut Ctx<'_>) -> CliResult<()> {
    let task = task.map(parse_task).transpose()?;
    let reg = registry();
    let descriptors: Vec<&MetricDescriptor> = reg
        .list(task)
        .iter()
        .map(|n| reg.describe(n).expect("listed names are registered"))
        .collect();
    match ctx.format {
        Format::Json => writeln!(ctx.out, "{}", to_json(&descriptors))?,
        Format::Text => {
            for d in descriptors {
                writeln!(ctx.out, "{:<32} {}", d.name, d.task)?;
            }
        }
    }
    Ok(())
}

fn cmd_describe(metric: &str, ctx: &mut Ctx<'_>) -> CliResult<()> {
    let d = registry().describe(metric)?;
    match ctx.format {
        Format::Json => writeln!(ctx.out, "{}", to_json(d))?,
        Format::Text => {
            writeln!(ctx.out, "{} ({})", ctx.style.bold(&d.name), d.task)?;
            writeln!(ctx.out, "  {}", d.doc)?;
            let kind = serde_json::to_value(d.value_kind).expect("value kinds serialize");
            writeln!(ctx.out, "value: {}", kind.as_str().unwrap_or_default())?;
            writeln!(ctx.out, "inputs: {}", d.inputs.join(", "))?;
            if d.params.is_empty() {
                writeln!(ctx.out, "params: none")?;
            } else {
                writeln!(ctx.out, "params:")?;
                for p in &d.params {
                    writeln!(
                        ctx.out,
                        "  {:<14} {:<12} default {:<10} {}",
                        p.name,
                        p.kind.as_str(),
                        p.default.to_string(),
                        p.constraint
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_validate(cli: &Cli, args: &ValidateArgs, ctx: &mut Ctx<'_>) -> CliResult<()> {
    let task = parse_task(&args.task)?;
    if let Some(metric) = &args.metric {
        let d = registry().describe(metric)?;
        if d.task != task {
            return Err(CliError::Usage(format!("metric `{metric}` belongs to {}, not {task}", d.task)));
        }
    }
    let mut config = config_from(cli)?;
    config.target_metric = args.metric.clone();
    config.data_range = args.data_range;
    config.check()?;
    let files = collect_roles(task, &args.inputs)?;
    let inputs = load_inputs(task, &files, cli.header)?;
    let report = validate_all(task, &inputs, &config)?;
    match ctx.format {
        Format::Json => writeln!(ctx.out, "{}", to_json(&report))?,
        Format::Text => {
            writeln!(ctx.out, "validation: {}", summary_line(&report))?;
            print_findings(ctx, &report)?;
        }
    }
    let failed = !report.passed || (config.strict && report.count(Severity::Warning) > 0);
    if failed {
        Err(CliError::Blocked)
    } else {
        Ok(())
    }
}

fn cmd_checks(ctx: &mut Ctx<'_>) -> CliResult<()> {
    match ctx.format {
        Format::Json => writeln!(ctx.out, "{}", to_json(&CHECKS))?,
        Format::Text => {
            for c in CHECKS {
                let tasks: Vec<&str> = c.tasks.iter().map(|t| t.as_str()).collect();
                writeln!(ctx.out, "{:<22} {:<8} {:<50} {}", c.id, c.severity, tasks.join(","), c.description)?;
            }
        }
    }
    Ok(())
}

fn color_enabled(cli: &Cli) -> bool {
    let disabled = std::env::var_os("METRICUS_NO_COLOR").is_some_and(|v| !v.is_empty());
    !cli.no_color && !disabled && std::io::stdout().is_terminal()
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { ExitStatus::Usage } else { ExitStatus::Success };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return status;
        }
    };
    let mut ctx = Ctx {
        out,
        style: Style { color: color_enabled(&cli) },
        format: cli.format,
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(&cli, args, &mut ctx),
        Command::List { task } => cmd_list(task.as_deref(), &mut ctx),
        Command::Describe { metric } => cmd_describe(metric, &mut ctx),
        Command::Validate(args) => cmd_validate(&cli, args, &mut ctx),
        Command::Checks => cmd_checks(&mut ctx),
        Command::Bench(args) => cmd_bench(&cli, args, &mut ctx),
    };
    let _ = ctx.out.flush();
    match result {
        Ok(()) => ExitStatus::Success,
        Err(e) => {
            let (status, msg) = match e {
                CliError::Usage(m) => (ExitStatus::Usage, Some(m)),
                CliError::Data(m) => (ExitStatus::Failure, Some(m)),
                CliError::Io(m) => (ExitStatus::Io, Some(m)),
                CliError::Blocked => (ExitStatus::Failure, None),
                CliError::Closed => (ExitStatus::Success, None),
            };
            if let Some(m) = msg {
                let _ = writeln!(err, "error: {m}");
            }
            status
        }
    }
}
